//! Finite frame algebra: Gram and frame operators, bounds, Parseval-ization,
//! orthonormalization of Riesz sequences, canonical duals, and the
//! analysis/synthesis pair.
//!
//! A [`FrameSystem`] is an *indexed* family: repeated vectors are allowed
//! and are what make a system fail the Riesz property.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, inner, ComplexMatrix, SpectralReport};

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSystem {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    labels: Vec<String>,
}

impl FrameSystem {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                got: labels.len(),
            });
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { dim, vectors, labels })
    }

    /// System labelled by position.
    pub fn unlabeled(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let labels = (0..vectors.len()).map(|i| i.to_string()).collect();
        Self::new(dim, vectors, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn map_vectors(&self, op: &ComplexMatrix) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| op.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            vectors,
            labels: self.labels.clone(),
        })
    }
}

/// `G[i][j] = ⟨v_j, v_i⟩`.
pub fn gram(f: &FrameSystem) -> ComplexMatrix {
    let n = f.len();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = inner(&f.vectors[j], &f.vectors[i]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
        }
    }
    g
}

/// `S = Σ v_i v_i*`.
pub fn frame_operator(f: &FrameSystem) -> ComplexMatrix {
    let n = f.dim;
    let mut s = ComplexMatrix::zeros(n, n);
    for v in &f.vectors {
        for r in 0..n {
            if v[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                s[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    s
}

/// Spectrum of the frame operator. The system is a frame for ℂ^n when
/// `rank == dim` and then `A = min_nonzero`, `B = max`.
pub fn frame_bounds(f: &FrameSystem, tol: f64) -> Result<SpectralReport> {
    hermitian_eigen(&frame_operator(f), tol)
}

/// Spectrum of the Gram matrix. Riesz iff the smallest eigenvalue exceeds
/// `tol`.
pub fn riesz_bounds(f: &FrameSystem, tol: f64) -> Result<SpectralReport> {
    hermitian_eigen(&gram(f), tol)
}

fn require_frame(f: &FrameSystem, tol: f64) -> Result<()> {
    let report = frame_bounds(f, tol)?;
    if report.rank < f.dim || report.min_nonzero <= tol || f.dim == 0 {
        return Err(Error::NotAFrame {
            rank: report.rank,
            dim: f.dim,
            lower: report.min(),
        });
    }
    Ok(())
}

/// Whether the system is a Riesz sequence at tolerance `tol`.
pub fn is_riesz(report: &SpectralReport, tol: f64) -> bool {
    !report.is_empty() && report.min() > tol
}

/// `{S^{-1/2} v_i}`, a Parseval frame with the same index set.
pub fn parsevalize(f: &FrameSystem, tol: f64) -> Result<FrameSystem> {
    require_frame(f, tol)?;
    let root = linalg::inverse_sqrt(&frame_operator(f), tol)?;
    f.map_vectors(&root)
}

/// `{S^{-1/2} v_i}` with `S` restricted to the span of a Riesz sequence;
/// the result is orthonormal.
pub fn orthonormalize_riesz(f: &FrameSystem, tol: f64) -> Result<FrameSystem> {
    let report = riesz_bounds(f, tol)?;
    if !is_riesz(&report, tol) {
        return Err(Error::NotRiesz { lower: report.min() });
    }
    let root = linalg::inverse_sqrt(&frame_operator(f), tol)?;
    f.map_vectors(&root)
}

/// Canonical dual frame `{S^{-1} v_i}`.
pub fn canonical_dual(f: &FrameSystem, tol: f64) -> Result<FrameSystem> {
    require_frame(f, tol)?;
    let inv = linalg::pseudo_inverse(&frame_operator(f), tol)?;
    f.map_vectors(&inv)
}

/// Coefficients `c_i = ⟨x, v_i⟩`.
pub fn analysis(f: &FrameSystem, x: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            got: x.len(),
        });
    }
    Ok(f.vectors.iter().map(|v| inner(x, v)).collect())
}

/// `Σ c_i v_i`.
pub fn synthesis(f: &FrameSystem, c: &[Complex64]) -> Result<Vec<Complex64>> {
    if c.len() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            got: c.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); f.dim];
    for (ci, v) in c.iter().zip(&f.vectors) {
        for (o, vi) in out.iter_mut().zip(v) {
            *o += ci * vi;
        }
    }
    Ok(out)
}

/// Sum `Σ |⟨x, v_i⟩|²` appearing in the frame inequality.
pub fn frame_sum(f: &FrameSystem, x: &[Complex64]) -> Result<f64> {
    Ok(analysis(f, x)?.iter().map(|z| z.norm_sqr()).sum())
}

/// Interchange format: `{dim, labels, vectors: [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSystemJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl From<&FrameSystem> for FrameSystemJson {
    fn from(f: &FrameSystem) -> Self {
        Self {
            dim: f.dim,
            labels: f.labels.clone(),
            vectors: f
                .vectors
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<FrameSystemJson> for FrameSystem {
    type Error = Error;
    fn try_from(j: FrameSystemJson) -> Result<Self> {
        let vectors = j
            .vectors
            .into_iter()
            .map(|v| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        FrameSystem::new(j.dim, vectors, j.labels)
    }
}

impl Serialize for FrameSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrameSystemJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrameSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FrameSystemJson::deserialize(d)?;
        FrameSystem::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(n: usize) -> FrameSystem {
        let vs = (0..n)
            .map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        FrameSystem::unlabeled(n, vs).unwrap()
    }

    fn mercedes() -> FrameSystem {
        let vs = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                vec![c(t.cos(), 0.0), c(t.sin(), 0.0)]
            })
            .collect();
        FrameSystem::unlabeled(2, vs).unwrap()
    }

    #[test]
    fn gram_of_basis_and_single_vector() {
        assert!(gram(&basis(2)).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let one = FrameSystem::unlabeled(2, vec![vec![c(0.6, 0.0), c(0.0, 0.8)]]).unwrap();
        assert!((gram(&one)[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn mercedes_gram_and_frame_operator() {
        let g = gram(&mercedes());
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -0.5 };
                assert!((g[(i, j)] - want).norm() < 1e-15);
            }
        }
        let s = frame_operator(&mercedes());
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2).scale(c(1.5, 0.0))) < 1e-15);
    }

    #[test]
    fn empty_system_frame_operator_is_zero() {
        let e = FrameSystem::unlabeled(3, vec![]).unwrap();
        assert_eq!(frame_operator(&e).max_abs(), 0.0);
        assert!(parsevalize(&e, DEFAULT_TOL).is_err());
    }

    #[test]
    fn frame_bounds_examples() {
        let r = frame_bounds(&basis(3), DEFAULT_TOL).unwrap();
        assert!((r.min_nonzero - 1.0).abs() < 1e-14 && (r.max - 1.0).abs() < 1e-14);
        let r = frame_bounds(&mercedes(), DEFAULT_TOL).unwrap();
        assert!((r.min() - 1.5).abs() < 1e-14 && (r.max - 1.5).abs() < 1e-14);

        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let twice = FrameSystem::unlabeled(2, vec![e1.clone(), e1]).unwrap();
        let r = frame_bounds(&twice, DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-14 && (r.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert_eq!(r.rank, 1);
        assert!(matches!(parsevalize(&twice, DEFAULT_TOL), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn riesz_examples() {
        let r = riesz_bounds(&basis(4), DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let r = riesz_bounds(&mercedes(), DEFAULT_TOL).unwrap();
        assert!(r.min().abs() < 1e-14);
        assert!(!is_riesz(&r, DEFAULT_TOL));

        let v = vec![c(0.3, 0.1), c(0.2, -0.5)];
        let rep = FrameSystem::unlabeled(2, vec![v.clone(), vec![c(1.0, 0.0), c(0.0, 0.0)], v]).unwrap();
        let r = riesz_bounds(&rep, DEFAULT_TOL).unwrap();
        assert!(r.min().abs() < 1e-14);
        assert!(matches!(orthonormalize_riesz(&rep, DEFAULT_TOL), Err(Error::NotRiesz { .. })));
    }

    #[test]
    fn parsevalize_examples() {
        let p = parsevalize(&basis(3), DEFAULT_TOL).unwrap();
        assert!(gram(&p).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);

        let p = parsevalize(&mercedes(), DEFAULT_TOL).unwrap();
        let k = (2.0f64 / 3.0).sqrt();
        for (v, w) in p.vectors().iter().zip(mercedes().vectors()) {
            for (a, b) in v.iter().zip(w) {
                assert!((a - b * k).norm() < 1e-13);
            }
        }
        assert!(frame_operator(&p).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);

        let scaled = FrameSystem::unlabeled(
            2,
            basis(2).vectors().iter().map(|v| v.iter().map(|z| z * 2.0).collect()).collect(),
        )
        .unwrap();
        let p = parsevalize(&scaled, DEFAULT_TOL).unwrap();
        assert!(gram(&p).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn orthonormalize_examples() {
        let q = orthonormalize_riesz(&basis(2), DEFAULT_TOL).unwrap();
        assert!(gram(&q).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);

        let skew = FrameSystem::unlabeled(
            2,
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]],
        )
        .unwrap();
        let q = orthonormalize_riesz(&skew, DEFAULT_TOL).unwrap();
        assert!(gram(&q).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);

        let long = FrameSystem::unlabeled(3, vec![vec![c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let q = orthonormalize_riesz(&long, DEFAULT_TOL).unwrap();
        assert!((q.vectors()[0][0] - c(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn canonical_dual_examples() {
        let d = canonical_dual(&basis(3), DEFAULT_TOL).unwrap();
        assert_eq!(d.len(), 3);
        assert!(gram(&d).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);

        let d = canonical_dual(&mercedes(), DEFAULT_TOL).unwrap();
        for (v, w) in d.vectors().iter().zip(mercedes().vectors()) {
            for (a, b) in v.iter().zip(w) {
                assert!((a - b * (2.0 / 3.0)).norm() < 1e-13);
            }
        }

        let skew = FrameSystem::unlabeled(
            2,
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]],
        )
        .unwrap();
        let d = canonical_dual(&skew, DEFAULT_TOL).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&skew.vectors()[i], &d.vectors()[j]) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn analysis_and_synthesis_examples() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let coeffs = analysis(&basis(2), &e1).unwrap();
        assert_eq!(coeffs, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let single = FrameSystem::unlabeled(2, vec![e1.clone()]).unwrap();
        assert_eq!(analysis(&single, &e2).unwrap(), vec![c(0.0, 0.0)]);

        let m = analysis(&mercedes(), &e1).unwrap();
        for (got, want) in m.iter().zip([1.0, -0.5, -0.5]) {
            assert!((got - want).norm() < 1e-15);
        }
        assert!(matches!(analysis(&mercedes(), &[c(1.0, 0.0)]), Err(Error::DimensionMismatch { .. })));

        assert_eq!(synthesis(&basis(2), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(), e1);
        let zero = synthesis(&mercedes(), &[c(0.0, 0.0); 3]).unwrap();
        assert!(zero.iter().all(|z| z.norm() == 0.0));
        let sum = synthesis(&mercedes(), &[c(1.0, 0.0); 3]).unwrap();
        assert!(sum.iter().all(|z| z.norm() < 1e-15));
        assert!(synthesis(&mercedes(), &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn label_and_dimension_validation() {
        assert!(FrameSystem::new(2, vec![vec![c(1.0, 0.0)]], vec!["a".into()]).is_err());
        assert!(FrameSystem::new(1, vec![vec![c(1.0, 0.0)]], vec![]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = FrameSystem::new(1, vec![vec![c(0.5, -0.25)]], vec!["x".into()]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dim":1,"labels":["x"],"vectors":[[[0.5,-0.25]]]}"#);
    }
}
