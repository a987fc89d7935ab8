//! Truncated Gram matrices of Gabor systems `π(Γ)g`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::ambiguity::gaussian_shifted_inner;
use super::lattice::{LatticePoint, PlaneLattice};
use super::window::Window;
use crate::error::Result;
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::quadrature::QuadOptions;

#[derive(Debug, Clone)]
pub struct GaborGram {
    pub matrix: ComplexMatrix,
    pub points: Vec<LatticePoint>,
}

impl GaborGram {
    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|p| format!("({},{})", p.index.0, p.index.1)).collect()
    }
}

/// `G[i][j] = ⟨π(z_j) g, π(z_i) g⟩` over `z = Aν`, `‖ν‖_∞ ≤ radius`.
pub fn gabor_gram(w: &Window, lat: &PlaneLattice, radius: usize, opts: &QuadOptions) -> Result<GaborGram> {
    let points = lat.points(radius);
    let n = points.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let a = (points[j].x, points[j].xi);
                    let b = (points[i].x, points[i].xi);
                    match w {
                        Window::Gaussian => Ok(gaussian_shifted_inner(a, b)),
                        _ => w.shifted_inner(a, b, opts),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            let j = i + k;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    Ok(GaborGram { matrix: m, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsMethod {
    ZibulskiZeevi,
    TruncatedGram,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BoundsParams {
    pub covolume: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Smallest eigenvalue of the truncated Gram: an upper estimate of the
    /// Riesz lower bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub riesz_lower_evidence: Option<f64>,
    /// Gaussian width after dilation to the lattice `ℤ × (p/q)ℤ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaborBoundsReport {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub method: BoundsMethod,
    pub params: BoundsParams,
    pub certified: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Truncated Gram estimate. The largest eigenvalue estimates the upper
/// bound from below; no lower frame bound can be read off a finite section,
/// so `A` is reported as 0 and the smallest eigenvalue is kept as Riesz
/// evidence.
pub fn truncated_gram_bounds(w: &Window, lat: &PlaneLattice, radius: usize, opts: &QuadOptions) -> Result<GaborBoundsReport> {
    let g = gabor_gram(w, lat, radius, opts)?;
    let spec = hermitian_eigen(&g.matrix, 1e-10)?;
    Ok(GaborBoundsReport {
        a: 0.0,
        b: spec.max,
        method: BoundsMethod::TruncatedGram,
        params: BoundsParams {
            covolume: lat.covolume(),
            radius: Some(radius),
            riesz_lower_evidence: Some(spec.min()),
            ..Default::default()
        },
        certified: false,
        notes: vec!["upper-bound-only; lower frame bound not estimable from a finite section".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_is_unit() {
        let lat = PlaneLattice::parse("1,0;0,1").unwrap();
        let g = gabor_gram(&Window::Gaussian, &lat, 0, &QuadOptions::default()).unwrap();
        assert_eq!(g.matrix.rows(), 1);
        assert!((g.matrix[(0, 0)] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gaussian_gram_matches_quadrature_entries() {
        let lat = PlaneLattice::parse("1/2,1/3;0,3/4").unwrap();
        let opts = QuadOptions::default();
        let g = gabor_gram(&Window::Gaussian, &lat, 1, &opts).unwrap();
        for i in 0..g.points.len() {
            for j in 0..g.points.len() {
                let a = (g.points[j].x, g.points[j].xi);
                let b = (g.points[i].x, g.points[i].xi);
                let q = Window::Gaussian.shifted_inner(a, b, &opts).unwrap();
                assert!((q - g.matrix[(i, j)]).norm() < 1e-10);
            }
        }
    }
}
