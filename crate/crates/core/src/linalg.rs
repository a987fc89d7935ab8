//! Dense complex matrices and the Hermitian spectral kernel shared by the
//! frame algebra.
//!
//! Hermitian matrices are diagonalised through their real symmetric
//! embedding `X + iY -> [[X, -Y], [Y, X]]` with a cyclic Jacobi sweep. Every
//! eigenvalue of the embedding appears twice, and spectral functions of the
//! embedding are embeddings of spectral functions of the original matrix, so
//! no complex eigenvector bookkeeping is needed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

const JACOBI_THRESHOLD: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` entrywise; `INFINITY` if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest deviation from conjugate symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Standard inner product, linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalue summary of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_nonzero: f64,
    pub max: f64,
    pub rank: usize,
    pub tolerance_used: f64,
}

impl SpectralReport {
    fn from_sorted(eigenvalues: Vec<f64>, tol: f64) -> Self {
        let max = eigenvalues.last().copied().unwrap_or(0.0);
        let scale = eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let cutoff = tol * scale;
        let above: Vec<f64> = eigenvalues.iter().copied().filter(|&v| v > cutoff).collect();
        let rank = above.len();
        let min_nonzero = above.first().copied().unwrap_or(0.0);
        Self {
            eigenvalues,
            min_nonzero,
            max: max.max(min_nonzero),
            rank,
            tolerance_used: tol,
        }
    }

    /// Smallest eigenvalue, 0 for an empty spectrum.
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Real symmetric eigendecomposition `A = Q diag(values) Q^T`, columns of
/// `vectors` are eigenvectors. Values are not sorted.
struct SymmetricEigen {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<f64>,
}

/// Cyclic Jacobi on a dense symmetric matrix stored row-major.
fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> SymmetricEigen {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_THRESHOLD * total.max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    SymmetricEigen { n, values, vectors: v }
}

fn real_embedding(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let big = 2 * n;
    let mut r = vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            // Symmetrise so that tiny Hermitian defects don't break Jacobi.
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            r[i * big + j] = z.re;
            r[i * big + n + j] = -z.im;
            r[(n + i) * big + j] = z.im;
            r[(n + i) * big + n + j] = z.re;
        }
    }
    r
}

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let allowed = tol * m.max_abs().max(1.0);
    let defect = m.hermitian_defect();
    if defect > allowed {
        return Err(Error::NotHermitian {
            asymmetry: defect,
            tol: allowed,
        });
    }
    Ok(())
}

fn embedded_eigen(m: &ComplexMatrix) -> SymmetricEigen {
    jacobi_symmetric(real_embedding(m), 2 * m.rows())
}

/// All eigenvalues of a Hermitian matrix, ascending, with the relative rank
/// count `#{λ > tol · max|λ|}`.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<SpectralReport> {
    check_hermitian(m, tol)?;
    let eig = embedded_eigen(m);
    let mut doubled = eig.values;
    doubled.sort_by(f64::total_cmp);
    // Each eigenvalue appears twice in the embedding.
    let values: Vec<f64> = doubled.iter().step_by(2).copied().collect();
    Ok(SpectralReport::from_sorted(values, tol))
}

/// Applies `f` to the spectrum of a Hermitian matrix: `U f(Λ) U*`.
///
/// `f` receives each eigenvalue together with the matrix's largest
/// eigenvalue modulus so callers can apply relative cut-offs.
pub fn hermitian_function(
    m: &ComplexMatrix,
    tol: f64,
    f: impl Fn(f64, f64) -> f64,
) -> Result<ComplexMatrix> {
    check_hermitian(m, tol)?;
    let n = m.rows();
    let eig = embedded_eigen(m);
    let big = eig.n;
    let scale = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let fv: Vec<f64> = eig.values.iter().map(|&v| f(v, scale)).collect();
    let q = &eig.vectors;
    // Only the left block column of the embedding is needed: it holds
    // [Re; Im] of the complex result.
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..big {
            if fv[k] == 0.0 {
                continue;
            }
            let w = fv[k] * q[j * big + k];
            re += q[i * big + k] * w;
            im += q[(n + i) * big + k] * w;
        }
        Complex64::new(re, im)
    }))
}

/// `M^{-1/2}` on the part of the spectrum above `tol · max|λ|`; directions
/// below the cut-off map to zero.
pub fn inverse_sqrt(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    hermitian_function(m, tol, |v, scale| {
        if v > tol * scale {
            1.0 / v.sqrt()
        } else {
            0.0
        }
    })
}

/// Pseudo-inverse of a positive semidefinite matrix with the same cut-off.
pub fn pseudo_inverse(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    hermitian_function(m, tol, |v, scale| if v > tol * scale { 1.0 / v } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_spectrum() {
        let r = hermitian_eigen(&ComplexMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(r.rank, 3);
        for v in &r.eigenvalues {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_with_zero() {
        let r = hermitian_eigen(&ComplexMatrix::diagonal(&[0.0, 2.0]), DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-14);
        assert!((r.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!((r.min_nonzero - 2.0).abs() < 1e-14);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn two_by_two_char_poly() {
        // (2-λ)^2 - 1 = 0  =>  λ ∈ {1, 3}
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(2.0), c(1.0), c(1.0), c(2.0)]).unwrap();
        let r = hermitian_eigen(&m, DEFAULT_TOL).unwrap();
        assert!((r.eigenvalues[0] - 1.0).abs() < 1e-13);
        assert!((r.eigenvalues[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let i = Complex64::new(0.0, 1.0);
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(1.0), i, -i, c(1.0)]).unwrap();
        let r = hermitian_eigen(&m, DEFAULT_TOL).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-13);
        assert!((r.eigenvalues[1] - 2.0).abs() < 1e-13);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&m, DEFAULT_TOL), Err(Error::NonSquare { .. })));
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(1.0), c(0.0), c(1.0)]).unwrap();
        assert!(matches!(hermitian_eigen(&m, DEFAULT_TOL), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_nan() {
        let err = ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn inverse_sqrt_squares_to_inverse() {
        let i = Complex64::new(0.0, 1.0);
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(3.0), i, -i, c(2.0)]).unwrap();
        let r = inverse_sqrt(&m, DEFAULT_TOL).unwrap();
        let prod = r.matmul(&m).unwrap().matmul(&r).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn deterministic() {
        let i = Complex64::new(0.3, 0.7);
        let m = ComplexMatrix::from_row_major(2, 2, vec![c(3.0), i, i.conj(), c(2.0)]).unwrap();
        let a = hermitian_eigen(&m, DEFAULT_TOL).unwrap();
        let b = hermitian_eigen(&m, DEFAULT_TOL).unwrap();
        assert_eq!(a, b);
    }
}
