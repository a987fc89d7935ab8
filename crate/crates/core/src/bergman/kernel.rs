//! Weighted Bergman space `A²_α(ℂ⁺)` with norm
//! `‖f‖² = ∫ |f(z)|² Im(z)^{α-2} dx dy`, its reproducing kernels, and the
//! Laguerre windows of the half-line model.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::group::{orbit_ball, FuchsianGroup};
use super::moebius::UHPoint;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix, SpectralReport};
use crate::quadrature::{integrate_2d, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BergmanKernelSpec {
    pub alpha: f64,
    pub w: UHPoint,
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

impl BergmanKernelSpec {
    pub fn new(alpha: f64, w: UHPoint) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, w })
    }

    /// `‖k_w‖² = k_w(w) = (α - 1)/(4π) · Im(w)^{-α}`.
    pub fn norm_sqr(&self) -> f64 {
        (self.alpha - 1.0) / (4.0 * PI) * self.w.y().powf(-self.alpha)
    }
}

/// `k_w(z) = 2^{α-2} π^{-1} (α - 1) i^α (z - w̄)^{-α}`, principal branch.
pub fn kernel_eval(spec: &BergmanKernelSpec, z: &UHPoint) -> Complex64 {
    kernel_at(spec.alpha, spec.w.z, z.z)
}

fn kernel_at(alpha: f64, w: Complex64, z: Complex64) -> Complex64 {
    let c = 2f64.powf(alpha - 2.0) * (alpha - 1.0) / PI;
    let i_alpha = Complex64::from_polar(1.0, FRAC_PI_2 * alpha);
    // z - w̄ lies in ℂ⁺, away from the branch cut.
    let base = z - w.conj();
    i_alpha * (-alpha * base.ln()).exp() * c
}

/// Region for quadrature over all of ℂ⁺ via `x = c + s tan θ`,
/// `y = s tan φ`, `θ ∈ (-π/2, π/2)`, `φ ∈ (0, π/2)`. Centre and scale
/// should sit where the integrand lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneMap {
    pub center: f64,
    pub scale: f64,
}

impl HalfPlaneMap {
    pub fn around(points: &[UHPoint]) -> Self {
        let n = points.len().max(1) as f64;
        let center = points.iter().map(|p| p.x()).sum::<f64>() / n;
        let scale = (points.iter().map(|p| p.y().ln()).sum::<f64>() / n).exp();
        Self { center, scale }
    }
}

/// `⟨f, g⟩ = ∫ f(z) conj(g(z)) Im(z)^{α-2} dx dy` by adaptive quadrature.
pub fn bergman_inner(
    f: impl Fn(Complex64) -> Complex64,
    g: impl Fn(Complex64) -> Complex64,
    alpha: f64,
    map: HalfPlaneMap,
    opts: &QuadOptions,
) -> Result<Complex64> {
    check_alpha(alpha)?;
    let s = map.scale;
    let r = integrate_2d(
        |theta: f64, phi: f64| {
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            let x = map.center + s * st / ct;
            let y = s * sp / cp;
            let jac = s * s / (ct * ct * cp * cp);
            let z = Complex64::new(x, y);
            let v = f(z) * g(z).conj() * (y.powf(alpha - 2.0) * jac);
            if v.re.is_finite() && v.im.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        (-FRAC_PI_2, FRAC_PI_2),
        |_| (0.0, FRAC_PI_2),
        opts,
    )?;
    Ok(r.value)
}

/// `⟨k_a, k_b⟩` by quadrature.
pub fn kernel_inner_quadrature(a: &BergmanKernelSpec, b: &BergmanKernelSpec, opts: &QuadOptions) -> Result<Complex64> {
    if a.alpha != b.alpha {
        return Err(Error::Unsupported("kernels of different weights".into()));
    }
    let map = HalfPlaneMap::around(&[a.w, b.w]);
    bergman_inner(
        |z| kernel_at(a.alpha, a.w.z, z),
        |z| kernel_at(b.alpha, b.w.z, z),
        a.alpha,
        map,
        opts,
    )
}

/// `⟨k_a, k_b⟩ = k_a(b)` by the reproducing property.
pub fn kernel_inner_closed(a: &BergmanKernelSpec, b: &BergmanKernelSpec) -> Complex64 {
    kernel_at(a.alpha, a.w.z, b.w.z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GramEntries {
    ClosedForm,
    Quadrature(QuadOptions),
}

#[derive(Debug, Clone)]
pub struct KernelGram {
    pub points: Vec<UHPoint>,
    pub matrix: ComplexMatrix,
    pub spectrum: SpectralReport,
}

/// Gram of normalized kernels `k_z/‖k_z‖` over an orbit ball,
/// `G[i][j] = ⟨u_j, u_i⟩`.
pub fn kernel_orbit_gram(
    alpha: f64,
    g: &FuchsianGroup,
    w: &UHPoint,
    radius: usize,
    entries: GramEntries,
) -> Result<KernelGram> {
    check_alpha(alpha)?;
    let points: Vec<UHPoint> = orbit_ball(g, w, radius).into_iter().map(|o| o.point).collect();
    normalized_kernel_gram(alpha, &points, entries)
}

pub fn normalized_kernel_gram(alpha: f64, points: &[UHPoint], entries: GramEntries) -> Result<KernelGram> {
    use rayon::prelude::*;
    check_alpha(alpha)?;
    let specs: Vec<BergmanKernelSpec> = points.iter().map(|p| BergmanKernelSpec { alpha, w: *p }).collect();
    let n = specs.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let v = match entries {
                        GramEntries::ClosedForm => kernel_inner_closed(&specs[j], &specs[i]),
                        GramEntries::Quadrature(o) => kernel_inner_quadrature(&specs[j], &specs[i], &o)?,
                    };
                    Ok(v / (specs[i].norm_sqr() * specs[j].norm_sqr()).sqrt())
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
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
    }
    let spectrum = hermitian_eigen(&m, 1e-8)?;
    Ok(KernelGram {
        points: points.to_vec(),
        matrix: m,
        spectrum,
    })
}

/// `H_n(t) = t^{α-1} e^{-t} L_n^{(α-1)}(2t)` with the three-term
/// Laguerre recurrence.
pub fn laguerre_window(alpha: f64, n: usize, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Unsupported(format!("Laguerre window needs t > 0, got {t}")));
    }
    let a = alpha - 1.0;
    let x = 2.0 * t;
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    let l = if n == 0 {
        prev
    } else {
        for k in 1..n {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        cur
    };
    Ok(t.powf(a) * (-t).exp() * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_to_infinity;

    fn pt(s: &str) -> UHPoint {
        UHPoint::parse(s).unwrap()
    }

    #[test]
    fn kernel_values() {
        let k = BergmanKernelSpec::new(2.0, pt("i")).unwrap();
        assert!((kernel_eval(&k, &pt("i")) - 1.0 / (4.0 * PI)).norm() < 1e-15);
        let want = -Complex64::new(1.0, 2.0).powi(-2) / PI;
        assert!((kernel_eval(&k, &pt("1+i")) - want).norm() < 1e-15);
        assert!(BergmanKernelSpec::new(1.0, pt("i")).is_err());
    }

    #[test]
    fn norm_by_quadrature() {
        let opts = QuadOptions::with_tol(1e-10, 1e-9);
        for alpha in [1.5, 2.0, 4.0] {
            let k = BergmanKernelSpec::new(alpha, pt("0.3+1.7i")).unwrap();
            let q = kernel_inner_quadrature(&k, &k, &opts).unwrap();
            assert!((q.re - k.norm_sqr()).abs() < 1e-7 * k.norm_sqr(), "{alpha}: {q} vs {}", k.norm_sqr());
            assert!(q.im.abs() < 1e-9);
        }
    }

    #[test]
    fn zero_function() {
        let z = bergman_inner(|_| Complex64::new(0.0, 0.0), |z| z, 2.0, HalfPlaneMap { center: 0.0, scale: 1.0 }, &QuadOptions::default()).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn laguerre_values() {
        let t = 0.8;
        assert!((laguerre_window(3.0, 0, t).unwrap() - t * t * (-t).exp()).abs() < 1e-15);
        let want = t * (-t).exp() * (2.0 - 2.0 * t);
        assert!((laguerre_window(2.0, 1, t).unwrap() - want).abs() < 1e-15);
        // L_2^{(1)}(x) = (x² - 6x + 6)/2
        let x = 2.0 * t;
        let want2 = t * (-t).exp() * (x * x - 6.0 * x + 6.0) / 2.0;
        assert!((laguerre_window(2.0, 2, t).unwrap() - want2).abs() < 1e-14);
    }

    #[test]
    fn laguerre_orthogonality() {
        let alpha = 3.5;
        let opts = QuadOptions::default();
        let ip = |m: usize, n: usize| {
            integrate_to_infinity(
                |t: f64| {
                    if t <= 0.0 {
                        return 0.0;
                    }
                    laguerre_window(alpha, m, t).unwrap() * laguerre_window(alpha, n, t).unwrap() * t.powf(1.0 - alpha)
                },
                0.0,
                &opts,
            )
            .unwrap()
            .value
        };
        assert!(ip(0, 1).abs() < 1e-9);
        assert!(ip(1, 3).abs() < 1e-9);
        assert!(ip(2, 2) > 0.1);
    }
}
