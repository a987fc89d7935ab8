//! The orthogonality relation periodized over a fundamental domain, and the
//! frame-bound sandwich it implies.

use std::f64::consts::PI;

use serde::Serialize;

use super::gram::GaborBoundsReport;
use super::lattice::PlaneLattice;
use super::window::Window;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_2d, QuadOptions};

/// `Σ_m e^{-π(x + mα)²}` over the terms above `1e-18`.
fn gaussian_periodization(x: f64, alpha: f64) -> f64 {
    let reach = 3.7;
    let m0 = ((-reach - x) / alpha).floor() as i64;
    let m1 = ((reach - x) / alpha).ceil() as i64;
    (m0..=m1)
        .map(|m| {
            let u = x + m as f64 * alpha;
            (-PI * u * u).exp()
        })
        .sum()
}

/// `Σ_n |ĥ(ξ + nβ)|²` for `h` the indicator of an interval of length
/// `L ≤ 1`, in closed form through Poisson summation: the autocorrelation
/// of `h` is `(L - |τ|)_+`, so only `|k| < Lβ` contribute.
fn box_frequency_sum(len: f64, xi: f64, beta: f64) -> f64 {
    let kmax = (len * beta).ceil() as i64;
    let mut acc = len;
    for k in 1..=kmax {
        let tau = k as f64 / beta;
        if tau < len {
            acc += 2.0 * (len - tau) * (2.0 * PI * k as f64 * xi / beta).cos();
        }
    }
    acc / beta
}

/// `∫_Ω Σ_γ |⟨π(z)* f, π(γ) g⟩|² dz` over `Ω = [0, α) × [0, β)` for a
/// separable lattice and `f = g` both Gaussian or both box. The
/// orthogonality relation makes this `‖f‖² ‖g‖²` for every lattice.
pub fn periodized_ortho_check(g: &Window, lat: &PlaneLattice, f: &Window, opts: &QuadOptions) -> Result<f64> {
    let (alpha, beta) = lat
        .separable_params()
        .ok_or_else(|| Error::Unsupported("periodized check needs a separable lattice".into()))?;
    let r = match (f, g) {
        (Window::Gaussian, Window::Gaussian) => integrate_2d(
            // |⟨g, π(w) g⟩|² = e^{-π|w|²}
            |x, xi| gaussian_periodization(x, alpha) * gaussian_periodization(xi, beta),
            (0.0, alpha),
            |_| (0.0, beta),
            opts,
        )?,
        (Window::Box, Window::Box) => integrate_2d(
            |x, xi| {
                let m0 = ((-1.0 - x) / alpha).floor() as i64;
                let m1 = ((1.0 - x) / alpha).ceil() as i64;
                (m0..=m1)
                    .map(|m| {
                        let len = 1.0 - (x + m as f64 * alpha).abs();
                        if len > 0.0 {
                            box_frequency_sum(len, xi, beta)
                        } else {
                            0.0
                        }
                    })
                    .sum()
            },
            (0.0, alpha),
            |_| (0.0, beta),
            opts,
        )?,
        _ => {
            return Err(Error::Unsupported(format!(
                "periodized check for windows {} and {}",
                f.name(),
                g.name()
            )))
        }
    };
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichResult {
    pub holds: bool,
    /// `‖g‖² - A·vol`
    pub lower_slack: f64,
    /// `B·vol - ‖g‖²`
    pub upper_slack: f64,
}

/// Checks `A·vol ≤ ‖g‖² ≤ B·vol` (formal dimension 1) up to `1e-6`.
pub fn sandwich_check(report: &GaborBoundsReport, lat_covolume: f64, w: &Window) -> SandwichResult {
    let n = w.norm_sqr();
    let lower_slack = n - report.a * lat_covolume;
    let upper_slack = report.b * lat_covolume - n;
    SandwichResult {
        holds: lower_slack >= -1e-6 && upper_slack >= -1e-6,
        lower_slack,
        upper_slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::gram::{BoundsMethod, BoundsParams};

    fn fake(a: f64, b: f64) -> GaborBoundsReport {
        GaborBoundsReport {
            a,
            b,
            method: BoundsMethod::ZibulskiZeevi,
            params: BoundsParams::default(),
            certified: false,
            notes: vec![],
        }
    }

    #[test]
    fn sandwich_examples() {
        let r = sandwich_check(&fake(1.0, 1.0), 1.0, &Window::Box);
        assert!(r.holds && r.lower_slack == 0.0 && r.upper_slack == 0.0);
        assert!(!sandwich_check(&fake(3.0, 4.0), 0.5, &Window::Gaussian).holds);
    }

    #[test]
    fn mixed_windows_rejected() {
        let lat = PlaneLattice::separable(1.0, 1.0).unwrap();
        let r = periodized_ortho_check(&Window::Gaussian, &lat, &Window::Box, &QuadOptions::default());
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn box_sum_matches_direct() {
        // Σ_n |ĥ(ξ + nβ)|² with |ĥ(τ)|² = sin²(πLτ)/(πτ)², truncated.
        let (len, xi, beta) = (0.7, 0.3, 1.5);
        let direct: f64 = (-200_000..=200_000)
            .map(|n| {
                let t = xi + n as f64 * beta;
                let s = (PI * len * t).sin() / (PI * t);
                s * s
            })
            .sum();
        assert!((direct - box_frequency_sum(len, xi, beta)).abs() < 1e-5);
    }
}
