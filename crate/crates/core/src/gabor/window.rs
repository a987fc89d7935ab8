//! Windows on the line and time-frequency shifts `π(x, ξ) = M_ξ T_x`,
//! `(π(x, ξ) f)(t) = e^{2πiξt} f(t - x)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Below `|t| = 3.5` the Gaussian window drops under `1e-16`.
pub const GAUSSIAN_SUPPORT: f64 = 3.5;

/// Samples `values[k] ≈ f(start + k·step)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledWindow {
    pub step: f64,
    pub start: f64,
    pub values: Vec<Complex64>,
}

impl SampledWindow {
    pub fn new(step: f64, start: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() {
            return Err(Error::InvalidLattice(format!("sampling step {step} must be positive")));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { step, start, values })
    }

    /// Samples `f` at `start + k·step` for `k < count`.
    pub fn sample(f: impl Fn(f64) -> Complex64, start: f64, step: f64, count: usize) -> Result<Self> {
        Self::new(step, start, (0..count).map(|k| f(start + k as f64 * step)).collect())
    }

    pub fn support(&self) -> (f64, f64) {
        (self.start, self.start + self.values.len() as f64 * self.step)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    /// Riemann sum `h Σ |f_k|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.step * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Integer number of grid steps in `x`.
    fn grid_offset(&self, x: f64) -> Result<i64> {
        let k = x / self.step;
        let r = k.round();
        if (k - r).abs() > 1e-12 * k.abs().max(1.0) {
            return Err(Error::OffGridShift(x));
        }
        Ok(r as i64)
    }

    /// Grid index of `start` relative to `other`'s grid.
    fn relative_offset(&self, other: &SampledWindow) -> Result<i64> {
        if (self.step - other.step).abs() > 1e-15 * self.step {
            return Err(Error::OffGridShift(other.step));
        }
        self.grid_offset(other.start - self.start)
    }

    /// Discrete inner product `h Σ f(t) conj(g(t))` over shared grid points.
    pub fn inner(&self, other: &SampledWindow) -> Result<Complex64> {
        let off = self.relative_offset(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in other.values.iter().enumerate() {
            let k = j as i64 + off;
            if k >= 0 && (k as usize) < self.values.len() {
                acc += self.values[k as usize] * v.conj();
            }
        }
        Ok(acc * self.step)
    }
}

/// Samples of `π(z) f`. The time shift must be a whole number of grid
/// steps; the result lives on the same grid.
pub fn tf_shift((x, xi): (f64, f64), f: &SampledWindow) -> Result<SampledWindow> {
    let k = f.grid_offset(x)?;
    let start = f.start + k as f64 * f.step;
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * Complex64::from_polar(1.0, 2.0 * PI * xi * (start + j as f64 * f.step)))
        .collect();
    SampledWindow::new(f.step, start, values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// `2^{1/4} e^{-πt²}`, unit norm.
    Gaussian,
    /// Indicator of `[0, 1)`.
    Box,
    Sampled(SampledWindow),
}

impl Window {
    pub fn name(&self) -> &'static str {
        match self {
            Window::Gaussian => "gaussian",
            Window::Box => "box",
            Window::Sampled(_) => "sampled",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Window::Gaussian),
            "box" => Ok(Window::Box),
            _ => Err(Error::Parse(format!("unknown window '{s}' (expected gaussian or box)"))),
        }
    }

    /// Pointwise value; `None` for sampled windows.
    pub fn eval(&self, t: f64) -> Option<f64> {
        match self {
            Window::Gaussian => Some(gaussian(t)),
            Window::Box => Some(if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 }),
            Window::Sampled(_) => None,
        }
    }

    /// Interval outside which the window is negligible.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Window::Gaussian => (-GAUSSIAN_SUPPORT, GAUSSIAN_SUPPORT),
            Window::Box => (0.0, 1.0),
            Window::Sampled(s) => s.support(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            Window::Gaussian | Window::Box => 1.0,
            Window::Sampled(s) => s.norm_sqr(),
        }
    }

    /// `⟨π(a) w, π(b) w⟩`, by quadrature over the overlap of the shifted
    /// supports, or by a discrete sum for sampled windows.
    pub fn shifted_inner(&self, a: (f64, f64), b: (f64, f64), opts: &QuadOptions) -> Result<Complex64> {
        if let Window::Sampled(s) = self {
            return tf_shift(a, s)?.inner(&tf_shift(b, s)?);
        }
        let (s0, s1) = self.support();
        let lo = (s0 + a.0).max(s0 + b.0);
        let hi = (s1 + a.0).min(s1 + b.0);
        if lo >= hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let dxi = a.1 - b.1;
        let g = |t: f64| self.eval(t).unwrap_or(0.0);
        let r = integrate(
            |t: f64| Complex64::from_polar(g(t - a.0) * g(t - b.0), 2.0 * PI * dxi * t),
            lo,
            hi,
            opts,
        )?;
        Ok(r.value)
    }
}

pub fn gaussian(t: f64) -> f64 {
    2f64.powf(0.25) * (-PI * t * t).exp()
}
