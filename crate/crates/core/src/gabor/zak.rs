//! Frame bounds at rational density through the Zak transform
//! `Zf(x, ω) = Σ_k f(x - k) e^{2πikω}`.
//!
//! For the lattice `ℤ × (p/q)ℤ` the frame operator is unitarily a
//! multiplication operator on `L²([0, 1/p) × [0, 1), ℂ^p)` by
//! `(1/p) Φ*Φ`, where `Φ(y, ω)` is `q × p` with entries
//! `Φ_{s,j} = conj(Zg(y + j/p, ω - s p/q)) · e^{-2πi s p (y + j/p)/q}`.
//! The optimal bounds are the essential extrema of its eigenvalues; here
//! they are sampled on a cell-centred grid.

use std::f64::consts::PI;

use num::integer::Integer;
use num_complex::Complex64;
use rayon::prelude::*;

use super::gram::{BoundsMethod, BoundsParams, GaborBoundsReport};
use super::window::Window;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, ComplexMatrix};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_TRUNC: usize = 16;

#[derive(Debug, Clone, Copy)]
enum ZakWindow {
    /// `(2s)^{1/4} e^{-πst²}`.
    Gaussian { width: f64 },
    Box,
}

impl ZakWindow {
    /// `Zg(x, ω)` for `x ∈ [0, 1)`.
    fn zak(&self, x: f64, omega: f64, trunc: usize) -> Complex64 {
        match *self {
            ZakWindow::Box => Complex64::new(1.0, 0.0),
            ZakWindow::Gaussian { width } => {
                let c = (2.0 * width).powf(0.25);
                let t = trunc as i64;
                let mut acc = Complex64::new(0.0, 0.0);
                for k in -t..=t {
                    let u = x - k as f64;
                    let amp = c * (-PI * width * u * u).exp();
                    if amp != 0.0 {
                        acc += Complex64::from_polar(amp, 2.0 * PI * k as f64 * omega);
                    }
                }
                acc
            }
        }
    }

    /// Bound on the dropped terms, `Σ_{|k| > trunc} g(x - k)` over `x ∈ [0, 1)`.
    fn tail(&self, trunc: usize) -> f64 {
        match *self {
            ZakWindow::Box => 0.0,
            ZakWindow::Gaussian { width } => {
                let c = (2.0 * width).powf(0.25);
                let d = trunc as f64;
                // Terms beyond distance `d` form a geometric-dominated series.
                let first = c * (-PI * width * d * d).exp();
                let ratio = (-PI * width * (2.0 * d + 1.0)).exp();
                2.0 * first / (1.0 - ratio).max(1e-300)
            }
        }
    }
}

fn eigen_extrema(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let n = m.rows();
    match n {
        1 => Ok((m[(0, 0)].re, m[(0, 0)].re)),
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)].norm_sqr();
            let mean = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + b).sqrt();
            Ok((mean - disc, mean + disc))
        }
        _ => {
            let s = hermitian_eigen(m, 1e-9)?;
            Ok((s.min(), s.max))
        }
    }
}

fn zz_core(zw: ZakWindow, p: i64, q: i64, grid: usize, trunc: usize) -> Result<(f64, f64)> {
    let (pu, qu) = (p as usize, q as usize);
    let pf = p as f64;
    let shift = pf / q as f64;
    let extrema: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|a| {
            let y = (a as f64 + 0.5) / (grid as f64 * pf);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for b in 0..grid {
                let omega = (b as f64 + 0.5) / grid as f64;
                let phi = ComplexMatrix::from_fn(qu, pu, |s, j| {
                    let x = y + j as f64 / pf;
                    let z = zw.zak(x, omega - s as f64 * shift, trunc).conj();
                    z * Complex64::from_polar(1.0, -2.0 * PI * s as f64 * shift * x)
                });
                let mut gram = ComplexMatrix::zeros(pu, pu);
                for i in 0..pu {
                    for j in i..pu {
                        let v: Complex64 = (0..qu).map(|s| phi[(s, i)].conj() * phi[(s, j)]).sum();
                        gram[(i, j)] = v;
                        gram[(j, i)] = v.conj();
                    }
                    gram[(i, i)] = Complex64::new(gram[(i, i)].re, 0.0);
                }
                let (l, h) = eigen_extrema(&gram)?;
                lo = lo.min(l);
                hi = hi.max(h);
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>>>()?;
    let lo = extrema.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
    let hi = extrema.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(((lo / pf).max(0.0), hi / pf))
}

fn reduce(p: i64, q: i64) -> Result<(i64, i64)> {
    if p <= 0 || q <= 0 {
        return Err(Error::InvalidDensity(format!("{p}/{q}")));
    }
    let g = p.gcd(&q);
    Ok((p / g, q / g))
}

fn report(zw: ZakWindow, p: i64, q: i64, grid: usize, trunc: usize, covolume: f64) -> Result<GaborBoundsReport> {
    if grid == 0 {
        return Err(Error::InvalidDensity("grid must be positive".into()));
    }
    let (p, q) = reduce(p, q)?;
    let (a, b) = zz_core(zw, p, q, grid, trunc)?;
    let mut notes = Vec::new();
    let tail = zw.tail(trunc);
    if tail > 1e-14 {
        notes.push(format!("Zak truncation tail {tail:.1e} exceeds 1e-14"));
    }
    let width = match zw {
        ZakWindow::Gaussian { width } => Some(width),
        ZakWindow::Box => None,
    };
    Ok(GaborBoundsReport {
        a,
        b,
        method: BoundsMethod::ZibulskiZeevi,
        params: BoundsParams {
            covolume,
            p: Some(p),
            q: Some(q),
            grid: Some(grid),
            trunc: Some(trunc),
            width,
            ..Default::default()
        },
        certified: false,
        notes,
    })
}

/// Bounds of `π(ℤ × (p/q)ℤ) w` for the Gaussian or box window.
pub fn zz_frame_bounds(w: &Window, p: i64, q: i64, grid: usize, trunc: usize) -> Result<GaborBoundsReport> {
    let zw = match w {
        Window::Gaussian => ZakWindow::Gaussian { width: 1.0 },
        Window::Box => ZakWindow::Box,
        Window::Sampled(_) => return Err(Error::Unsupported("Zak bounds need a Gaussian or box window".into())),
    };
    report(zw, p, q, grid, trunc, p as f64 / q as f64)
}

/// Bounds of `π(αℤ × βℤ) g` for the unit Gaussian with `αβ = p/q`. The
/// dilation `f ↦ α^{1/2} f(α ·)` is unitary and carries the system to the
/// lattice `ℤ × (p/q)ℤ` with the Gaussian of width `α²`.
pub fn zz_frame_bounds_separable(alpha: f64, p: i64, q: i64, grid: usize, trunc: usize) -> Result<GaborBoundsReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidLattice(format!("alpha = {alpha} must be positive")));
    }
    report(
        ZakWindow::Gaussian { width: alpha * alpha },
        p,
        q,
        grid,
        trunc,
        p as f64 / q as f64,
    )
}
