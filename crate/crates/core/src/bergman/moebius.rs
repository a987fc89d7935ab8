//! The upper half-plane, PSL(2,ℝ) acting by Moebius maps, and the
//! automorphy factor `j(m, z) = (cz + d)^{-1}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UHPoint {
    pub z: Complex64,
}

impl UHPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite);
        }
        if z.im <= 1e-15 {
            return Err(Error::Unsupported(format!("{z} is not in the upper half-plane")));
        }
        Ok(Self { z })
    }

    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        Self::new(Complex64::new(x, y))
    }

    /// Parses `"x+yi"`, `"yi"`, `"i"`, `"x-yi"`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot parse point '{s}' (expected x+yi)"));
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // Split at the last sign that is not leading or part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let x: f64 = re.parse().map_err(|_| bad())?;
        let y: f64 = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse().map_err(|_| bad())?,
        };
        Self::from_xy(x, y)
    }

    pub fn x(&self) -> f64 {
        self.z.re
    }

    pub fn y(&self) -> f64 {
        self.z.im
    }
}

/// `d(z, w) = 2 asinh(|z - w| / (2 √(Im z Im w)))`.
pub fn hyperbolic_distance(a: &UHPoint, b: &UHPoint) -> f64 {
    2.0 * ((a.z - b.z).norm() / (2.0 * (a.y() * b.y()).sqrt())).asinh()
}

/// `[[a, b], [c, d]]` with `ad - bc = 1`, stored with its first nonzero
/// entry positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() >= 1e-12 {
            return Err(Error::InvalidLattice(format!("determinant {det} is not 1")));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(a: f64, b: f64, c: f64, d: f64) -> Self {
        let first = [a, b, c, d].into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Self { a: -a, b: -b, c: -c, d: -d }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `z ↦ -1/z`.
    pub fn s() -> Self {
        Self::canonical(0.0, -1.0, 1.0, 0.0)
    }

    /// `z ↦ z + 1`.
    pub fn t() -> Self {
        Self { a: 1.0, b: 1.0, c: 0.0, d: 1.0 }
    }

    /// Matrix product `self · other`, acting as `self ∘ other`.
    pub fn compose(&self, o: &Self) -> Self {
        Self::canonical(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.d, -self.b, -self.c, self.a)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let dev = (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs());
        dev <= tol
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

pub fn moebius_apply(m: &MoebiusMap, z: &UHPoint) -> UHPoint {
    let w = (z.z * m.a + m.b) / (z.z * m.c + m.d);
    // Im(mz) = Im z / |cz + d|² keeps the result strictly inside ℂ⁺.
    let im = z.y() / (z.z * m.c + m.d).norm_sqr();
    UHPoint {
        z: Complex64::new(w.re, im),
    }
}

/// `j(m, z)^α` on the principal branch, `j(m, z) = (cz + d)^{-1}`.
pub fn j_cocycle(m: &MoebiusMap, z: &UHPoint, alpha: f64) -> Complex64 {
    let j = (z.z * m.c + m.d).inv();
    (j.ln() * alpha).exp()
}
