//! Exact scalars `p/q + (r/s)·θ` over a single generator θ.
//!
//! θ is either a quadratic surd `√m` (m squarefree) or a transcendental
//! marker. For the marker the only fact ever used is that `{1, θ}` is
//! linearly independent over ℚ; products that would need `θ²` are refused.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Theta {
    None,
    /// `√m` with `m > 1` squarefree.
    Sqrt(u64),
    /// Transcendental number, carried with its decimal value for display
    /// and ordering.
    Transcendental { name: String, value: f64 },
}

impl Theta {
    fn value(&self) -> f64 {
        match self {
            Theta::None => 0.0,
            Theta::Sqrt(m) => (*m as f64).sqrt(),
            Theta::Transcendental { value, .. } => *value,
        }
    }

    pub fn pi() -> Self {
        Theta::Transcendental {
            name: "pi".into(),
            value: std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactScalar {
    rational: BigRational,
    irrational: BigRational,
    theta: Theta,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `m = k² · r` with `r` squarefree.
fn square_free_part(m: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut r = m;
    let mut p = 2u64;
    while p * p <= r {
        while r % (p * p) == 0 {
            r /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, r)
}

impl ExactScalar {
    pub fn rational(value: BigRational) -> Self {
        Self {
            rational: value,
            irrational: BigRational::zero(),
            theta: Theta::None,
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(ratio(n, d))
    }

    pub fn integer(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `coeff · √m`, folding square factors of `m` into the coefficient.
    pub fn sqrt(coeff: BigRational, m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::zero());
        }
        let (k, r) = square_free_part(m);
        let coeff = coeff * BigRational::from_integer(BigInt::from(k));
        if r == 1 {
            return Ok(Self::rational(coeff));
        }
        Ok(Self::new(BigRational::zero(), coeff, Theta::Sqrt(r)))
    }

    pub fn new(rational: BigRational, irrational: BigRational, theta: Theta) -> Self {
        let theta = if irrational.is_zero() { Theta::None } else { theta };
        Self {
            rational,
            irrational,
            theta,
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irrational
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn to_f64(&self) -> f64 {
        rat_f64(&self.rational) + rat_f64(&self.irrational) * self.theta.value()
    }

    fn common_theta(&self, other: &Self) -> Result<Theta> {
        match (&self.theta, &other.theta) {
            (Theta::None, t) | (t, Theta::None) => Ok(t.clone()),
            (a, b) if a == b => Ok(a.clone()),
            (a, b) => Err(Error::UnsupportedField(format!(
                "mixed irrational generators {a:?} and {b:?}"
            ))),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let theta = self.common_theta(other)?;
        Ok(Self::new(
            &self.rational + &other.rational,
            &self.irrational + &other.irrational,
            theta,
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.rational, -&self.irrational, self.theta.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let theta = self.common_theta(other)?;
        let (a, b) = (&self.rational, &self.irrational);
        let (c, d) = (&other.rational, &other.irrational);
        let cross = a * d + b * c;
        let square = b * d;
        if square.is_zero() {
            return Ok(Self::new(a * c, cross, theta));
        }
        match theta {
            Theta::Sqrt(m) => {
                let m = BigRational::from_integer(BigInt::from(m));
                Ok(Self::new(a * c + square * m, cross, theta))
            }
            _ => Err(Error::UnsupportedField(
                "product needs θ² for a transcendental generator".into(),
            )),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::UnsupportedField("division by zero".into()));
        }
        if self.is_rational() {
            return Ok(Self::rational(self.rational.recip()));
        }
        match self.theta {
            Theta::Sqrt(m) => {
                // 1/(a + b√m) = (a - b√m)/(a² - m b²)
                let m = BigRational::from_integer(BigInt::from(m));
                let norm = &self.rational * &self.rational - &self.irrational * &self.irrational * m;
                Ok(Self::new(
                    &self.rational / &norm,
                    -&self.irrational / &norm,
                    self.theta.clone(),
                ))
            }
            _ => Err(Error::UnsupportedField(
                "inverse of a transcendental element".into(),
            )),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// Exact sign for quadratic surds; for the transcendental marker the
    /// sign of a non-rational element is read off its decimal value
    /// (such an element is never zero).
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.rational);
        let sb = sign(&self.irrational);
        if sb == 0 {
            return sa;
        }
        match &self.theta {
            Theta::Sqrt(m) => {
                if sa == 0 || sa == sb {
                    return sb;
                }
                let m = BigRational::from_integer(BigInt::from(*m));
                let a2 = &self.rational * &self.rational;
                let b2m = &self.irrational * &self.irrational * m;
                match a2.cmp(&b2m) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                }
            }
            _ => {
                let v = self.to_f64();
                if v > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact comparison; errors on mixed generators.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.sub(other)?.signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn rat_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theta = match &self.theta {
            Theta::None => return write!(f, "{}", format_rational(&self.rational)),
            Theta::Sqrt(m) => format!("sqrt({m})"),
            Theta::Transcendental { name, .. } => name.clone(),
        };
        let coeff = &self.irrational;
        let irr = if coeff.is_one() {
            theta
        } else if (-coeff).is_one() {
            format!("-{theta}")
        } else {
            format!("{}*{theta}", format_rational(coeff))
        };
        if self.rational.is_zero() {
            write!(f, "{irr}")
        } else if irr.starts_with('-') {
            write!(f, "{}{irr}", format_rational(&self.rational))
        } else {
            write!(f, "{}+{irr}", format_rational(&self.rational))
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if let Some((int, frac)) = s.split_once('.') {
        // Finite decimals are exact rationals.
        let digits = frac.len() as u32;
        let neg = int.trim_start().starts_with('-');
        let whole: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10u32).pow(digits);
        let frac = if neg { -frac } else { frac };
        Ok(BigRational::new(whole * &scale + frac, scale))
    } else {
        Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
    }
}

/// One signed term: `RAT`, `RAT*sqrt(M)`, `sqrt(M)`, `RAT*pi`, `pi`.
fn parse_term(term: &str) -> Result<ExactScalar> {
    let t = term.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let (coeff, generator) = match body.rsplit_once('*') {
        Some((c, g)) => (parse_rational(c)?, Some(g.trim())),
        None if body.starts_with("sqrt") || body.starts_with("pi") => (BigRational::one(), Some(body)),
        None => (parse_rational(body)?, None),
    };
    let coeff = if neg { -coeff } else { coeff };
    // Trailing divisor on the generator: `sqrt(2)/2`, `pi/3`.
    let (coeff, generator) = match generator.and_then(|g| g.rsplit_once('/')) {
        Some((g, d)) if !g.is_empty() => (coeff / parse_rational(d)?, Some(g.trim())),
        _ => (coeff, generator),
    };
    match generator {
        None => Ok(ExactScalar::rational(coeff)),
        Some("pi") => Ok(ExactScalar::new(BigRational::zero(), coeff, Theta::pi())),
        Some(g) => {
            let inner = g
                .strip_prefix("sqrt(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("unknown generator '{g}'")))?;
            let m: i64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid radicand '{inner}'")))?;
            if m < 0 {
                return Err(Error::UnsupportedField(format!("sqrt({m}) is not real")));
            }
            if inner.contains("sqrt") {
                return Err(Error::UnsupportedField("nested radicals".into()));
            }
            ExactScalar::sqrt(coeff, m as u64)
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Sums of terms such as `1/2`, `3/4*sqrt(2)`, `-sqrt(5)`, `2*pi`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if s.matches("sqrt(").any(|_| true) && s.contains("sqrt(sqrt") {
            return Err(Error::UnsupportedField("nested radicals".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let mut depth = 0;
        let bytes = s.as_bytes();
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start => {
                    let prev = s[..i].trim_end();
                    // Keep signs attached to exponents-free leading terms.
                    if !prev.ends_with('*') && !prev.ends_with('/') && !prev.is_empty() {
                        terms.push(&s[start..i]);
                        start = i;
                    }
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        let mut acc = ExactScalar::zero();
        for t in terms {
            acc = acc.add(&parse_term(t)?)?;
        }
        Ok(acc)
    }
}
