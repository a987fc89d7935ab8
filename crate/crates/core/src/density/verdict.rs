//! The density trichotomy as a pure classifier.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::rational::BigRational;
use serde::Serialize;

use super::exact::{format_rational, ExactScalar};
use super::lattice::KleppnerStatus;
use crate::error::{Error, Result};

/// The normalization-independent product `vol · d_π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactScalar>,
    pub value: f64,
    /// Absolute error bar; zero for exact values.
    pub error: f64,
}

impl Invariant {
    pub fn exact(x: ExactScalar) -> Result<Self> {
        let value = x.to_f64();
        let v = Self {
            exact: Some(x),
            value,
            error: 0.0,
        };
        v.validate()?;
        Ok(v)
    }

    pub fn float(value: f64, error: f64) -> Result<Self> {
        let v = Self {
            exact: None,
            value,
            error: error.abs(),
        };
        v.validate()?;
        Ok(v)
    }

    /// `vol · d`, exact when both factors are.
    pub fn product(vol: &ExactScalar, d: &ExactScalar) -> Result<Self> {
        match vol.mul(d) {
            Ok(p) => Self::exact(p),
            Err(_) => Self::float(vol.to_f64() * d.to_f64(), 4.0 * f64::EPSILON * (vol.to_f64() * d.to_f64()).abs()),
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.value.is_finite() {
            return Err(Error::InvalidInvariant("non-finite invariant".into()));
        }
        let positive = match &self.exact {
            Some(x) => x.signum() > 0,
            None => self.value > 0.0,
        };
        if positive {
            Ok(())
        } else {
            Err(Error::InvalidInvariant(format!("invariant must be positive, got {}", self.value)))
        }
    }

    /// Comparison with a rational threshold; `None` when a float value's
    /// error bar straddles it.
    pub fn compare(&self, threshold: &BigRational) -> Option<Ordering> {
        match &self.exact {
            Some(x) => x.try_cmp(&ExactScalar::rational(threshold.clone())).ok(),
            None => {
                let t = super::exact::rat_f64(threshold);
                if self.value - self.error > t {
                    Some(Ordering::Greater)
                } else if self.value + self.error < t {
                    Some(Ordering::Less)
                } else if self.error == 0.0 {
                    Some(Ordering::Equal)
                } else {
                    None
                }
            }
        }
    }

    pub fn display(&self) -> String {
        match &self.exact {
            Some(x) => x.to_string(),
            None => format!("{}", self.value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    ParsevalFrameExists,
    OnbExists,
    OnSequenceExists,
    NoCyclicVector,
    NoSeparatingVector,
}

impl Claim {
    pub fn as_str(&self) -> &'static str {
        match self {
            Claim::ParsevalFrameExists => "parseval_frame_exists",
            Claim::OnbExists => "onb_exists",
            Claim::OnSequenceExists => "on_sequence_exists",
            Claim::NoCyclicVector => "no_cyclic_vector",
            Claim::NoSeparatingVector => "no_separating_vector",
        }
    }
}

/// Caveat codes attached to verdicts.
pub mod caveat {
    /// Kleppner not established: only necessity claims are made. Existence
    /// can fail below the threshold, as for the discrete series of SL(2,ℝ)
    /// restricted to lattices containing the center.
    pub const KLEPPNER_NOT_ESTABLISHED: &str = "kleppner_not_established";
    /// Invariant below one: no vector generates a Riesz sequence.
    pub const NO_RIESZ_VECTOR: &str = "no_riesz_vector";
    /// Float invariant whose error bar contains 1.
    pub const UNDECIDED_NEAR_ONE: &str = "invariant_undecided_near_one";
    /// Lattice meets the center of SL(2,ℝ).
    pub const CENTER_THRESHOLD_HALVES: &str = "center_threshold_halves";
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ContextFlags {
    /// The lattice contains the nontrivial center `{±I}` of SL(2,ℝ).
    pub meets_center: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub invariant: Invariant,
    pub kleppner: KleppnerStatus,
    pub claims: BTreeSet<Claim>,
    pub caveats: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Claims per regime. With Kleppner's condition the full trichotomy
/// applies; without it only the two unconditional necessities remain:
/// a cyclic vector forces `invariant ≤ 1`, a Riesz (complete or not)
/// vector forces `invariant ≥ 1`.
pub fn classify(invariant: &Invariant, kleppner: KleppnerStatus, flags: ContextFlags) -> Verdict {
    let one = BigRational::from_integer(1.into());
    let cmp = invariant.compare(&one);
    let mut claims = BTreeSet::new();
    let mut caveats = Vec::new();
    let mut notes = Vec::new();
    let kleppner = if flags.meets_center && kleppner == KleppnerStatus::Holds {
        notes.push("a central element has a finite σ-regular class".to_string());
        KleppnerStatus::Fails
    } else {
        kleppner
    };
    match (kleppner, cmp) {
        (_, None) => caveats.push(caveat::UNDECIDED_NEAR_ONE.to_string()),
        (KleppnerStatus::Holds, Some(Ordering::Less)) => {
            claims.insert(Claim::ParsevalFrameExists);
            claims.insert(Claim::NoSeparatingVector);
        }
        (KleppnerStatus::Holds, Some(Ordering::Equal)) => {
            claims.insert(Claim::OnbExists);
        }
        (KleppnerStatus::Holds, Some(Ordering::Greater)) => {
            claims.insert(Claim::OnSequenceExists);
            claims.insert(Claim::NoCyclicVector);
        }
        (_, Some(Ordering::Greater)) => {
            claims.insert(Claim::NoCyclicVector);
        }
        (_, Some(Ordering::Less)) => caveats.push(caveat::NO_RIESZ_VECTOR.to_string()),
        (_, Some(Ordering::Equal)) => {}
    }
    if kleppner != KleppnerStatus::Holds {
        caveats.push(caveat::KLEPPNER_NOT_ESTABLISHED.to_string());
        notes.push("existence claims withheld; below the threshold existence can fail (discrete series of SL(2,R) on lattices with center: threshold halves, vol*d' <= 1/2)".to_string());
    }
    if flags.meets_center {
        caveats.push(caveat::CENTER_THRESHOLD_HALVES.to_string());
    }
    Verdict {
        invariant: invariant.clone(),
        kleppner,
        claims,
        caveats,
        notes,
    }
}

/// Formal dimensions of the square-integrable representations in use,
/// relative to the Haar measures fixed by the models.
#[derive(Debug, Clone, PartialEq)]
pub enum FormalDimension {
    /// A rational (or ℚ(θ)) value.
    Exact(ExactScalar),
    /// `c / π` for rational `c`.
    OverPi(BigRational),
}

impl FormalDimension {
    pub fn to_f64(&self) -> f64 {
        match self {
            FormalDimension::Exact(x) => x.to_f64(),
            FormalDimension::OverPi(c) => super::exact::rat_f64(c) / std::f64::consts::PI,
        }
    }

    pub fn display(&self) -> String {
        match self {
            FormalDimension::Exact(x) => x.to_string(),
            FormalDimension::OverPi(c) => format!("{}/pi", format_rational(c)),
        }
    }
}

/// Schrödinger representation on `L²(ℝ^d)` with Lebesgue measure on ℝ^{2d}.
pub fn heisenberg_formal_dimension() -> FormalDimension {
    FormalDimension::Exact(ExactScalar::one())
}

/// Discrete series `π_α` of PSL(2,ℝ) on the weighted Bergman space, with
/// the invariant measure `dx dy / y²`: `d = (α - 1)/(4π)`.
pub fn bergman_formal_dimension(alpha: &BigRational) -> FormalDimension {
    FormalDimension::OverPi((alpha - BigRational::from_integer(1.into())) / BigRational::from_integer(4.into()))
}
