//! Density verdicts for discrete series orbits `π_α(Γ)g` on `A²_α(ℂ⁺)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, One};
use serde::Serialize;

use super::group::{stabilizer_order, FuchsianGroup, GroupCovolume};
use super::kernel::check_alpha;
use super::moebius::UHPoint;
use crate::density::{
    bergman_formal_dimension, classify, ContextFlags, ExactScalar, FormalDimension, Invariant, KleppnerStatus, Verdict,
};
use crate::error::Result;

/// Word radius used to count stabilizers.
pub const DEFAULT_STABILIZER_RADIUS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Undetermined,
}

impl Tri {
    fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Labeled {
    pub display: String,
    pub value: f64,
}

/// Properties of the kernel orbit `π_α(Γ) k_w`, read off the thresholds
/// for `#F_w · vol · d_π` against 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelVerdict {
    pub stabilizer_order: usize,
    pub weighted_invariant: Labeled,
    pub complete: Tri,
    pub frame: Tri,
    pub riesz: Tri,
    /// Orbit with the repetitions from `F_w` removed.
    pub reduced_riesz: Tri,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BergmanVerdict {
    pub alpha: f64,
    pub group: String,
    pub base: UHPoint,
    pub formal_dimension: Labeled,
    pub covolume: Labeled,
    pub cocompact: bool,
    pub generic: Verdict,
    pub kernel: KernelVerdict,
}

/// `α` as a small-denominator rational when it is one to 1e-12.
fn rational_alpha(alpha: f64) -> Option<BigRational> {
    for q in 1..=1000i64 {
        let p = (alpha * q as f64).round();
        if (p / q as f64 - alpha).abs() <= 1e-12 * alpha.abs().max(1.0) {
            return Some(BigRational::new(BigInt::from_f64(p)?, q.into()));
        }
    }
    None
}

fn invariant(cov: &GroupCovolume, d: Option<&FormalDimension>, d_value: f64) -> Result<Invariant> {
    if let (Some(r), Some(FormalDimension::OverPi(c))) = (cov.pi_multiple(), d) {
        return Invariant::exact(ExactScalar::rational(r * c));
    }
    let v = cov.to_f64() * d_value;
    Invariant::float(v, 8.0 * f64::EPSILON * v)
}

fn compare_one(inv: &Invariant) -> Option<std::cmp::Ordering> {
    inv.compare(&BigRational::one())
}

fn scaled(inv: &Invariant, k: usize) -> Result<Invariant> {
    match &inv.exact {
        Some(x) => Invariant::exact(x.mul(&ExactScalar::integer(k as i64))?),
        None => Invariant::float(inv.value * k as f64, inv.error * k as f64),
    }
}

pub fn bergman_classification(alpha: f64, group: &FuchsianGroup, w: &UHPoint, stabilizer_radius: usize) -> Result<BergmanVerdict> {
    use std::cmp::Ordering::*;
    check_alpha(alpha)?;
    let exact_alpha = rational_alpha(alpha);
    let d = exact_alpha.as_ref().map(bergman_formal_dimension);
    let d_value = (alpha - 1.0) / (4.0 * std::f64::consts::PI);
    let vol = &group.covolume;
    let inv = invariant(vol, d.as_ref(), d_value)?;

    // Inside SL(2,ℝ) with the center in Γ, the formal dimension halves.
    let (generic_inv, generic_d) = if group.contains_center {
        let half = match &d {
            Some(FormalDimension::OverPi(c)) => Some(FormalDimension::OverPi(c / BigRational::from_integer(2.into()))),
            other => other.clone(),
        };
        (invariant(vol, half.as_ref(), d_value / 2.0)?, half)
    } else {
        (inv.clone(), d.clone())
    };
    let generic_d_value = if group.contains_center { d_value / 2.0 } else { d_value };
    // Fuchsian groups in PSL(2,ℝ) are ICC, so Kleppner holds; the center
    // of SL(2,ℝ) breaks it.
    let flags = ContextFlags {
        meets_center: group.contains_center,
    };
    let mut generic = classify(&generic_inv, KleppnerStatus::Holds, flags);
    if group.contains_center {
        generic.notes.push("complete orbits exist iff vol*d' <= 1/2; no orbit is a Riesz sequence".into());
    }

    let f = stabilizer_order(group, w, stabilizer_radius);
    let weighted = scaled(&inv, f)?;
    let cmp = compare_one(&weighted);
    let mut notes = Vec::new();
    let complete = match cmp {
        Some(Less) => Tri::Yes,
        Some(Equal) => {
            notes.push("critical case #F_w*vol*d = 1: complete".into());
            Tri::Yes
        }
        Some(Greater) => Tri::No,
        None => Tri::Undetermined,
    };
    let frame = if !group.cocompact {
        notes.push("not co-compact: the kernel orbit is never a frame".into());
        Tri::No
    } else {
        match cmp {
            Some(o) => Tri::from_bool(o == Less),
            None => Tri::Undetermined,
        }
    };
    let reduced_riesz = match cmp {
        Some(Greater) => Tri::Yes,
        Some(_) if f == 1 => Tri::No,
        Some(_) => Tri::Undetermined,
        None => Tri::Undetermined,
    };
    let riesz = if f > 1 {
        notes.push("nontrivial stabilizer: the indexed orbit repeats vectors".into());
        Tri::No
    } else {
        reduced_riesz
    };
    if f > 1 {
        notes.push(format!("stabilizer order {f} counted over words of length <= {stabilizer_radius}"));
    }
    if group.contains_center {
        notes.push("kernel thresholds computed for the image of the group in PSL(2,R)".into());
    }

    let label = |x: &Invariant| Labeled {
        display: x.display(),
        value: x.value,
    };
    Ok(BergmanVerdict {
        alpha,
        group: group.name.clone(),
        base: *w,
        formal_dimension: Labeled {
            display: generic_d.map_or_else(|| generic_d_value.to_string(), |d| d.display()),
            value: generic_d_value,
        },
        covolume: Labeled {
            display: vol.display(),
            value: vol.to_f64(),
        },
        cocompact: group.cocompact,
        generic,
        kernel: KernelVerdict {
            stabilizer_order: f,
            weighted_invariant: label(&weighted),
            complete,
            frame,
            riesz,
            reduced_riesz,
            notes,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Claim;

    fn pt(s: &str) -> UHPoint {
        UHPoint::parse(s).unwrap()
    }

    #[test]
    fn modular_invariants_are_exact() {
        let g = FuchsianGroup::psl2z();
        for (alpha, want) in [(2.0, "1/12"), (7.0, "1/2"), (13.0, "1")] {
            let v = bergman_classification(alpha, &g, &pt("2i"), 4).unwrap();
            assert_eq!(v.generic.invariant.exact.as_ref().unwrap().to_string(), want);
        }
    }

    #[test]
    fn critical_weight_kernel_orbits() {
        let g = FuchsianGroup::psl2z();
        let v = bergman_classification(13.0, &g, &pt("2i"), 4).unwrap();
        assert!(v.generic.claims.contains(&Claim::OnbExists));
        assert_eq!(v.kernel.complete, Tri::Yes);
        assert_eq!(v.kernel.frame, Tri::No);
        let v = bergman_classification(13.0, &g, &pt("i"), 4).unwrap();
        assert_eq!(v.kernel.stabilizer_order, 2);
        assert_eq!(v.kernel.complete, Tri::No);
        assert_eq!(v.kernel.riesz, Tri::No);
        assert_eq!(v.kernel.reduced_riesz, Tri::Yes);
    }

    #[test]
    fn center_caveat() {
        let v = bergman_classification(7.0, &FuchsianGroup::sl2z(), &pt("2i"), 4).unwrap();
        assert_eq!(v.generic.invariant.exact.as_ref().unwrap().to_string(), "1/4");
        assert_eq!(v.generic.kleppner, KleppnerStatus::Fails);
        assert!(v.generic.claims.is_empty());
        assert!(v.generic.caveats.iter().any(|c| c == "center_threshold_halves"));
        assert!(bergman_classification(1.0, &FuchsianGroup::psl2z(), &pt("i"), 1).is_err());
    }

    #[test]
    fn irrational_weight_falls_back_to_float() {
        let v = bergman_classification(2.0 + std::f64::consts::SQRT_2, &FuchsianGroup::psl2z(), &pt("2i"), 2).unwrap();
        assert!(v.generic.invariant.exact.is_none());
        assert!((v.generic.invariant.value - (1.0 + std::f64::consts::SQRT_2) / 12.0).abs() < 1e-14);
    }
}
