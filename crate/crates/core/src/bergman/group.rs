//! Fuchsian groups given by generators, word balls, orbits and stabilizers.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::moebius::{hyperbolic_distance, moebius_apply, MoebiusMap, UHPoint};
use crate::density::{ExactScalar, Theta};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions, QuadResult};

/// Tolerance for identifying orbit points in the hyperbolic metric.
pub const ORBIT_DEDUP: f64 = 1e-10;
const ELEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum GroupCovolume {
    Exact(ExactScalar),
    Float(f64),
}

impl GroupCovolume {
    pub fn to_f64(&self) -> f64 {
        match self {
            GroupCovolume::Exact(x) => x.to_f64(),
            GroupCovolume::Float(v) => *v,
        }
    }

    pub fn display(&self) -> String {
        match self {
            GroupCovolume::Exact(x) => x.to_string(),
            GroupCovolume::Float(v) => v.to_string(),
        }
    }

    /// `r` when the co-volume is exactly `r·π`.
    pub fn pi_multiple(&self) -> Option<num::rational::BigRational> {
        match self {
            GroupCovolume::Exact(x) if x.rational_part() == &num::zero() && matches!(x.theta(), Theta::Transcendental { name, .. } if name == "pi") => {
                Some(x.irrational_part().clone())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianGroup {
    pub name: String,
    pub generators: Vec<MoebiusMap>,
    pub covolume: GroupCovolume,
    pub cocompact: bool,
    /// The group is taken inside SL(2,ℝ) and contains `-I`.
    pub contains_center: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    generators: Vec<[f64; 4]>,
    covolume: CovolumeField,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    cocompact: bool,
    #[serde(default)]
    contains_center: bool,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CovolumeField {
    Number(f64),
    Text(String),
}

impl FuchsianGroup {
    /// PSL(2,ℤ) generated by `S` and `T`; co-volume `π/3`.
    pub fn psl2z() -> Self {
        Self {
            name: "psl2z".into(),
            generators: vec![MoebiusMap::s(), MoebiusMap::t()],
            covolume: GroupCovolume::Exact("1/3*pi".parse().expect("literal")),
            cocompact: false,
            contains_center: false,
        }
    }

    /// SL(2,ℤ) inside SL(2,ℝ): same orbits, but the center `±I` lies in
    /// the lattice.
    pub fn sl2z() -> Self {
        Self {
            name: "sl2z".into(),
            contains_center: true,
            ..Self::psl2z()
        }
    }

    pub fn bundled(name: &str) -> Result<Self> {
        match name {
            "psl2z" => Ok(Self::psl2z()),
            "sl2z" => Ok(Self::sl2z()),
            _ => Err(Error::Parse(format!("unknown group '{name}' (bundled: psl2z, sl2z)"))),
        }
    }

    /// JSON `{"generators": [[a,b,c,d], …], "covolume": …}`. The co-volume
    /// may be a number or an exact string such as `"2/3*pi"`.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
        if f.generators.is_empty() {
            return Err(Error::Parse("group file lists no generators".into()));
        }
        let generators = f
            .generators
            .iter()
            .map(|g| MoebiusMap::new(g[0], g[1], g[2], g[3]))
            .collect::<Result<Vec<_>>>()?;
        let covolume = match f.covolume {
            CovolumeField::Number(v) => GroupCovolume::Float(v),
            CovolumeField::Text(s) => GroupCovolume::Exact(s.parse()?),
        };
        let v = covolume.to_f64();
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidLattice(format!("co-volume {v} must be positive")));
        }
        Ok(Self {
            name: f.name.unwrap_or_else(|| "custom".into()),
            generators,
            covolume,
            cocompact: f.cocompact,
            contains_center: f.contains_center,
        })
    }

    /// Generators followed by their inverses, skipping inverses that
    /// coincide projectively with an earlier entry.
    fn symmetric_generators(&self) -> Vec<MoebiusMap> {
        let mut out: Vec<MoebiusMap> = Vec::new();
        for g in &self.generators {
            for m in [*g, g.inverse()] {
                if !out.iter().any(|o| o.approx_eq(&m, ELEMENT_TOL)) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// Distinct elements of word length at most `radius`, breadth first.
    pub fn word_ball(&self, radius: usize) -> Vec<MoebiusMap> {
        let gens = self.symmetric_generators();
        let mut elements = vec![MoebiusMap::identity()];
        let mut frontier = VecDeque::from([(MoebiusMap::identity(), 0usize)]);
        while let Some((m, len)) = frontier.pop_front() {
            if len == radius {
                continue;
            }
            for g in &gens {
                let next = m.compose(g);
                if !elements.iter().any(|e| e.approx_eq(&next, ELEMENT_TOL)) {
                    elements.push(next);
                    frontier.push_back((next, len + 1));
                }
            }
        }
        elements
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitPoint {
    pub point: UHPoint,
    pub map: MoebiusMap,
}

/// Distinct points `m·w` for `m` in the word ball, with the first map
/// reaching each point.
pub fn orbit_ball(g: &FuchsianGroup, w: &UHPoint, radius: usize) -> Vec<OrbitPoint> {
    let mut out: Vec<OrbitPoint> = Vec::new();
    for m in g.word_ball(radius) {
        let p = moebius_apply(&m, w);
        if !out.iter().any(|o| hyperbolic_distance(&o.point, &p) <= ORBIT_DEDUP) {
            out.push(OrbitPoint { point: p, map: m });
        }
    }
    out
}

/// Number of word-ball elements fixing `w`: a lower bound on `#F_w`.
pub fn stabilizer_order(g: &FuchsianGroup, w: &UHPoint, radius: usize) -> usize {
    g.word_ball(radius)
        .iter()
        .filter(|m| hyperbolic_distance(&moebius_apply(m, w), w) <= ORBIT_DEDUP)
        .count()
}

fn covolume_integral(x0: f64, x1: f64, opts: &QuadOptions) -> Result<QuadResult<f64>> {
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol * 0.1,
        rel_tol: opts.rel_tol * 0.1,
        max_intervals: opts.max_intervals,
    };
    let failure = std::cell::Cell::new(None);
    let r = integrate(
        |x: f64| {
            let y0 = (1.0 - x * x).max(0.0).sqrt();
            match integrate_to_infinity(|y: f64| 1.0 / (y * y), y0, &inner_opts) {
                Ok(v) => v.value,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        x0,
        x1,
        opts,
    )?;
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Hyperbolic area `∫∫ y^{-2} dx dy` of `{|x| ≤ 1/2, x² + y² ≥ 1}`.
pub fn modular_covolume(opts: &QuadOptions) -> Result<QuadResult<f64>> {
    covolume_integral(-0.5, 0.5, opts)
}

/// The same integral over the half `x ≥ 0`.
pub fn modular_covolume_half(opts: &QuadOptions) -> Result<QuadResult<f64>> {
    covolume_integral(0.0, 0.5, opts)
}
