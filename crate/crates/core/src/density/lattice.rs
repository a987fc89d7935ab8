//! Lattices `Γ = Aℤ^{2d}` in the time-frequency plane, their co-volume and
//! Kleppner's condition for the Heisenberg cocycle.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::exact::{ExactScalar, Theta};
use super::hnf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Exact(Vec<ExactScalar>),
    Float(Vec<f64>),
}

/// A `2d × 2d` basis matrix, row-major. Column `j` is the `j`-th generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticLattice {
    dim: usize,
    entries: Entries,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Covolume {
    Exact(ExactScalar),
    Float(f64),
}

impl Covolume {
    pub fn to_f64(&self) -> f64 {
        match self {
            Covolume::Exact(x) => x.to_f64(),
            Covolume::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&ExactScalar> {
        match self {
            Covolume::Exact(x) => Some(x),
            Covolume::Float(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KleppnerStatus {
    Holds,
    Fails,
    Unknown,
}

impl KleppnerStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::Unknown => "unknown",
        }
    }
}

impl std::fmt::Display for KleppnerStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for KleppnerStatus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holds" => Ok(Self::Holds),
            "fails" => Ok(Self::Fails),
            "unknown" => Ok(Self::Unknown),
            _ => Err(Error::Parse(format!("unknown Kleppner status '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KleppnerResult {
    pub status: KleppnerStatus,
    /// A nonzero `n` with `(AᵀJA) n ∈ ℤ^{2d}` when the condition fails.
    pub witness: Option<Vec<i64>>,
    /// For exhaustive search, the radius covered when no witness exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub searched_radius: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl KleppnerResult {
    /// Whether an exhaustive search to `radius` is consistent with this
    /// exact result: same status and same witness, except that a failure
    /// whose shortest witness lies beyond the radius reads as `holds` up to
    /// the radius.
    pub fn agrees_with_brute(&self, brute: &KleppnerResult, radius: u32) -> bool {
        let beyond = |w: &Option<Vec<i64>>| w.as_ref().is_some_and(|v| v.iter().any(|x| x.unsigned_abs() > radius as u64));
        match (self.status, brute.status) {
            (KleppnerStatus::Fails, KleppnerStatus::Fails) => self.witness == brute.witness,
            (KleppnerStatus::Fails, KleppnerStatus::Holds) => beyond(&self.witness),
            (a, b) => a == b,
        }
    }

    fn unknown(reason: impl Into<String>) -> Self {
        Self {
            status: KleppnerStatus::Unknown,
            witness: None,
            searched_radius: None,
            reason: Some(reason.into()),
        }
    }
}

fn check_dim(dim: usize, len: usize) -> Result<()> {
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::InvalidLattice(format!("dimension {dim} is not even and positive")));
    }
    if len != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            got: len,
        });
    }
    Ok(())
}

impl SymplecticLattice {
    pub fn from_exact(dim: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        check_dim(dim, entries.len())?;
        let l = Self {
            dim,
            entries: Entries::Exact(entries),
        };
        l.ensure_nonsingular()?;
        Ok(l)
    }

    pub fn from_f64(dim: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(dim, entries.len())?;
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let l = Self {
            dim,
            entries: Entries::Float(entries),
        };
        l.ensure_nonsingular()?;
        Ok(l)
    }

    /// `diag(α, β)` for the separable lattice `αℤ × βℤ`.
    pub fn separable(alpha: ExactScalar, beta: ExactScalar) -> Result<Self> {
        Self::from_exact(2, vec![alpha, ExactScalar::zero(), ExactScalar::zero(), beta])
    }

    /// Parses `"a,b;c,d"`: rows separated by `;`, entries by `,`. Every
    /// entry is read as an exact scalar; the lattice is exact if all parse.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').map(str::trim).filter(|r| !r.is_empty()).collect();
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in &rows {
            let cells: Vec<&str> = r.split(',').collect();
            if cells.len() != dim {
                return Err(Error::Parse(format!("row '{r}' has {} entries, expected {dim}", cells.len())));
            }
            entries.extend(cells);
        }
        let exact: Result<Vec<ExactScalar>> = entries.iter().map(|c| c.parse()).collect();
        match exact {
            Ok(e) => Self::from_exact(dim, e),
            Err(Error::UnsupportedField(m)) => Err(Error::UnsupportedField(m)),
            Err(_) => {
                let floats: std::result::Result<Vec<f64>, _> = entries.iter().map(|c| c.trim().parse::<f64>()).collect();
                match floats {
                    Ok(f) => Self::from_f64(dim, f),
                    Err(_) => Err(Error::Parse(format!("cannot parse basis '{s}'"))),
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            Entries::Exact(e) => e[i * self.dim + j].to_f64(),
            Entries::Float(e) => e[i * self.dim + j],
        }
    }

    pub fn exact_entries(&self) -> Option<&[ExactScalar]> {
        match &self.entries {
            Entries::Exact(e) => Some(e),
            Entries::Float(_) => None,
        }
    }

    fn ensure_nonsingular(&self) -> Result<()> {
        let singular = match self.exact_determinant() {
            Some(Ok(det)) => det.is_zero(),
            _ => self.float_determinant().abs() <= 1e-14 * self.float_scale(),
        };
        if singular {
            Err(Error::SingularBasis)
        } else {
            Ok(())
        }
    }

    fn float_scale(&self) -> f64 {
        let m = (0..self.dim * self.dim)
            .map(|k| self.entry_f64(k / self.dim, k % self.dim).abs())
            .fold(0.0, f64::max);
        m.powi(self.dim as i32).max(f64::MIN_POSITIVE)
    }

    fn float_determinant(&self) -> f64 {
        let n = self.dim;
        let mut a: Vec<f64> = (0..n * n).map(|k| self.entry_f64(k / n, k % n)).collect();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs()))
                .unwrap_or(c);
            if a[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for k in 0..n {
                    a.swap(p * n + k, c * n + k);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for r in c + 1..n {
                let f = a[r * n + c] / piv;
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
            }
        }
        det
    }

    /// Division-free cofactor expansion, so a transcendental generator
    /// survives whenever no product of two irrational entries occurs.
    fn exact_determinant(&self) -> Option<Result<ExactScalar>> {
        let e = self.exact_entries()?;
        let n = self.dim;
        let cols: Vec<usize> = (0..n).collect();
        Some(cofactor_det(e, n, 0, &cols))
    }

    pub fn covolume(&self) -> Result<Covolume> {
        match self.exact_determinant() {
            Some(Ok(det)) => {
                if det.is_zero() {
                    Err(Error::SingularBasis)
                } else {
                    Ok(Covolume::Exact(det.abs()))
                }
            }
            _ => {
                let d = self.float_determinant();
                if d.abs() <= 1e-14 * self.float_scale() {
                    Err(Error::SingularBasis)
                } else {
                    Ok(Covolume::Float(d.abs()))
                }
            }
        }
    }

    /// `A·U` for an integer matrix `U`.
    pub fn mul_integer(&self, u: &[i64]) -> Result<Self> {
        let n = self.dim;
        if u.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: u.len(),
            });
        }
        match &self.entries {
            Entries::Exact(e) => {
                let mut out = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = ExactScalar::zero();
                        for k in 0..n {
                            acc = acc.add(&e[i * n + k].mul(&ExactScalar::integer(u[k * n + j]))?)?;
                        }
                        out.push(acc);
                    }
                }
                Self::from_exact(n, out)
            }
            Entries::Float(e) => {
                let out = (0..n * n)
                    .map(|k| (0..n).map(|m| e[(k / n) * n + m] * u[m * n + k % n] as f64).sum())
                    .collect();
                Self::from_f64(n, out)
            }
        }
    }

    /// `M = AᵀJA` with `J = [[0, I], [-I, 0]]`, exactly.
    fn symplectic_gram(&self) -> Result<Vec<ExactScalar>> {
        let e = self
            .exact_entries()
            .ok_or_else(|| Error::UnsupportedField("float entries".into()))?;
        let n = self.dim;
        let d = n / 2;
        // (JA)_{ij}
        let ja = |i: usize, j: usize| -> ExactScalar {
            if i < d {
                e[(i + d) * n + j].clone()
            } else {
                e[(i - d) * n + j].neg()
            }
        };
        let mut m = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExactScalar::zero();
                for k in 0..n {
                    acc = acc.add(&e[k * n + i].mul(&ja(k, j))?)?;
                }
                m.push(acc);
            }
        }
        Ok(m)
    }

    /// Rational and θ parts of `M` scaled by a common denominator `D`,
    /// returned as integer matrices with `D`.
    fn scaled_gram(&self) -> Result<(Vec<BigInt>, Vec<BigInt>, BigInt)> {
        let n = self.dim;
        let m = if n == 2 {
            // AᵀJA = det(A)·J in the plane.
            let det = self.exact_determinant().ok_or_else(|| Error::UnsupportedField("float entries".into()))??;
            let z = ExactScalar::zero();
            vec![z.clone(), det.clone(), det.neg(), z]
        } else {
            self.symplectic_gram()?
        };
        let mut theta: Option<Theta> = None;
        for x in &m {
            if !x.is_rational() {
                match &theta {
                    None => theta = Some(x.theta().clone()),
                    Some(t) if t == x.theta() => {}
                    Some(_) => return Err(Error::UnsupportedField("mixed irrational generators".into())),
                }
            }
        }
        let mut den = BigInt::one();
        for x in &m {
            den = den.lcm(x.rational_part().denom());
            den = den.lcm(x.irrational_part().denom());
        }
        let scale = |r: &BigRational| -> BigInt { r.numer() * (&den / r.denom()) };
        let rat = m.iter().map(|x| scale(x.rational_part())).collect();
        let irr = m.iter().map(|x| scale(x.irrational_part())).collect();
        Ok((rat, irr, den))
    }

    /// Decides Kleppner's condition for the Heisenberg cocycle. Since `Γ`
    /// is abelian, the condition holds iff no nonzero `n ∈ ℤ^{2d}` has
    /// `(AᵀJA)n ∈ ℤ^{2d}`. Using `{1, θ}` independent over ℚ, that set is
    /// `{n : M_θ n = 0, M_rat n ∈ ℤ^{2d}}`, computed as an integer kernel.
    pub fn kleppner_check(&self) -> Result<KleppnerResult> {
        if !self.is_exact() {
            return Ok(KleppnerResult::unknown("float basis entries"));
        }
        let (rat, irr, den) = match self.scaled_gram() {
            Ok(v) => v,
            Err(Error::UnsupportedField(m)) => return Ok(KleppnerResult::unknown(m)),
            Err(e) => return Err(e),
        };
        let n = self.dim;
        // Unknowns (n, k) ∈ ℤ^{2n}:  D·M_rat n - D·k = 0,  D·M_θ n = 0.
        let mut b: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut row: Vec<BigInt> = rat[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| if i == j { -den.clone() } else { BigInt::zero() }));
            b.push(row);
        }
        for i in 0..n {
            let mut row: Vec<BigInt> = irr[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|_| BigInt::zero()));
            b.push(row);
        }
        let kernel = hnf::integer_kernel(&b, 2 * n);
        if kernel.is_empty() {
            return Ok(KleppnerResult {
                status: KleppnerStatus::Holds,
                witness: None,
                searched_radius: None,
                reason: None,
            });
        }
        let basis: Vec<Vec<BigInt>> = kernel.into_iter().map(|v| v[..n].to_vec()).collect();
        let reduced = hnf::reduce_basis(basis);
        Ok(KleppnerResult {
            status: KleppnerStatus::Fails,
            witness: hnf::short_vector(&reduced),
            searched_radius: None,
            reason: None,
        })
    }

    /// Exhaustive search for a witness with `‖n‖_∞ ≤ radius`, shell by
    /// shell. Reports `holds` with the searched radius when none exists.
    pub fn kleppner_brute(&self, radius: u32) -> Result<KleppnerResult> {
        if !self.is_exact() {
            return Ok(KleppnerResult::unknown("float basis entries"));
        }
        let (rat, irr, den) = match self.scaled_gram() {
            Ok(v) => v,
            Err(Error::UnsupportedField(m)) => return Ok(KleppnerResult::unknown(m)),
            Err(e) => return Err(e),
        };
        let to_i = |v: &[BigInt]| -> Option<Vec<i128>> { v.iter().map(|x| x.to_i128()).collect() };
        let (Some(rat), Some(irr), Some(den)) = (to_i(&rat), to_i(&irr), den.to_i128()) else {
            return Ok(KleppnerResult::unknown("entries too large for exhaustive search"));
        };
        let n = self.dim;
        let is_witness = |v: &[i64]| -> bool {
            (0..n).all(|i| {
                let row = i * n..(i + 1) * n;
                let t: i128 = irr[row.clone()].iter().zip(v).map(|(a, &x)| a * x as i128).sum();
                let r: i128 = rat[row].iter().zip(v).map(|(a, &x)| a * x as i128).sum();
                t == 0 && r.rem_euclid(den) == 0
            })
        };
        let r_max = radius as i64;
        for r in 1..=r_max {
            let mut best: Option<Vec<i64>> = None;
            let side = (2 * r + 1) as usize;
            let total = side.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut v = vec![0i64; n];
                for x in v.iter_mut() {
                    *x = (c % side) as i64 - r;
                    c /= side;
                }
                if v.iter().map(|x| x.abs()).max() != Some(r) || !is_witness(&v) {
                    continue;
                }
                hnf::normalize_sign(&mut v);
                if best.as_ref().map_or(true, |b| hnf::witness_key(&v) < hnf::witness_key(b)) {
                    best = Some(v);
                }
            }
            if best.is_some() {
                return Ok(KleppnerResult {
                    status: KleppnerStatus::Fails,
                    witness: best,
                    searched_radius: Some(radius),
                    reason: None,
                });
            }
        }
        Ok(KleppnerResult {
            status: KleppnerStatus::Holds,
            witness: None,
            searched_radius: Some(radius),
            reason: Some(format!("no witness with sup-norm at most {radius}")),
        })
    }
}

fn cofactor_det(e: &[ExactScalar], n: usize, row: usize, cols: &[usize]) -> Result<ExactScalar> {
    if cols.len() == 1 {
        return Ok(e[row * n + cols[0]].clone());
    }
    let mut acc = ExactScalar::zero();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &e[row * n + c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor_det(e, n, row + 1, &rest)?;
        let term = entry.mul(&minor)?;
        acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}
