//! Finite Weyl–Heisenberg systems on ℂ^N.
//!
//! `π(k, l) = M_l T_k` with `(T_k f)(t) = f(t - k)` and
//! `(M_l f)(t) = ω^{lt} f(t)`, `ω = e^{2πi/N}`. With this order the
//! composition law is
//!
//! ```text
//! π(k, l) π(k', l') = σ((k, l), (k', l')) π(k + k', l + l'),   σ = ω^{-l'k}
//! ```
//!
//! equivalently `π(k + k', l + l') = ω^{l'k} π(k, l) π(k', l')`.
//!
//! Finite abelian groups never satisfy Kleppner's condition (every
//! conjugacy class is finite), so this model checks the frame algebra and
//! its identities. It says nothing about the existence half of the density
//! trichotomy.

use num::rational::Ratio;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{self, FrameSystem};
use crate::linalg::{ComplexMatrix, SpectralReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteWHRep {
    n: usize,
}

impl FiniteWHRep {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLattice("N must be at least 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ω^e` for an integer exponent, reduced mod N before evaluating.
    pub fn omega_pow(&self, e: i64) -> Complex64 {
        let r = e.rem_euclid(self.n as i64) as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r / self.n as f64)
    }

    /// Multiplier σ with `π(γ)π(γ') = σ(γ, γ') π(γ + γ')`.
    pub fn cocycle(&self, (k, _l): (usize, usize), (_k2, l2): (usize, usize)) -> Complex64 {
        self.omega_pow(-((l2 * k) as i64))
    }

    fn reduce(&self, x: i64) -> usize {
        x.rem_euclid(self.n as i64) as usize
    }

    /// Applies `π(k, l)` to a vector without forming the matrix.
    pub fn apply(&self, (k, l): (usize, usize), f: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|t| self.omega_pow((l * t) as i64) * f[(t + n - k % n) % n])
            .collect()
    }
}

/// `π(k, l)` as an N×N matrix; `k`, `l` are reduced mod N.
pub fn wh_matrix(rep: &FiniteWHRep, k: i64, l: i64) -> ComplexMatrix {
    let n = rep.n;
    let (k, l) = (rep.reduce(k), rep.reduce(l));
    ComplexMatrix::from_fn(n, n, |t, s| {
        if s == (t + n - k) % n {
            rep.omega_pow((l * t) as i64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Separable lattice `aℤ_N × bℤ_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    a: usize,
    b: usize,
    points: Vec<(usize, usize)>,
}

impl FiniteLattice {
    pub fn new(rep: &FiniteWHRep, a: usize, b: usize) -> Result<Self> {
        let n = rep.n;
        if a == 0 || b == 0 || n % a != 0 || n % b != 0 {
            return Err(Error::InvalidLattice(format!(
                "steps a={a}, b={b} must divide N={n}"
            )));
        }
        let points = (0..n / a)
            .flat_map(|i| (0..n / b).map(move |j| (a * i, b * j)))
            .collect();
        Ok(Self { n, a, b, points })
    }

    pub fn full(rep: &FiniteWHRep) -> Self {
        Self::new(rep, 1, 1).expect("1 divides every N")
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, (k, l): (usize, usize)) -> bool {
        k < self.n && l < self.n && k % self.a == 0 && l % self.b == 0
    }

    /// Position of a point in `points`.
    pub fn index_of(&self, (k, l): (usize, usize)) -> Option<usize> {
        self.contains((k, l))
            .then(|| (k / self.a) * (self.n / self.b) + l / self.b)
    }

    fn check_rep(&self, rep: &FiniteWHRep) -> Result<()> {
        if rep.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: rep.n,
                got: self.n,
            });
        }
        Ok(())
    }
}

/// Coefficient sequence indexed like [`FiniteLattice::points`].
#[derive(Debug, Clone, PartialEq)]
pub struct WHCoefficients {
    pub values: Vec<Complex64>,
}

impl WHCoefficients {
    pub fn zeros(lat: &FiniteLattice) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); lat.len()],
        }
    }

    pub fn delta(lat: &FiniteLattice, point: (usize, usize)) -> Result<Self> {
        let idx = lat
            .index_of(point)
            .ok_or(Error::GammaNotInLattice(point.0, point.1))?;
        let mut c = Self::zeros(lat);
        c.values[idx] = Complex64::new(1.0, 0.0);
        Ok(c)
    }
}

/// The orbit `{π(γ) g : γ ∈ Γ}` labelled by lattice points.
pub fn wh_system(rep: &FiniteWHRep, lat: &FiniteLattice, g: &[Complex64]) -> Result<FrameSystem> {
    lat.check_rep(rep)?;
    if g.len() != rep.n {
        return Err(Error::DimensionMismatch {
            expected: rep.n,
            got: g.len(),
        });
    }
    let vectors = lat.points.iter().map(|&p| rep.apply(p, g)).collect();
    let labels = lat.points.iter().map(|(k, l)| format!("({k},{l})")).collect();
    FrameSystem::new(rep.n, vectors, labels)
}

/// `π(c) = Σ_γ c_γ π(γ)`.
pub fn coefficient_operator(rep: &FiniteWHRep, lat: &FiniteLattice, c: &WHCoefficients) -> Result<ComplexMatrix> {
    lat.check_rep(rep)?;
    if c.values.len() != lat.len() {
        return Err(Error::DimensionMismatch {
            expected: lat.len(),
            got: c.values.len(),
        });
    }
    let n = rep.n;
    let mut out = ComplexMatrix::zeros(n, n);
    for (&(k, l), &cv) in lat.points.iter().zip(&c.values) {
        if cv == Complex64::new(0.0, 0.0) {
            continue;
        }
        for t in 0..n {
            out[(t, (t + n - k) % n)] += cv * rep.omega_pow((l * t) as i64);
        }
    }
    Ok(out)
}

/// Twisted conjugation `ϑ(γ)c`.
///
/// In an abelian group `γ⁻¹γ'γ = γ'`, so the action is a pointwise phase
/// `(ϑ(γ)c)_{γ'} = conj(σ(γ⁻¹, γ')) σ(γ', γ⁻¹) c_{γ'}`.
pub fn twisted_conjugation(
    rep: &FiniteWHRep,
    lat: &FiniteLattice,
    gamma: (usize, usize),
    c: &WHCoefficients,
) -> Result<WHCoefficients> {
    lat.check_rep(rep)?;
    if !lat.contains(gamma) {
        return Err(Error::GammaNotInLattice(gamma.0, gamma.1));
    }
    if c.values.len() != lat.len() {
        return Err(Error::DimensionMismatch {
            expected: lat.len(),
            got: c.values.len(),
        });
    }
    let n = rep.n;
    let inv = ((n - gamma.0) % n, (n - gamma.1) % n);
    let values = lat
        .points
        .iter()
        .zip(&c.values)
        .map(|(&p, &cv)| rep.cocycle(inv, p).conj() * rep.cocycle(p, inv) * cv)
        .collect();
    Ok(WHCoefficients { values })
}

/// `max |π(γ)π(c)π(γ)* − π(ϑ(γ)c)|` with explicit matrices.
pub fn verify_conjugation(
    rep: &FiniteWHRep,
    lat: &FiniteLattice,
    gamma: (usize, usize),
    c: &WHCoefficients,
) -> Result<f64> {
    let twisted = twisted_conjugation(rep, lat, gamma, c)?;
    let pg = wh_matrix(rep, gamma.0 as i64, gamma.1 as i64);
    let lhs = pg
        .matmul(&coefficient_operator(rep, lat, c)?)?
        .matmul(&pg.adjoint())?;
    let rhs = coefficient_operator(rep, lat, &twisted)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// Unique coefficients over the full lattice with `Σ c_{kl} π(k,l) = T`,
/// from Hilbert–Schmidt orthogonality `⟨π(k,l), π(k',l')⟩_HS = N δ`.
pub fn expand_operator(rep: &FiniteWHRep, t: &ComplexMatrix) -> Result<WHCoefficients> {
    let n = rep.n;
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if t.rows() != n { t.rows() } else { t.cols() },
        });
    }
    let lat = FiniteLattice::full(rep);
    // ⟨T, π(k,l)⟩_HS = tr(π(k,l)* T) = Σ_t conj(ω^{lt}) T[t, t-k]
    let values = lat
        .points
        .iter()
        .map(|&(k, l)| {
            let s: Complex64 = (0..n)
                .map(|row| rep.omega_pow((l * row) as i64).conj() * t[(row, (row + n - k) % n)])
                .sum();
            s / n as f64
        })
        .collect();
    Ok(WHCoefficients { values })
}

/// `ab/N`, the finite stand-in for `vol(G/Γ)·d_π`.
pub fn finite_density_invariant(rep: &FiniteWHRep, lat: &FiniteLattice) -> Ratio<i64> {
    Ratio::new((lat.a * lat.b) as i64, rep.n as i64)
}

/// Summary emitted by the `finite-wh` command.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteWHReport {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub invariant: String,
    pub frame_bounds: SpectralReport,
    pub riesz_bounds: SpectralReport,
    pub parseval: bool,
    pub onb: bool,
}

/// Frame/Riesz summary for one `(N, a, b, g)`.
pub fn report(rep: &FiniteWHRep, lat: &FiniteLattice, g: &[Complex64], tol: f64) -> Result<FiniteWHReport> {
    let system = wh_system(rep, lat, g)?;
    let fb = frame::frame_bounds(&system, tol)?;
    let rb = frame::riesz_bounds(&system, tol)?;
    let eps = tol.max(1e-12).sqrt() * 1e-3;
    let near_one = |v: f64| (v - 1.0).abs() < eps;
    let parseval = fb.eigenvalues.iter().all(|&v| near_one(v)) && fb.rank == rep.n;
    let onb = parseval && rb.eigenvalues.iter().all(|&v| near_one(v));
    let inv = finite_density_invariant(rep, lat);
    Ok(FiniteWHReport {
        n: rep.n,
        a: lat.a,
        b: lat.b,
        invariant: format_ratio(&inv),
        frame_bounds: fb,
        riesz_bounds: rb,
        parseval,
        onb,
    })
}

pub(crate) fn format_ratio(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
