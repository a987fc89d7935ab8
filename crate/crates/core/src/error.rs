use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into two families that the CLI maps to different exit
/// codes: input/contract violations (exit 2) and numerical failures (exit 3).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("system is not a frame for the ambient space (rank {rank} of {dim}, lower bound {lower:.3e})")]
    NotAFrame { rank: usize, dim: usize, lower: f64 },

    #[error("system is not a Riesz sequence (smallest Gram eigenvalue {lower:.3e})")]
    NotRiesz { lower: f64 },

    #[error("lattice point ({0}, {1}) is not in the lattice")]
    GammaNotInLattice(usize, usize),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("shift ({0}) does not land on the sampling grid")]
    OffGridShift(f64),

    #[error("invalid density {0}: must be a positive rational p/q")]
    InvalidDensity(String),

    #[error("quadrature failed to reach tolerance {tol:.1e} (estimated error {err:.3e})")]
    QuadratureFailure { tol: f64, err: f64 },

    #[error("weight alpha = {0} is out of range (alpha > 1 required)")]
    AlphaOutOfRange(f64),

    #[error("basis is singular")]
    SingularBasis,

    #[error("unsupported field operation: {0}")]
    UnsupportedField(String),

    #[error("invalid invariant: {0}")]
    InvalidInvariant(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-finite value in input")]
    NonFinite,
}

impl Error {
    /// True when the error stems from a numerical procedure rather than
    /// from invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::QuadratureFailure { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
