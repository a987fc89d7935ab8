//! Exact density engine: scalars over ℚ(θ), lattices, Kleppner's
//! condition and the trichotomy classifier.

pub mod exact;
pub mod hnf;
pub mod lattice;
pub mod verdict;

pub use exact::{ExactScalar, Theta};
pub use lattice::{Covolume, KleppnerResult, KleppnerStatus, SymplecticLattice};
pub use verdict::{
    bergman_formal_dimension, classify, heisenberg_formal_dimension, Claim, ContextFlags, FormalDimension, Invariant,
    Verdict,
};
