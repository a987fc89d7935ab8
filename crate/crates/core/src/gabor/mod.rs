//! Gabor systems on `L²(ℝ)`.

pub mod ambiguity;
pub mod gram;
pub mod lattice;
pub mod periodized;
pub mod window;
pub mod zak;

pub use ambiguity::{gaussian_ambiguity, gaussian_shifted_inner, heisenberg_cocycle};
pub use gram::{gabor_gram, truncated_gram_bounds, BoundsMethod, GaborBoundsReport, GaborGram};
pub use lattice::{LatticePoint, PlaneLattice};
pub use periodized::{periodized_ortho_check, sandwich_check, SandwichResult};
pub use window::{tf_shift, SampledWindow, Window};
pub use zak::{zz_frame_bounds, zz_frame_bounds_separable};
