//! Density trichotomy classification for lattice orbits of discrete series
//! representations, with exact and numerical checks of the frame-theoretic
//! machinery on three models: finite Weyl–Heisenberg systems, Gabor systems
//! on the line, and weighted Bergman spaces with Fuchsian orbits.

pub mod error;
pub mod frame;
pub mod linalg;
pub mod rng;
pub mod finite_wh;
pub mod quadrature;
pub mod density;
pub mod gabor;
pub mod bergman;
pub mod cli;

pub use error::{Error, Result};
pub use frame::FrameSystem;
pub use linalg::{ComplexMatrix, SpectralReport};
