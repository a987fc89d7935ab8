//! Weighted Bergman spaces on the upper half-plane and Fuchsian orbits.

pub mod classify;
pub mod group;
pub mod kernel;
pub mod moebius;

pub use classify::{bergman_classification, DEFAULT_STABILIZER_RADIUS, BergmanVerdict, KernelVerdict, Tri};
pub use group::{modular_covolume, modular_covolume_half, orbit_ball, stabilizer_order, FuchsianGroup, GroupCovolume, OrbitPoint};
pub use kernel::{
    bergman_inner, kernel_eval, kernel_inner_closed, kernel_inner_quadrature, kernel_orbit_gram, laguerre_window,
    normalized_kernel_gram, BergmanKernelSpec, GramEntries, HalfPlaneMap, KernelGram,
};
pub use moebius::{hyperbolic_distance, j_cocycle, moebius_apply, MoebiusMap, UHPoint};
