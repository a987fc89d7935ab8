//! Heisenberg phase law and the Gaussian ambiguity function.
//!
//! With `π(x, ξ) = M_ξ T_x`,
//! `π(z) π(z') = e^{-2πi ξ' x} π(z + z')`, i.e. `π(z + z')` equals
//! `e^{2πi ξ' x} π(z) π(z')`. For example `z = (1, 0)`, `z' = (0, 1/4)`:
//! `π(z)π(z') = e^{-πi/2} π(1, 1/4) = -i·π(1, 1/4)`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Factor `c` in `π(z) π(z') = c · π(z + z')`.
pub fn heisenberg_cocycle(z: (f64, f64), zp: (f64, f64)) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * zp.1 * z.0)
}

/// `⟨g, π(x, ξ) g⟩ = e^{-πixξ} e^{-π(x² + ξ²)/2}` for the unit-norm
/// Gaussian.
pub fn gaussian_ambiguity((x, xi): (f64, f64)) -> Complex64 {
    Complex64::from_polar((-PI * (x * x + xi * xi) / 2.0).exp(), -PI * x * xi)
}

/// `⟨π(a) g, π(b) g⟩` for the Gaussian, from the closed form.
pub fn gaussian_shifted_inner(a: (f64, f64), b: (f64, f64)) -> Complex64 {
    let d = (a.0 - b.0, a.1 - b.1);
    Complex64::from_polar(1.0, 2.0 * PI * d.1 * b.0) * gaussian_ambiguity(d).conj()
}
