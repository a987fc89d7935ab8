//! Lattices `Aℤ²` in the time-frequency plane.

use serde::Serialize;

use crate::density::{Covolume, SymplecticLattice};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneLattice {
    basis: [[f64; 2]; 2],
    exact: Option<SymplecticLattice>,
    covolume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint {
    pub index: (i64, i64),
    pub x: f64,
    pub xi: f64,
}

impl PlaneLattice {
    pub fn from_basis(basis: [[f64; 2]; 2]) -> Result<Self> {
        let flat = vec![basis[0][0], basis[0][1], basis[1][0], basis[1][1]];
        let inner = SymplecticLattice::from_f64(2, flat)?;
        Self::from_symplectic(inner)
    }

    pub fn from_symplectic(lattice: SymplecticLattice) -> Result<Self> {
        if lattice.dim() != 2 {
            return Err(Error::InvalidLattice(format!(
                "time-frequency plane lattices are 2x2, got {}x{}",
                lattice.dim(),
                lattice.dim()
            )));
        }
        let basis = [
            [lattice.entry_f64(0, 0), lattice.entry_f64(0, 1)],
            [lattice.entry_f64(1, 0), lattice.entry_f64(1, 1)],
        ];
        let covolume = lattice.covolume()?.to_f64();
        let exact = lattice.is_exact().then_some(lattice);
        Ok(Self { basis, exact, covolume })
    }

    /// `αℤ × βℤ`.
    pub fn separable(alpha: f64, beta: f64) -> Result<Self> {
        Self::from_basis([[alpha, 0.0], [0.0, beta]])
    }

    /// `"a,b;c,d"`, with exact entries where they parse.
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_symplectic(SymplecticLattice::parse(s)?)
    }

    pub fn basis(&self) -> [[f64; 2]; 2] {
        self.basis
    }

    pub fn exact(&self) -> Option<&SymplecticLattice> {
        self.exact.as_ref()
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn exact_covolume(&self) -> Option<Covolume> {
        self.exact.as_ref().and_then(|l| l.covolume().ok())
    }

    /// `(α, β)` when the basis is diagonal.
    pub fn separable_params(&self) -> Option<(f64, f64)> {
        let [[a, b], [c, d]] = self.basis;
        (b == 0.0 && c == 0.0).then_some((a.abs(), d.abs()))
    }

    pub fn point(&self, m: i64, n: i64) -> LatticePoint {
        let [[a, b], [c, d]] = self.basis;
        LatticePoint {
            index: (m, n),
            x: a * m as f64 + b * n as f64,
            xi: c * m as f64 + d * n as f64,
        }
    }

    /// Points `Aν` for `‖ν‖_∞ ≤ radius`, `ν` in row-major order.
    pub fn points(&self, radius: usize) -> Vec<LatticePoint> {
        let r = radius as i64;
        let mut out = Vec::with_capacity((2 * radius + 1).pow(2));
        for m in -r..=r {
            for n in -r..=r {
                out.push(self.point(m, n));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_and_shear() {
        let l = PlaneLattice::parse("2,0;0,1/2").unwrap();
        assert_eq!(l.separable_params(), Some((2.0, 0.5)));
        assert_eq!(l.covolume(), 1.0);
        let s = PlaneLattice::parse("1,1;0,1").unwrap();
        assert_eq!(s.separable_params(), None);
        assert_eq!(s.points(1).len(), 9);
        assert_eq!(s.point(0, 1).x, 1.0);
        assert!(PlaneLattice::separable(1.0, 0.0).is_err());
    }
}
