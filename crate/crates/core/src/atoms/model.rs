//! Two-species composite model: masses, charges, derived scales.

use crate::constants::PROTON_ELECTRON_MASS_RATIO;
use serde::Serialize;

/// Interaction between the two constituents. Only the Coulomb form is
/// supported; the enum exists so reports can name it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialKind {
    Coulomb,
}

/// Masses and charges of the two constituent species, in atomic units.
/// Species 1 is the light one by convention (electron-like), species 2 the
/// heavy one (nucleus-like). `m2 = f64::INFINITY` is a valid static-core
/// limit: the reduced mass becomes m1 and every recoil weight involving
/// 1/M vanishes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AtomModel {
    pub m1: f64,
    pub m2: f64,
    pub e1: f64,
    pub e2: f64,
    /// m1 + m2.
    pub total_mass: f64,
    /// m1 m2 / (m1 + m2).
    pub reduced_mass: f64,
    pub potential: PotentialKind,
}

impl AtomModel {
    pub fn new(m1: f64, m2: f64, e1: f64, e2: f64) -> Self {
        assert!(m1 > 0.0 && m2 > 0.0, "masses must be positive");
        let (total_mass, reduced_mass) = if m2.is_infinite() {
            (f64::INFINITY, m1)
        } else {
            (m1 + m2, m1 * m2 / (m1 + m2))
        };
        AtomModel { m1, m2, e1, e2, total_mass, reduced_mass, potential: PotentialKind::Coulomb }
    }

    /// Hydrogen with the physical proton/electron mass ratio.
    pub fn hydrogen() -> Self {
        AtomModel::new(1.0, PROTON_ELECTRON_MASS_RATIO, 1.0, -1.0)
    }

    /// Hydrogen-like atom with a fixed (infinitely heavy) core; reduced
    /// mass exactly 1.
    pub fn fixed_core() -> Self {
        AtomModel::new(1.0, f64::INFINITY, 1.0, -1.0)
    }

    /// Reduced mass recomputed from the stored masses; equality with the
    /// stored field is a consistency invariant.
    pub fn recompute_reduced_mass(&self) -> f64 {
        if self.m2.is_infinite() {
            self.m1
        } else {
            self.m1 * self.m2 / (self.m1 + self.m2)
        }
    }

    /// e1 + e2 == 0. Charge-form-factor zeros and the dipole-form results
    /// rely on this.
    pub fn is_neutral(&self) -> bool {
        self.e1 + self.e2 == 0.0
    }

    /// |e1 e2|, the effective Coulomb strength; binding requires e1 e2 < 0.
    pub fn coulomb_strength(&self) -> f64 {
        (self.e1 * self.e2).abs()
    }

    pub fn binds(&self) -> bool {
        self.e1 * self.e2 < 0.0
    }

    /// m2 / M: weight of the species-1 coordinate relative to the center of
    /// mass. 1 in the fixed-core limit.
    pub fn weight1(&self) -> f64 {
        if self.m2.is_infinite() {
            1.0
        } else {
            self.m2 / self.total_mass
        }
    }

    /// m1 / M. 0 in the fixed-core limit.
    pub fn weight2(&self) -> f64 {
        if self.m2.is_infinite() {
            0.0
        } else {
            self.m1 / self.total_mass
        }
    }

    /// 1/M; 0 in the fixed-core limit. Recoil terms multiply this.
    pub fn inverse_total_mass(&self) -> f64 {
        if self.total_mass.is_infinite() {
            0.0
        } else {
            1.0 / self.total_mass
        }
    }

    /// Bound-level energy -mu (e1 e2)^2 / (2 n^2).
    pub fn level_energy(&self, n: u32) -> f64 {
        let z = self.e1 * self.e2;
        -self.reduced_mass * z * z / (2.0 * (n as f64) * (n as f64))
    }
}
