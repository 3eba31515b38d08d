//! Lattice geometry and the two-species pair potential.

use serde::Serialize;

/// Species-resolved short-range potentials on the ring. Each entry maps a
/// separation to an energy; `v12` is the interspecies channel that binds.
#[derive(Clone, Debug, Serialize)]
pub struct PairPotential {
    /// Intraspecies potential for species 1 by separation |x - x'|.
    pub v11: Vec<f64>,
    /// Interspecies potential by separation.
    pub v12: Vec<f64>,
    /// Intraspecies potential for species 2 by separation.
    pub v22: Vec<f64>,
}

impl PairPotential {
    /// Attractive interspecies square well of the given depth and radius,
    /// with the intraspecies channels switched off.
    pub fn square_well(depth: f64, radius: usize) -> Self {
        PairPotential {
            v11: Vec::new(),
            v12: vec![-depth.abs(); radius + 1],
            v22: Vec::new(),
        }
    }

    /// Attractive interspecies well plus equal intraspecies repulsion, used
    /// to exercise every channel of the interaction.
    pub fn square_well_with_repulsion(depth: f64, radius: usize, repulsion: f64) -> Self {
        PairPotential {
            v11: vec![repulsion.abs(); radius + 1],
            v12: vec![-depth.abs(); radius + 1],
            v22: vec![repulsion.abs(); radius + 1],
        }
    }

    fn channel(table: &[f64], distance: usize) -> f64 {
        table.get(distance).copied().unwrap_or(0.0)
    }

    /// Potential between species `i` and `j` (1-based) at ring distance.
    pub fn between(&self, i: u8, j: u8, distance: usize) -> f64 {
        match (i, j) {
            (1, 1) => Self::channel(&self.v11, distance),
            (2, 2) => Self::channel(&self.v22, distance),
            (1, 2) | (2, 1) => Self::channel(&self.v12, distance),
            _ => panic!("species index out of range: ({i}, {j})"),
        }
    }

    /// Largest separation at which any channel is nonzero.
    pub fn range(&self) -> usize {
        [&self.v11, &self.v12, &self.v22]
            .iter()
            .map(|t| t.iter().rposition(|&v| v != 0.0).map_or(0, |p| p))
            .max()
            .unwrap_or(0)
    }
}

/// Geometry and masses of the periodic two-species lattice.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeConfig {
    /// Number of sites on the ring.
    pub sites: usize,
    /// Lattice spacing (sets the unit of length).
    pub spacing: f64,
    /// Mass of species 1.
    pub mass1: f64,
    /// Mass of species 2.
    pub mass2: f64,
    /// Minimum center separation enforced between composite placements.
    pub separation_a: usize,
    /// Two-body potential tables.
    pub potential: PairPotential,
}

impl LatticeConfig {
    pub fn new(sites: usize, potential: PairPotential) -> Self {
        LatticeConfig {
            sites,
            spacing: 1.0,
            mass1: 1.0,
            mass2: 1.0,
            separation_a: 4,
            potential,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass1 + self.mass2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.mass1 * self.mass2 / (self.mass1 + self.mass2)
    }

    /// Ring distance between two sites.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b) % self.sites;
        d.min(self.sites - d)
    }

    /// Signed displacement from `b` to `a`, folded into (-L/2, L/2].
    pub fn displacement(&self, a: usize, b: usize) -> i64 {
        let l = self.sites as i64;
        let mut d = (a as i64 - b as i64).rem_euclid(l);
        if d > l / 2 {
            d -= l;
        }
        d
    }

    /// Fold any signed site index back onto the ring.
    pub fn wrap(&self, x: i64) -> usize {
        x.rem_euclid(self.sites as i64) as usize
    }
}
