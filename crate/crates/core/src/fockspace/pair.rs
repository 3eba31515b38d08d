//! Two-body relative problem on the ring. At zero total momentum the pair
//! Hamiltonian separates exactly: the relative amplitude obeys a one-body
//! ring problem with the reduced mass, and its bound states supply the
//! internal wavefunctions of the composites.

use nalgebra::{DMatrix, SymmetricEigen};

use super::lattice::LatticeConfig;
use super::FockError;

/// One bound level of the relative problem.
#[derive(Clone, Debug)]
pub struct PairState {
    /// Binding energy, below the zero of the free band.
    pub energy: f64,
    /// Relative amplitude phi(y) indexed by displacement y = 0..L-1.
    pub amplitudes: Vec<f64>,
}

impl PairState {
    /// Ring mass radius: smallest ring distance r with at least `fraction`
    /// of the probability inside |y| <= r.
    pub fn mass_radius(&self, l: usize, fraction: f64) -> usize {
        for r in 0..=(l / 2) {
            let inside: f64 = (0..l)
                .filter(|&y| y.min(l - y) <= r)
                .map(|y| self.amplitudes[y] * self.amplitudes[y])
                .sum();
            if inside >= fraction {
                return r;
            }
        }
        l / 2
    }
}

/// Bound states of the relative problem, energies ascending.
#[derive(Clone, Debug)]
pub struct PairSpectrum {
    pub states: Vec<PairState>,
    /// 99.9% mass radius of the deepest bound state, in lattice units.
    pub overlap_radius: f64,
}

impl PairSpectrum {
    /// <phi_a | f(y) | phi_b> over the ring, f given the displacement.
    pub fn relative_element(&self, a: usize, b: usize, f: impl Fn(usize) -> f64) -> f64 {
        let pa = &self.states[a].amplitudes;
        let pb = &self.states[b].amplitudes;
        (0..pa.len()).map(|y| pa[y] * pb[y] * f(y)).sum()
    }
}

/// Solve the relative problem for `config` and keep the bound states
/// (energies strictly below the free-band floor at zero).
pub fn solve_pair_problem(config: &LatticeConfig) -> Result<PairSpectrum, FockError> {
    let l = config.sites;
    if l < 2 {
        return Err(FockError::InvalidRequest("pair problem needs at least 2 sites".into()));
    }
    let mu = config.reduced_mass();
    let t = 1.0 / (2.0 * mu);
    let mut h = DMatrix::<f64>::zeros(l, l);
    for y in 0..l {
        h[(y, y)] = 2.0 * t + config.potential.between(1, 2, y.min(l - y));
        let up = (y + 1) % l;
        h[(y, up)] -= t;
        h[(up, y)] -= t;
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut states = Vec::new();
    for &idx in &order {
        let energy = eig.eigenvalues[idx];
        if energy >= -1e-12 {
            break;
        }
        let mut amplitudes: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        // Fix the overall sign at the largest amplitude for determinism.
        let peak = (0..l).max_by(|&a, &b| amplitudes[a].abs().total_cmp(&amplitudes[b].abs()));
        if let Some(p) = peak {
            if amplitudes[p] < 0.0 {
                for a in amplitudes.iter_mut() {
                    *a = -*a;
                }
            }
        }
        states.push(PairState { energy, amplitudes });
    }
    if states.is_empty() {
        return Err(FockError::NoBoundState);
    }
    let overlap_radius = states[0].mass_radius(l, 0.999) as f64;
    Ok(PairSpectrum { states, overlap_radius })
}
