//! Bound states and pseudo-spectra of the two-body problem.

use std::sync::Arc;

use super::analytic;
use super::model::AtomModel;
use super::radial::{channel_matrix, count_nodes, eigvec_to_u, fix_sign, log_grid_derivative};
use super::AtomsError;
use crate::numerics::grid::RadialGrid;

/// How radial functions are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Closed-form hydrogen-like functions sampled on the grid.
    Analytic,
    /// Eigenvectors of the discretized radial Hamiltonian.
    Grid,
}

/// Radial grid and tolerance configuration.
#[derive(Clone, Debug)]
pub struct SolverParams {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    /// Relative deviation of grid energies from the closed form above which
    /// the solve reports GridTooCoarse.
    pub energy_tolerance: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { r_min: 1e-5, r_max: 200.0, n_points: 4000, energy_tolerance: 1e-4 }
    }
}

impl SolverParams {
    /// Smaller grid tuned for full-spectrum (pseudo-continuum) work, where
    /// every eigenpair of the channel matrix is needed.
    pub fn pseudo_default() -> Self {
        SolverParams { r_min: 1e-4, r_max: 70.0, n_points: 1100, energy_tolerance: 5e-3 }
    }
}

/// One bound level. `u` and `du` are u(r) = r R(r) and its derivative,
/// sampled on `grid`; ∫ u^2 dr = 1 in the grid inner product.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub energy: f64,
    pub mode: SolveMode,
    pub grid: Arc<RadialGrid>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

impl BoundState {
    /// Grid inner product Σ u_a u_b f(r_i) r_i h. Exact for grid-mode pairs
    /// because the underlying eigenvectors are Euclidean-orthonormal.
    pub fn radial_integral<F: Fn(f64) -> f64>(&self, other: &BoundState, f: F) -> f64 {
        assert!(Arc::ptr_eq(&self.grid, &other.grid) || self.grid.r == other.grid.r,
            "states live on different grids");
        let h = self.grid.h;
        self.u
            .iter()
            .zip(&other.u)
            .zip(&self.grid.r)
            .map(|((&ua, &ub), &r)| ua * ub * f(r) * r * h)
            .sum()
    }

    /// Norm in the grid inner product; 1 within 1e-10 by construction.
    pub fn norm(&self) -> f64 {
        self.radial_integral(self, |_| 1.0).sqrt()
    }

    /// Number of radial nodes; equals n - l - 1.
    pub fn nodes(&self) -> usize {
        count_nodes(&self.u)
    }

    /// Radius containing `fraction` of the probability mass (bound-state
    /// size r0; the long-wavelength conditions compare |k| r0 to 1).
    pub fn mass_radius(&self, fraction: f64) -> f64 {
        let h = self.grid.h;
        let mut acc = 0.0;
        for (i, &r) in self.grid.r.iter().enumerate() {
            acc += self.u[i] * self.u[i] * r * h;
            if acc >= fraction {
                return r;
            }
        }
        *self.grid.r.last().unwrap()
    }

    /// Spectroscopic label like "2p" (m suppressed).
    pub fn label(&self) -> String {
        format!("{}{}", self.n, l_letter(self.l))
    }
}

pub fn l_letter(l: u32) -> char {
    const LETTERS: [char; 8] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k'];
    LETTERS.get(l as usize).copied().unwrap_or('?')
}

/// Parse "2p" or "10d" into (n, l).
pub fn parse_label(label: &str) -> Option<(u32, u32)> {
    let split = label.find(|c: char| c.is_ascii_alphabetic())?;
    let n: u32 = label[..split].parse().ok()?;
    let letter = label[split..].chars().next()?;
    let l = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k']
        .iter()
        .position(|&c| c == letter.to_ascii_lowercase())? as u32;
    if label[split..].chars().count() != 1 || l >= n {
        return None;
    }
    Some((n, l))
}

/// Full set of levels up to n_max, l_max, all m.
#[derive(Clone, Debug)]
pub struct HydrogenicSolution {
    pub model: AtomModel,
    pub mode: SolveMode,
    pub grid: Arc<RadialGrid>,
    pub states: Vec<BoundState>,
}

impl HydrogenicSolution {
    pub fn state(&self, n: u32, l: u32, m: i32) -> Option<&BoundState> {
        self.states.iter().find(|s| s.n == n && s.l == l && s.m == m)
    }

    pub fn state_labeled(&self, label: &str, m: i32) -> Option<&BoundState> {
        let (n, l) = parse_label(label)?;
        self.state(n, l, m)
    }
}

/// Solve the bound problem for all n <= n_max, l <= min(l_max, n-1).
///
/// In `Grid` mode every returned energy is checked against the closed form,
/// and `GridTooCoarse` is reported if any relative deviation exceeds
/// `params.energy_tolerance`.
pub fn solve_hydrogenic(
    model: &AtomModel,
    n_max: u32,
    l_max: u32,
    mode: SolveMode,
    params: &SolverParams,
) -> Result<HydrogenicSolution, AtomsError> {
    if n_max < 1 {
        return Err(AtomsError::InvalidRequest("n_max must be >= 1".into()));
    }
    if l_max >= n_max {
        return Err(AtomsError::InvalidRequest(format!(
            "l_max = {l_max} must be < n_max = {n_max}"
        )));
    }
    if !model.binds() {
        return Err(AtomsError::InvalidModel(
            "constituent charges do not attract; no bound states exist".into(),
        ));
    }
    let grid = Arc::new(RadialGrid::new(params.r_min, params.r_max, params.n_points));
    let mut states = Vec::new();
    for l in 0..=l_max {
        // Radial solutions per l channel; k-th has n = l + 1 + k.
        let radials: Vec<(u32, f64, Vec<f64>, Vec<f64>)> = match mode {
            SolveMode::Analytic => (l + 1..=n_max)
                .map(|n| {
                    let u: Vec<f64> =
                        grid.r.iter().map(|&r| analytic::radial_u(model, n, l, r)).collect();
                    let du: Vec<f64> =
                        grid.r.iter().map(|&r| analytic::radial_u_deriv(model, n, l, r)).collect();
                    (n, model.level_energy(n), u, du)
                })
                .collect(),
            SolveMode::Grid => {
                let t = channel_matrix(model, l, &grid);
                let count = (n_max - l) as usize;
                let (vals, vecs) = t.eigenpairs_range(0, count);
                vals.iter()
                    .zip(vecs)
                    .enumerate()
                    .map(|(k, (&e, v))| {
                        let n = l + 1 + k as u32;
                        let exact = model.level_energy(n);
                        let dev = ((e - exact) / exact).abs();
                        if dev > params.energy_tolerance {
                            return Err(AtomsError::GridTooCoarse {
                                label: format!("{}{}", n, l_letter(l)),
                                deviation: dev,
                                tolerance: params.energy_tolerance,
                            });
                        }
                        let mut u = eigvec_to_u(&grid, &v);
                        fix_sign(&mut u);
                        let du = log_grid_derivative(&grid, &u);
                        Ok((n, e, u, du))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        for (n, energy, u, du) in radials {
            for m in -(l as i32)..=(l as i32) {
                states.push(BoundState {
                    n,
                    l,
                    m,
                    energy,
                    mode,
                    grid: Arc::clone(&grid),
                    u: u.clone(),
                    du: du.clone(),
                });
            }
        }
    }
    states.sort_by(|a, b| {
        (a.n, a.l, a.m).partial_cmp(&(b.n, b.l, b.m)).unwrap()
    });
    Ok(HydrogenicSolution { model: *model, mode, grid, states })
}

/// One angular channel of the discrete spectrum: all eigenpairs of the
/// channel matrix, bound and box-discretized continuum together.
#[derive(Clone, Debug)]
pub struct PseudoChannel {
    pub l: u32,
    pub energies: Vec<f64>,
    /// u(r) samples, one per eigenpair, sign-fixed.
    pub radials: Vec<Vec<f64>>,
}

/// Complete per-l pseudo-spectra. Sums over these states realize closure
/// identities (oscillator-strength and polarizability sums) on the grid.
#[derive(Clone, Debug)]
pub struct PseudoSpectrum {
    pub model: AtomModel,
    pub grid: Arc<RadialGrid>,
    pub channels: Vec<PseudoChannel>,
}

impl PseudoSpectrum {
    pub fn channel(&self, l: u32) -> &PseudoChannel {
        &self.channels[l as usize]
    }

    /// Grid inner product between two channel states with a local weight.
    pub fn radial_integral<F: Fn(f64) -> f64>(
        &self,
        (la, ka): (u32, usize),
        (lb, kb): (u32, usize),
        f: F,
    ) -> f64 {
        let ua = &self.channels[la as usize].radials[ka];
        let ub = &self.channels[lb as usize].radials[kb];
        let h = self.grid.h;
        ua.iter()
            .zip(ub)
            .zip(&self.grid.r)
            .map(|((&x, &y), &r)| x * y * f(r) * r * h)
            .sum()
    }
}

/// Diagonalize every channel l <= l_max completely.
pub fn pseudo_spectrum(
    model: &AtomModel,
    l_max: u32,
    params: &SolverParams,
) -> PseudoSpectrum {
    let grid = Arc::new(RadialGrid::new(params.r_min, params.r_max, params.n_points));
    let channels: Vec<PseudoChannel> = (0..=l_max)
        .map(|l| {
            let t = channel_matrix(model, l, &grid);
            let (energies, vecs) = t.eigenpairs_all();
            let radials: Vec<Vec<f64>> = vecs
                .into_iter()
                .map(|v| {
                    let mut u = eigvec_to_u(&grid, &v);
                    fix_sign(&mut u);
                    u
                })
                .collect();
            PseudoChannel { l, energies, radials }
        })
        .collect();
    PseudoSpectrum { model: *model, grid, channels }
}
