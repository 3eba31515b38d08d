//! Static dipole polarizability from the sum over states.

use super::{ChannelState, ProcessError};
use crate::atoms::matrix_elements::dipole_charge;
use crate::atoms::model::AtomModel;
use crate::atoms::states::{pseudo_spectrum, PseudoSpectrum, SolverParams};
use crate::numerics::angular::{direction_element, VecComp};

/// Polarizability along z with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct Polarizability {
    /// alpha = 2 Σ_b |<a|d_z|b>|^2 / (eps_b - eps_a).
    pub value: f64,
    /// (excitation energy, contribution) per intermediate state, in
    /// channel-then-energy order.
    pub contributions: Vec<(f64, f64)>,
    /// Share of |value| carried by the top decade of excitation energies.
    pub top_decade_share: f64,
}

/// Sum-over-states polarizability of channel state `a` over the full
/// pseudo-spectrum. Errs with `BasisTooSmall` when the highest-energy decade
/// still contributes more than `tolerance` of the total.
pub fn polarizability(
    ps: &PseudoSpectrum,
    a: &ChannelState,
    tolerance: f64,
) -> Result<Polarizability, ProcessError> {
    let e_a = ps.channels[a.l as usize].energies[a.k];
    let de = dipole_charge(&ps.model);
    let mut contributions = Vec::new();
    let mut value = 0.0;
    for lb in 0..ps.channels.len() as u32 {
        if a.l.abs_diff(lb) != 1 {
            continue;
        }
        let az = direction_element(VecComp::Z, lb, a.m, a.l, a.m).norm_sqr();
        if az == 0.0 {
            continue;
        }
        let ch = &ps.channels[lb as usize];
        for kb in 0..ch.energies.len() {
            let gap = ch.energies[kb] - e_a;
            let rad = ps.radial_integral((lb, kb), (a.l, a.k), |r| r);
            let term = 2.0 * (de * rad).powi(2) * az / gap;
            contributions.push((gap, term));
            value += term;
        }
    }
    let max_gap = contributions.iter().map(|&(g, _)| g).fold(0.0f64, f64::max);
    let top: f64 = contributions
        .iter()
        .filter(|&&(g, _)| g > max_gap / 10.0)
        .map(|&(_, t)| t)
        .sum();
    let top_decade_share = (top / value).abs();
    if top_decade_share > tolerance {
        return Err(ProcessError::BasisTooSmall {
            context: format!(
                "polarizability of l={} k={}: grid spectrum stops too early",
                a.l, a.k
            ),
            share: top_decade_share,
            tolerance,
        });
    }
    Ok(Polarizability { value, contributions, top_decade_share })
}

/// Polarizability truncated to discrete levels n <= n_max: the cumulative
/// sum approaches (but never reaches) the full value, since the continuum
/// carries a fixed share.
pub fn polarizability_discrete(
    model: &AtomModel,
    n_max: u32,
) -> Result<Vec<(u32, f64)>, ProcessError> {
    use crate::atoms::states::{solve_hydrogenic, SolveMode};
    if n_max < 2 {
        return Err(ProcessError::InvalidMode("need n_max >= 2 for any p levels".into()));
    }
    let params = SolverParams { r_max: 60.0 * n_max as f64 * n_max as f64 / 4.0, ..SolverParams::default() };
    let sol = solve_hydrogenic(model, n_max, 1, SolveMode::Analytic, &params)
        .map_err(ProcessError::Atoms)?;
    let g = sol.state(1, 0, 0).unwrap();
    let de = dipole_charge(model);
    let az = direction_element(VecComp::Z, 1, 0, 0, 0).norm_sqr();
    let mut out = Vec::new();
    let mut acc = 0.0;
    for n in 2..=n_max {
        let p = sol.state(n, 1, 0).unwrap();
        let rad = g.radial_integral(p, |r| r);
        acc += 2.0 * (de * rad).powi(2) * az / (p.energy - g.energy);
        out.push((n, acc));
    }
    Ok(out)
}

/// Default pseudo-spectrum used by polarizability and scattering runs.
pub fn default_spectrum(model: &AtomModel) -> PseudoSpectrum {
    pseudo_spectrum(model, 1, &SolverParams::pseudo_default())
}
