//! Effective atom-atom potential: the second-order channel sums folded into
//! a single radial function, so that first-order perturbation theory in the
//! effective potential reproduces second order in the microscopic coupling.
//!
//! For a ground pair the first-order coupling element vanishes, so the
//! leading scattering amplitude comes from V_eff(R) = sum G+G / (2 eps_0 -
//! eps_1 - eps_2) = -C6/R^6: attractive at every separation.

use super::energies::c6_truncated;
use super::VdwError;
use crate::atoms::states::PseudoSpectrum;

/// Radial table of the effective ground-pair potential.
#[derive(Clone, Debug)]
pub struct EffectivePotential {
    pub radii: Vec<f64>,
    /// V_eff at each radius, always negative.
    pub values: Vec<f64>,
    /// The coefficient in V_eff = -c6/R^6.
    pub c6: f64,
}

impl EffectivePotential {
    /// V_eff at an arbitrary radius (not just the tabulated ones).
    pub fn at(&self, r: f64) -> f64 {
        -self.c6 / r.powi(6)
    }
}

/// Fold the dipole product channels of the ground s-channel state `alpha`
/// into the effective potential, tabulated on `radii`. The channel weights
/// do not depend on R, so the whole table carries a single coefficient and
/// V_eff(R) R^6 is constant by construction.
pub fn effective_potential(
    alpha: usize,
    basis: &PseudoSpectrum,
    radii: &[f64],
) -> Result<EffectivePotential, VdwError> {
    let s_channel = basis.channel(0);
    if alpha >= s_channel.energies.len() {
        return Err(VdwError::InvalidRequest(format!(
            "s-channel index {alpha} outside the basis of {} states",
            s_channel.energies.len()
        )));
    }
    let lowest = s_channel
        .energies
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap();
    if alpha != lowest {
        return Err(VdwError::InvalidRequest(format!(
            "effective potential is defined for the ground state; index {alpha} is excited"
        )));
    }
    if radii.is_empty() {
        return Err(VdwError::InvalidRequest("empty radius table".into()));
    }
    let minimum = 3.0 * basis.radial_integral((0, alpha), (0, alpha), |x| x);
    for &r in radii {
        if r < minimum {
            return Err(VdwError::SeparationTooSmall { separation: r, minimum });
        }
    }
    let c6 = c6_truncated(alpha, alpha, basis, usize::MAX)?;
    let values = radii.iter().map(|&r| -c6 / r.powi(6)).collect();
    Ok(EffectivePotential { radii: radii.to_vec(), values, c6 })
}
