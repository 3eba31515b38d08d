//! Photon scattering off a composite in the long-wavelength limit: the
//! two-photon contact term plus the second-order (Kramers-Heisenberg) sum
//! over intermediate states.
//!
//! The second-order numerators carry the energy-weighted dipole elements
//! i (eps_x - eps_y) d_xy, the exact matrix elements of the charge-weighted
//! velocity. The contact term is evaluated through the same spectrum as the
//! double commutator <a'|[D_i,[H,D_j]]|a>, whose continuum value is the
//! constant sum_i e_i^2/m_i. Evaluating both pieces in the one discretized
//! model keeps their low-frequency cancellation exact for neutral
//! composites, so the elastic amplitude vanishes as omega^2 and the cross
//! section follows the omega^4 Rayleigh law at any grid resolution.

use num_complex::Complex64;

use super::photon::direction_samples;
use super::{ChannelState, ProcessError};
use crate::atoms::matrix_elements::dipole_charge;
use crate::atoms::states::PseudoSpectrum;
use crate::constants::SPEED_OF_LIGHT;
use crate::numerics::angular::{direction_element, VecComp};

/// Photon energy this close to an intermediate level (in hartree) trips
/// `ResonanceHit` unless damping is requested.
pub const RESONANCE_GUARD: f64 = 1e-4;

/// Scattering amplitude split into its contact and second-order parts,
/// with the differential cross section for the chosen polarizations.
#[derive(Clone, Debug)]
pub struct ScatteringKernel {
    pub omega_in: f64,
    pub omega_out: f64,
    /// Contact (two-photon seagull) amplitude, evaluated through the
    /// spectrum's own dipole sum rule.
    pub r_prime: Complex64,
    /// Second-order sum over intermediate states.
    pub r_doubleprime: Complex64,
    /// Full amplitude r_prime + r_doubleprime.
    pub r: Complex64,
    /// dsigma/dOmega = (omega_out/omega_in) |r|^2 / c^4.
    pub differential: f64,
}

const COMPS: [VecComp; 3] = [VecComp::X, VecComp::Y, VecComp::Z];

/// Energy-weighted dipole tensors summed over intermediate channel states:
/// the second-order kernel
/// K_ij = Σ_b [P_i^{a'b} P_j^{ba}/den1(b) + P_j^{a'b} P_i^{ba}/den2(b)]
/// with P^{xy} = i (eps_x - eps_y) d^{xy}, and the sum-rule tensor
/// S_ij = Σ_b [(eps_b - eps_a) d_i^{a'b} d_j^{ba} + (eps_b - eps_a') d_j^{a'b} d_i^{ba}],
/// the spectral form of the contact term <a'|[D_i,[H,D_j]]|a>.
struct KhTensor {
    k: [[Complex64; 3]; 3],
    s: [[Complex64; 3]; 3],
}

fn channel_energy(ps: &PseudoSpectrum, s: &ChannelState) -> f64 {
    ps.channels[s.l as usize].energies[s.k]
}

/// Dipole-coupled intermediate channels shared by both legs.
fn shared_channels(ps: &PseudoSpectrum, a: &ChannelState, ap: &ChannelState) -> Vec<u32> {
    let mut out = Vec::new();
    for lb in 0..ps.channels.len() as u32 {
        let da = a.l.abs_diff(lb) == 1;
        let dap = ap.l.abs_diff(lb) == 1;
        if da && dap {
            out.push(lb);
        }
    }
    out
}

fn build_tensor(
    ps: &PseudoSpectrum,
    a: &ChannelState,
    ap: &ChannelState,
    omega_in: f64,
    omega_out: f64,
    damping: Option<f64>,
) -> Result<KhTensor, ProcessError> {
    let e_a = channel_energy(ps, a);
    let e_ap = channel_energy(ps, ap);
    let de = dipole_charge(&ps.model);
    let eps = damping.unwrap_or(0.0);
    let mut k = [[Complex64::new(0.0, 0.0); 3]; 3];
    let mut s = [[Complex64::new(0.0, 0.0); 3]; 3];
    for lb in shared_channels(ps, a, ap) {
        let ch = &ps.channels[lb as usize];
        // Radial integrals against both legs, reused across m.
        let rad_a: Vec<f64> =
            (0..ch.energies.len()).map(|kb| ps.radial_integral((lb, kb), (a.l, a.k), |r| r)).collect();
        let rad_ap: Vec<f64> =
            (0..ch.energies.len()).map(|kb| ps.radial_integral((lb, kb), (ap.l, ap.k), |r| r)).collect();
        for kb in 0..ch.energies.len() {
            let e_b = ch.energies[kb];
            let den1 = e_a - e_b + omega_in;
            let den2 = e_a - e_b - omega_out;
            if damping.is_none() {
                for (den, which) in [(den1, "absorption"), (den2, "emission")] {
                    if den.abs() < RESONANCE_GUARD {
                        return Err(ProcessError::ResonanceHit {
                            omega: omega_in,
                            label: format!("{which} pole at channel l={lb}, state {kb}"),
                            distance: den.abs(),
                        });
                    }
                }
            }
            let d1 = Complex64::new(den1, eps);
            let d2 = Complex64::new(den2, eps);
            for mb in -(lb as i32)..=(lb as i32) {
                let d_apb: Vec<Complex64> = COMPS
                    .iter()
                    .map(|&c| de * rad_ap[kb] * direction_element(c, ap.l, ap.m, lb, mb))
                    .collect();
                let d_ba: Vec<Complex64> = COMPS
                    .iter()
                    .map(|&c| de * rad_a[kb] * direction_element(c, lb, mb, a.l, a.m))
                    .collect();
                // P^{xy}_i = i (eps_x - eps_y) d^{xy}_i.
                let iw_apb = Complex64::new(0.0, e_ap - e_b);
                let iw_ba = Complex64::new(0.0, e_b - e_a);
                for i in 0..3 {
                    for j in 0..3 {
                        let p1 = iw_apb * d_apb[i] * iw_ba * d_ba[j];
                        let p2 = iw_apb * d_apb[j] * iw_ba * d_ba[i];
                        k[i][j] += p1 / d1 + p2 / d2;
                        s[i][j] += (e_b - e_a) * d_apb[i] * d_ba[j]
                            + (e_b - e_ap) * d_apb[j] * d_ba[i];
                    }
                }
            }
        }
    }
    Ok(KhTensor { k, s })
}

fn contract(
    t: &[[Complex64; 3]; 3],
    e_out: &[Complex64; 3],
    e_in: &[Complex64; 3],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += e_out[i].conj() * t[i][j] * e_in[j];
        }
    }
    acc
}

/// Scattering amplitude alpha -> alpha' for incoming frequency `omega_in`
/// and the given polarizations. The outgoing frequency follows from energy
/// conservation. `damping` shifts the intermediate poles off the real axis
/// (a regularization knob for scans near resonance, not a physical width).
pub fn photon_scattering(
    ps: &PseudoSpectrum,
    a: &ChannelState,
    ap: &ChannelState,
    omega_in: f64,
    e_in: [Complex64; 3],
    e_out: [Complex64; 3],
    damping: Option<f64>,
) -> Result<ScatteringKernel, ProcessError> {
    if omega_in <= 0.0 {
        return Err(ProcessError::InvalidMode("incoming frequency must be positive".into()));
    }
    let e_a = channel_energy(ps, a);
    let e_ap = channel_energy(ps, ap);
    let omega_out = omega_in + e_a - e_ap;
    if omega_out <= 0.0 {
        return Err(ProcessError::NotDownhill {
            from: format!("l={} k={} plus photon {omega_in}", a.l, a.k),
            to: format!("l={} k={}", ap.l, ap.k),
            e_from: e_a + omega_in,
            e_to: e_ap,
        });
    }

    let tensor = build_tensor(ps, a, ap, omega_in, omega_out, damping)?;
    let r_prime = contract(&tensor.s, &e_out, &e_in);
    let r_doubleprime = contract(&tensor.k, &e_out, &e_in);
    let r = r_prime + r_doubleprime;
    let c4 = SPEED_OF_LIGHT.powi(4);
    let differential = (omega_out / omega_in) * r.norm_sqr() / c4;
    Ok(ScatteringKernel { omega_in, omega_out, r_prime, r_doubleprime, r, differential })
}

/// Total elastic cross section from state `a` at frequency `omega`:
/// incoming along z polarized along x, integrated over outgoing directions
/// and summed over outgoing polarizations.
pub fn rayleigh_cross_section(
    ps: &PseudoSpectrum,
    a: &ChannelState,
    omega: f64,
    damping: Option<f64>,
) -> Result<f64, ProcessError> {
    let tensor = build_tensor(ps, a, a, omega, omega, damping)?;
    let e_in = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    let c4 = SPEED_OF_LIGHT.powi(4);
    let mut sigma = 0.0;
    for s in direction_samples(8, 16) {
        for e in [&s.e_theta, &s.e_phi] {
            let e_out =
                [Complex64::new(e[0], 0.0), Complex64::new(e[1], 0.0), Complex64::new(e[2], 0.0)];
            let r = contract(&tensor.s, &e_out, &e_in) + contract(&tensor.k, &e_out, &e_in);
            sigma += s.weight * r.norm_sqr() / c4;
        }
    }
    Ok(sigma)
}
