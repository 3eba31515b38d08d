//! Spontaneous one-photon emission rates between bound states.
//!
//! The default route is the dipole (length) form, whose selection rules are
//! exact: a forbidden line gives a bitwise zero rate. The full-current route
//! evaluates the transverse current form factor at the physical photon
//! momentum and serves as the independent cross-check; the two agree to the
//! retardation scale (k x size)^2.

use num_complex::Complex64;

use super::photon::{direction_samples, DirectionSample};
use super::ProcessError;
use crate::atoms::matrix_elements::dipole_matrix;
use crate::atoms::model::AtomModel;
use crate::atoms::states::BoundState;
use crate::constants::{SPEED_OF_LIGHT, TIME_AU_IN_SECONDS};

/// Which matrix element drives the rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmissionForm {
    /// omega^3 |<b|d|a>|^2 in the long-wavelength limit.
    DipoleLength,
    /// Transverse current form factor at the physical photon momentum.
    FullCurrent,
}

/// One angular sample of the emission pattern, polarizations summed.
#[derive(Clone, Debug)]
pub struct DifferentialSample {
    pub theta: f64,
    pub phi: f64,
    /// Solid-angle quadrature weight.
    pub weight: f64,
    /// dA/dOmega at this direction, atomic units.
    pub value: f64,
}

/// Emission line: frequency, rates, and the angular pattern.
#[derive(Clone, Debug)]
pub struct TransitionResult {
    /// Photon frequency from the bare level difference.
    pub omega: f64,
    /// Frequency after composite recoil on the total mass.
    pub omega_recoil: f64,
    /// Angular quadrature of the differential rate, atomic units.
    pub total_rate: f64,
    /// Closed-form dipole rate (4/3) omega^3 |d|^2 / c^3.
    pub closed_rate: f64,
    /// total_rate converted to inverse seconds.
    pub rate_per_second: f64,
    pub form: EmissionForm,
    pub differential: Vec<DifferentialSample>,
}

fn dot_c(e: &[f64; 3], v: &[Complex64; 3]) -> Complex64 {
    v[0] * e[0] + v[1] * e[1] + v[2] * e[2]
}

/// Transverse part of a complex vector with respect to a real unit vector.
fn transverse(v: [Complex64; 3], khat: &[f64; 3]) -> [Complex64; 3] {
    let along = v[0] * khat[0] + v[1] * khat[1] + v[2] * khat[2];
    [v[0] - along * khat[0], v[1] - along * khat[1], v[2] - along * khat[2]]
}

/// Spontaneous emission rate for the transition `a -> b`.
pub fn spontaneous_emission(
    a: &BoundState,
    b: &BoundState,
    model: &AtomModel,
    form: EmissionForm,
) -> Result<TransitionResult, ProcessError> {
    if a.energy <= b.energy {
        return Err(ProcessError::NotDownhill {
            from: a.label(),
            to: b.label(),
            e_from: a.energy,
            e_to: b.energy,
        });
    }
    let omega = a.energy - b.energy;
    let c = SPEED_OF_LIGHT;
    let omega_recoil = if model.m2.is_infinite() {
        omega
    } else {
        // omega_r + omega_r^2 / (2 M c^2) = omega, stable quadratic root.
        let mc2 = model.total_mass * c * c;
        2.0 * omega / (1.0 + (1.0 + 2.0 * omega / mc2).sqrt())
    };

    let d_ba = dipole_matrix(b, a, model);
    let d2: f64 = d_ba.iter().map(|x| x.norm_sqr()).sum();
    let closed_rate = 4.0 / 3.0 * omega.powi(3) * d2 / c.powi(3);

    let (samples, prefactor): (Vec<DirectionSample>, f64) = match form {
        EmissionForm::DipoleLength => {
            (direction_samples(16, 32), omega.powi(3) / (2.0 * std::f64::consts::PI * c.powi(3)))
        }
        EmissionForm::FullCurrent => {
            (direction_samples(6, 8), omega / (2.0 * std::f64::consts::PI * c.powi(3)))
        }
    };

    let mut differential = Vec::with_capacity(samples.len());
    let mut total = 0.0;
    for s in &samples {
        let value = match form {
            EmissionForm::DipoleLength => {
                let a1 = dot_c(&s.e_theta, &d_ba).norm_sqr();
                let a2 = dot_c(&s.e_phi, &d_ba).norm_sqr();
                prefactor * (a1 + a2)
            }
            EmissionForm::FullCurrent => {
                // Emitted photon leaves with +k: the interaction carries
                // e^{-i k . x}, so the current factor is taken at -k.
                let kmag = omega / c;
                let mk = [-kmag * s.khat[0], -kmag * s.khat[1], -kmag * s.khat[2]];
                let ff = crate::atoms::formfactor::form_factors(b, a, model, mk)?;
                let g_t = transverse(ff.current, &s.khat);
                let a1 = dot_c(&s.e_theta, &g_t).norm_sqr();
                let a2 = dot_c(&s.e_phi, &g_t).norm_sqr();
                prefactor * (a1 + a2)
            }
        };
        total += s.weight * value;
        differential.push(DifferentialSample {
            theta: s.theta,
            phi: s.phi,
            weight: s.weight,
            value,
        });
    }

    Ok(TransitionResult {
        omega,
        omega_recoil,
        total_rate: total,
        closed_rate,
        rate_per_second: total / TIME_AU_IN_SECONDS,
        form,
        differential,
    })
}
