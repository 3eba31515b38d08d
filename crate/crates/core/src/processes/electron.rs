//! First Born amplitudes for a charged projectile scattering off the
//! composite. The Coulomb interaction with both constituents folds into the
//! charge form factor, so the exact Born amplitude is
//! f(q) = -(2 m_p e_p / q^2) g_{a'a}(q); its long-wavelength reduction is
//! the dipole amplitude -(2 m_p e_p / q^2) i q . d_{a'a}.
//!
//! Both are scattering amplitudes; |f|^2 is the differential cross section
//! up to the outgoing/incoming flux ratio, which is unity for elastic
//! kinematics and is left to the caller otherwise.

use num_complex::Complex64;

use super::ProcessError;
use crate::atoms::formfactor::form_factors;
use crate::atoms::matrix_elements::dipole_matrix;
use crate::atoms::model::AtomModel;
use crate::atoms::states::BoundState;

/// The scattering projectile (defaults describe an electron).
#[derive(Clone, Copy, Debug)]
pub struct Projectile {
    pub mass: f64,
    pub charge: f64,
}

impl Default for Projectile {
    fn default() -> Self {
        Projectile { mass: 1.0, charge: -1.0 }
    }
}

/// Born amplitude at fixed momentum transfer, in the dipole and exact
/// (form-factor) routes.
#[derive(Clone, Debug)]
pub struct BornAmplitude {
    pub q: [f64; 3],
    /// Long-wavelength amplitude from the transition dipole.
    pub dipole: Complex64,
    /// Full first-Born amplitude through the charge form factor.
    pub exact: Complex64,
    pub differential_dipole: f64,
    pub differential_exact: f64,
    /// True when |q| x (state size) is small enough for the dipole route.
    pub dipole_ok: bool,
}

/// First Born amplitude for the composite transition a -> a' at momentum
/// transfer `q` (outgoing minus incoming projectile momentum, negated).
pub fn electron_born(
    a: &BoundState,
    ap: &BoundState,
    model: &AtomModel,
    q: [f64; 3],
    projectile: &Projectile,
) -> Result<BornAmplitude, ProcessError> {
    let q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    if q2 < 1e-24 {
        return Err(ProcessError::ZeroMomentumTransfer);
    }
    let pref = -2.0 * projectile.mass * projectile.charge / q2;

    let d = dipole_matrix(ap, a, model);
    let qd = d[0] * q[0] + d[1] * q[1] + d[2] * q[2];
    let dipole = Complex64::new(0.0, 1.0) * qd * pref;

    let ff = form_factors(ap, a, model, q)?;
    let exact = ff.charge * pref;

    Ok(BornAmplitude {
        q,
        dipole,
        exact,
        differential_dipole: dipole.norm_sqr(),
        differential_exact: exact.norm_sqr(),
        dipole_ok: ff.dipole_regime,
    })
}
