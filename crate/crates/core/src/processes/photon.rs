//! Photon modes and the angular quadrature used to integrate emission
//! patterns and scattering cross sections over directions.

use num_complex::Complex64;

use super::ProcessError;
use crate::constants::SPEED_OF_LIGHT;
use crate::numerics::special::gauss_legendre;

/// A single photon mode: wave vector, frequency (omega = c |k|), and a unit
/// polarization transverse to the wave vector.
#[derive(Clone, Debug)]
pub struct PhotonMode {
    pub k: [f64; 3],
    pub omega: f64,
    pub polarization: [Complex64; 3],
}

fn dot_ce(e: &[Complex64; 3], v: &[f64; 3]) -> Complex64 {
    e[0] * v[0] + e[1] * v[1] + e[2] * v[2]
}

impl PhotonMode {
    /// Validate transversality (|e . k| / |k| < 1e-12) and normalization
    /// (||e| - 1| < 1e-12).
    pub fn new(k: [f64; 3], polarization: [Complex64; 3]) -> Result<Self, ProcessError> {
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if kn == 0.0 {
            return Err(ProcessError::InvalidMode("photon wave vector is zero".into()));
        }
        let norm = polarization.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(ProcessError::InvalidMode(format!(
                "polarization norm {norm} differs from 1"
            )));
        }
        let along = dot_ce(&polarization, &k).norm() / kn;
        if along > 1e-12 {
            return Err(ProcessError::InvalidMode(format!(
                "polarization has longitudinal component {along:.3e}"
            )));
        }
        Ok(PhotonMode { k, omega: kn * SPEED_OF_LIGHT, polarization })
    }

    /// Mode with frequency `omega` travelling along +z, polarized along x.
    pub fn along_z(omega: f64) -> Self {
        PhotonMode {
            k: [0.0, 0.0, omega / SPEED_OF_LIGHT],
            omega,
            polarization: [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        }
    }

    /// e . v for a real vector.
    pub fn project(&self, v: &[f64; 3]) -> Complex64 {
        dot_ce(&self.polarization, v)
    }
}

/// Direction sample with its solid-angle weight and the two transverse
/// linear polarizations (theta-hat and phi-hat).
#[derive(Clone, Debug)]
pub struct DirectionSample {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
    pub khat: [f64; 3],
    pub e_theta: [f64; 3],
    pub e_phi: [f64; 3],
}

/// Product quadrature over the sphere: Gauss-Legendre in cos(theta) times a
/// uniform phi grid. Exact for integrands band-limited below the rule order,
/// which covers every dipole and low-multipole pattern integrated here.
pub fn direction_samples(n_theta: usize, n_phi: usize) -> Vec<DirectionSample> {
    let (xs, ws) = gauss_legendre(n_theta);
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for (&x, &w) in xs.iter().zip(&ws) {
        let theta = x.acos();
        let st = theta.sin();
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let (sp, cp) = phi.sin_cos();
            out.push(DirectionSample {
                theta,
                phi,
                weight: w * 2.0 * std::f64::consts::PI / n_phi as f64,
                khat: [st * cp, st * sp, x],
                e_theta: [x * cp, x * sp, -st],
                e_phi: [-sp, cp, 0.0],
            });
        }
    }
    out
}
