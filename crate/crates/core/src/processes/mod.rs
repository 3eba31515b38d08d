//! Radiative and collisional processes of the composite: spontaneous
//! emission, photon scattering, electron scattering, and the static
//! polarizability they share.

pub mod electron;
pub mod emission;
pub mod photon;
pub mod polarizability;
pub mod scattering;

pub use electron::{electron_born, BornAmplitude, Projectile};
pub use emission::{spontaneous_emission, EmissionForm, TransitionResult};
pub use photon::PhotonMode;
pub use polarizability::{polarizability, polarizability_discrete, Polarizability};
pub use scattering::{photon_scattering, rayleigh_cross_section, ScatteringKernel};

use thiserror::Error;

/// A state of the pseudo-spectrum addressed by channel, index, and m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChannelState {
    pub l: u32,
    /// Index within the channel, ordered by energy (0 = lowest).
    pub k: usize,
    pub m: i32,
}

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error("not downhill: {from} (E = {e_from:.6}) does not lie above {to} (E = {e_to:.6})")]
    NotDownhill { from: String, to: String, e_from: f64, e_to: f64 },
    #[error("photon energy {omega:.6e} lands within {distance:.3e} of the {label}; the real-valued kernel diverges there")]
    ResonanceHit { omega: f64, label: String, distance: f64 },
    #[error("zero momentum transfer: the Coulomb amplitude is singular at q = 0")]
    ZeroMomentumTransfer,
    #[error("basis too small: {context} (top-decade share {share:.3e} exceeds {tolerance:.1e})")]
    BasisTooSmall { context: String, share: f64, tolerance: f64 },
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error(transparent)]
    Atoms(#[from] crate::atoms::AtomsError),
}
