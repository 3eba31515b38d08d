//! Long-range forces between two composites: the multipole coupling
//! tensor, second-order dispersion energies, the C6 coefficient, and the
//! effective dipole-dipole potential for composite-composite scattering.

pub mod coupling;
pub mod effective;
pub mod energies;

pub use coupling::{
    coupling_tensor, first_order_energy, quadrupole_charge, quadrupole_matrix, CouplingTensor,
    DipoleDipoleKernel,
};
pub use effective::{effective_potential, EffectivePotential};
pub use energies::{
    c6_truncated, second_order_energy, ChannelContribution, VdwOptions, VdwResult,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VdwError {
    #[error("separation {separation:.3} below the overlap scale {minimum:.3}; the multipole expansion has broken down")]
    SeparationTooSmall { separation: f64, minimum: f64 },
    #[error("degenerate denominator: channel {label} has |energy gap| {gap:.3e} below 1e-10")]
    DegenerateDenominator { label: String, gap: f64 },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Atoms(#[from] crate::atoms::AtomsError),
}
