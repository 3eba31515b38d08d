//! Two-body bound states with Coulomb attraction: exact and grid-based
//! hydrogen-like spectra, dipole/momentum matrix elements, charge and
//! current form factors.

pub mod analytic;
pub mod formfactor;
pub mod matrix_elements;
pub mod model;
pub mod radial;
pub mod states;

pub use formfactor::{form_factors, FormFactor};
pub use matrix_elements::{dipole_matrix, momentum_matrix, position_matrix};
pub use model::{AtomModel, PotentialKind};
pub use states::{
    solve_hydrogenic, BoundState, HydrogenicSolution, PseudoChannel, PseudoSpectrum, SolveMode,
    SolverParams,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AtomsError {
    #[error("grid too coarse: level {label} deviates from the closed form by {deviation:.3e} (tolerance {tolerance:.1e})")]
    GridTooCoarse { label: String, deviation: f64, tolerance: f64 },
    #[error("quadrature not converged: {context} changed by {delta:.3e} under grid refinement (tolerance {tolerance:.1e})")]
    QuadratureNotConverged { context: String, delta: f64, tolerance: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}
