//! Exact two-species fermion Fock spaces on a periodic lattice, composite
//! pair operators built from the bound-pair wavefunction, and the effective
//! boson-fermion description they are checked against.

pub mod auxspace;
pub mod basis;
pub mod composite;
pub mod effective;
pub mod lattice;
pub mod operators;
pub mod pair;

pub use auxspace::{AuxSpace, AuxState, BoostReport};
pub use basis::LatticeFockSpace;
pub use composite::{CompositeLabeling, OrthonormalityReport};
pub use effective::CorrespondenceReport;
pub use lattice::{LatticeConfig, PairPotential};
pub use operators::OperatorMatrix;
pub use pair::{PairSpectrum, PairState};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("basis cap exceeded: sector would hold {size} states (cap {cap})")]
    CapExceeded { size: u128, cap: u64 },
    #[error("no bound state: the pair spectrum has no level below the scattering threshold")]
    NoBoundState,
    #[error("composite position off the lattice: {0}")]
    OffGrid(String),
    #[error("composites overlap: placements {a} and {b} are {distance} sites apart, need at least {required}")]
    SeparationViolated { a: usize, b: usize, distance: i64, required: i64 },
    #[error("incompatible boost: velocity {velocity} does not wind an integer number of times around the ring for every species")]
    IncompatibleBoost { velocity: f64 },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}
