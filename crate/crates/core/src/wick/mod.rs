//! Wick contraction engine for products of elementary and composite
//! operators, with a dense Fock-space oracle to check every vacuum
//! expectation value against.
//!
//! [`symbols`] holds the formal products, [`contraction`] enumerates their
//! complete contractions with signs and symbolic kernels, [`evaluate`] binds
//! positions and a pair spectrum to produce numbers, and [`tilde`] carries
//! the symbolic dressing of the elementary fields and its closure check.

pub mod contraction;
pub mod evaluate;
pub mod symbols;
pub mod tilde;

pub use contraction::{
    classify_probe, enumerate_contractions, ContractionDiagram, LegRef, Pairing, ProbeClass,
};
pub use evaluate::{evaluate_vev, evaluate_vev_filtered, KernelValue};
pub use symbols::{OpKind, OpSymbol, Product};
pub use tilde::{
    expand_product, tilde_anticommutator, tilde_map, tilde_map_with, tilde_product, AuxFactor,
    AuxSum, AuxTerm,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WickError {
    #[error("unbound variable: {0} appears in a kernel but is neither summed nor fixed")]
    UnboundVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}
