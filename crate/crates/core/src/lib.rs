//! Laboratory for second quantization with two-fermion bound states.
//!
//! Two views of the same physics live side by side:
//!
//! * an exact view: two fermion species on a small periodic lattice, with the
//!   full Fock space, composite pair operators built from the exact fields,
//!   and a symbolic Wick engine for their vacuum expectation values
//!   ([`fockspace`], [`wick`]);
//! * an effective view: the pair promoted to an elementary boson coupled to
//!   the leftover fermions, whose Hamiltonian and Galilean transformation
//!   properties are checked against the exact view matrix element by matrix
//!   element ([`fockspace::auxspace`]).
//!
//! The continuum half of the crate ([`atoms`], [`processes`], [`vdw`]) works
//! out hydrogen-like observables of the same composite formalism: bound
//! spectra, dipole and momentum matrix elements, photon emission and
//! scattering, electron-atom scattering in Born approximation, and van der
//! Waals coefficients. Everything is in Hartree atomic units; the speed of
//! light enters only through the fine-structure constant.

pub mod atoms;
pub mod constants;
pub mod fockspace;
pub mod numerics;
pub mod processes;
pub mod vdw;
pub mod wick;
