//! Shared numerical kernels: tridiagonal eigensolver, radial log grid,
//! special functions, angular matrix elements, small least-squares fits.

pub mod angular;
pub mod fit;
pub mod grid;
pub mod special;
pub mod tridiag;
