//! Radial Schroedinger problem on the logarithmic grid.
//!
//! Substituting r = r_min e^s and u = e^{s/2} w maps
//! -(1/2mu) u'' + [l(l+1)/(2mu r^2) + V(r)] u = eps u onto a symmetric
//! tridiagonal eigenproblem for v_i = sqrt(r_i h) u(r_i):
//!   diag_i = 1/(mu h^2 r_i^2) + 1/(8 mu r_i^2) + l(l+1)/(2 mu r_i^2) + V(r_i)
//!   off_i  = -1/(2 mu h^2 r_i r_{i+1})
//! Eigenvectors are Euclidean-orthonormal, so matrix elements of local
//! operators between solutions are plain weighted sums with weights r_i h
//! and carry no further quadrature error.

use super::model::AtomModel;
use crate::numerics::grid::RadialGrid;
use crate::numerics::tridiag::SymTridiag;

/// Symmetric tridiagonal representation of the radial Hamiltonian for
/// orbital momentum l.
pub fn channel_matrix(model: &AtomModel, l: u32, grid: &RadialGrid) -> SymTridiag {
    let mu = model.reduced_mass;
    let h2 = grid.h * grid.h;
    let ll = (l * (l + 1)) as f64;
    let coulomb = model.e1 * model.e2;
    let n = grid.n();
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            let r = grid.r[i];
            1.0 / (mu * h2 * r * r) + 1.0 / (8.0 * mu * r * r) + ll / (2.0 * mu * r * r)
                + coulomb / r
        })
        .collect();
    let off: Vec<f64> = (0..n - 1)
        .map(|i| -1.0 / (2.0 * mu * h2 * grid.r[i] * grid.r[i + 1]))
        .collect();
    SymTridiag::new(diag, off)
}

/// Convert a Euclidean-normalized eigenvector to u(r_i) samples.
pub fn eigvec_to_u(grid: &RadialGrid, v: &[f64]) -> Vec<f64> {
    v.iter()
        .zip(&grid.r)
        .map(|(&vi, &ri)| vi / (ri * grid.h).sqrt())
        .collect()
}

/// du/dr by five-point finite differences in the log coordinate.
pub fn log_grid_derivative(grid: &RadialGrid, u: &[f64]) -> Vec<f64> {
    let n = u.len();
    assert!(n >= 5);
    let h = grid.h;
    let mut ds = vec![0.0; n];
    for i in 0..n {
        ds[i] = if i >= 2 && i + 2 < n {
            (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h)
        } else if i < 2 {
            (-25.0 * u[i] + 48.0 * u[i + 1] - 36.0 * u[i + 2] + 16.0 * u[i + 3]
                - 3.0 * u[i + 4])
                / (12.0 * h)
        } else {
            (25.0 * u[i] - 48.0 * u[i - 1] + 36.0 * u[i - 2] - 16.0 * u[i - 3]
                + 3.0 * u[i - 4])
                / (12.0 * h)
        };
    }
    ds.iter().zip(&grid.r).map(|(&d, &r)| d / r).collect()
}

/// Fix the overall sign so the first well-resolved lobe is positive,
/// matching the closed-form convention (deterministic output depends on it).
pub fn fix_sign(u: &mut [f64]) {
    let peak = u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if peak == 0.0 {
        return;
    }
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-3 * peak) {
        if *first < 0.0 {
            for x in u.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Number of interior sign changes of u (nodes), ignoring unresolved
/// amplitudes below 1e-6 of the peak.
pub fn count_nodes(u: &[f64]) -> usize {
    let peak = u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mut nodes = 0;
    let mut last_sign = 0i8;
    for &x in u {
        if x.abs() < 1e-6 * peak {
            continue;
        }
        let s = if x > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            nodes += 1;
        }
        last_sign = s;
    }
    nodes
}
