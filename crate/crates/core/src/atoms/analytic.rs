//! Closed-form hydrogen-like radial wavefunctions.
//!
//! With reduced mass mu and Coulomb strength Z = |e1 e2| the scale is
//! a = mu Z; then R_nl(r) = N (2ar/n)^l e^{-ar/n} L^{2l+1}_{n-l-1}(2ar/n)
//! and eps_n = -a^2 / (2 mu n^2) = -mu Z^2 / (2 n^2).

use super::model::AtomModel;
use crate::numerics::special::{assoc_laguerre, assoc_laguerre_deriv, ln_factorial};

/// Normalization constant N_nl for the radial function above.
fn norm(n: u32, l: u32, a: f64) -> f64 {
    let nf = n as f64;
    // (2a/n)^3 (n-l-1)! / (2n (n+l)!)
    let ln = 3.0 * (2.0 * a / nf).ln() + ln_factorial(n - l - 1)
        - (2.0 * nf).ln()
        - ln_factorial(n + l);
    (0.5 * ln).exp()
}

/// R_nl(r).
pub fn radial_r(model: &AtomModel, n: u32, l: u32, r: f64) -> f64 {
    assert!(l < n, "require l < n");
    let a = model.reduced_mass * model.coulomb_strength();
    let x = 2.0 * a * r / n as f64;
    norm(n, l, a) * x.powi(l as i32) * (-0.5 * x).exp() * assoc_laguerre(n - l - 1, 2.0 * l as f64 + 1.0, x)
}

/// dR_nl/dr.
pub fn radial_r_deriv(model: &AtomModel, n: u32, l: u32, r: f64) -> f64 {
    let a = model.reduced_mass * model.coulomb_strength();
    let nf = n as f64;
    let x = 2.0 * a * r / nf;
    let dxdr = 2.0 * a / nf;
    let lf = l as f64;
    let lag = assoc_laguerre(n - l - 1, 2.0 * lf + 1.0, x);
    let dlag = assoc_laguerre_deriv(n - l - 1, 2.0 * lf + 1.0, x);
    let xl = x.powi(l as i32);
    let xlm1 = if l == 0 { 0.0 } else { x.powi(l as i32 - 1) };
    let e = (-0.5 * x).exp();
    norm(n, l, a) * dxdr * e * (lf * xlm1 * lag - 0.5 * xl * lag + xl * dlag)
}

/// u_nl(r) = r R_nl(r).
pub fn radial_u(model: &AtomModel, n: u32, l: u32, r: f64) -> f64 {
    r * radial_r(model, n, l, r)
}

/// du_nl/dr = R + r R'.
pub fn radial_u_deriv(model: &AtomModel, n: u32, l: u32, r: f64) -> f64 {
    radial_r(model, n, l, r) + r * radial_r_deriv(model, n, l, r)
}
