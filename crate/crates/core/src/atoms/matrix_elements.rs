//! Dipole and momentum matrix elements between bound states, plus the
//! closure sums (oscillator strength, completeness) over pseudo-spectra.

use num_complex::Complex64;

use super::model::AtomModel;
use super::states::{BoundState, PseudoSpectrum};
use crate::numerics::angular::{
    direction_element, direction_product_element, gradient_channels, RadialKind, VecComp,
};

pub const COMPS: [VecComp; 3] = [VecComp::X, VecComp::Y, VecComp::Z];

/// Effective dipole charge of the internal coordinate: the composite dipole
/// relative to its center of mass is (e1 m2 - e2 m1)/M times the relative
/// coordinate. For opposite unit charges this is e1 for any masses.
pub fn dipole_charge(model: &AtomModel) -> f64 {
    if model.m2.is_infinite() {
        model.e1
    } else {
        (model.e1 * model.m2 - model.e2 * model.m1) / model.total_mass
    }
}

/// ⟨a| y_i |b⟩ of the relative coordinate, Cartesian components.
pub fn position_matrix(a: &BoundState, b: &BoundState) -> [Complex64; 3] {
    let radial = a.radial_integral(b, |r| r);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, comp) in COMPS.iter().enumerate() {
        out[i] = radial * direction_element(*comp, a.l, a.m, b.l, b.m);
    }
    out
}

/// Dipole matrix element d_ab = (effective charge) ⟨a|y|b⟩.
pub fn dipole_matrix(a: &BoundState, b: &BoundState, model: &AtomModel) -> [Complex64; 3] {
    let e = dipole_charge(model);
    position_matrix(a, b).map(|c| c * e)
}

/// ⟨a| p_i |b⟩ with p = -i ∇ in the relative coordinate, by the gradient
/// ladder decomposition (differentiation, not the energy-weighted identity,
/// so the two routes can be compared independently).
pub fn momentum_matrix(a: &BoundState, b: &BoundState, model: &AtomModel) -> [Complex64; 3] {
    debug_assert!(model.reduced_mass > 0.0);
    let h = a.grid.h;
    let lb = b.l as f64;
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, comp) in COMPS.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (lp, mp, c, kind) in gradient_channels(*comp, b.l, b.m) {
            if lp != a.l || mp != a.m {
                continue;
            }
            let radial: f64 = a
                .u
                .iter()
                .zip(b.du.iter().zip(&b.u))
                .zip(&a.grid.r)
                .map(|((&ua, (&dub, &ub)), &r)| {
                    let s = match kind {
                        RadialKind::Raise => dub - (lb + 1.0) * ub / r,
                        RadialKind::Lower => dub + lb * ub / r,
                    };
                    ua * s * r * h
                })
                .sum();
            acc += c * radial;
        }
        out[i] = Complex64::new(0.0, -1.0) * acc;
    }
    out
}

/// Σ_i |v_i|^2 for a Cartesian triple.
pub fn vec3_norm2(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Oscillator-strength sum Σ_b f_ab with
/// f_ab = (2 mu / 3)(eps_b - eps_a) |⟨a|y|b⟩|^2 over the full pseudo-spectrum
/// (both dipole-coupled l channels, all m). Equals 1 in the continuum limit.
pub fn oscillator_strength_sum(ps: &PseudoSpectrum, la: u32, ma: i32, ka: usize) -> f64 {
    let mu = ps.model.reduced_mass;
    let ea = ps.channels[la as usize].energies[ka];
    let mut total = 0.0;
    for lb in lb_channels(la, ps.channels.len() as u32) {
        // Angular weight Σ_{i, mb} |⟨Y_{lb mb}|n_i|Y_{la ma}⟩|^2.
        let mut w = 0.0;
        for comp in COMPS {
            for mb in -(lb as i32)..=(lb as i32) {
                w += direction_element(comp, lb, mb, la, ma).norm_sqr();
            }
        }
        let ch = &ps.channels[lb as usize];
        for k in 0..ch.energies.len() {
            let r = ps.radial_integral((la, ka), (lb, k), |x| x);
            total += (2.0 * mu / 3.0) * (ch.energies[k] - ea) * r * r * w;
        }
    }
    total
}

/// Completeness check: (Σ_b |⟨a|z|b⟩|^2, ⟨a|z^2|a⟩). The two numbers agree
/// to the extent the discrete spectrum is complete.
pub fn closure_z(ps: &PseudoSpectrum, la: u32, ma: i32, ka: usize) -> (f64, f64) {
    let mut lhs = 0.0;
    for lb in lb_channels(la, ps.channels.len() as u32) {
        let az = direction_element(VecComp::Z, lb, ma, la, ma).norm_sqr();
        if az == 0.0 {
            continue;
        }
        let ch = &ps.channels[lb as usize];
        for k in 0..ch.energies.len() {
            let r = ps.radial_integral((la, ka), (lb, k), |x| x);
            lhs += r * r * az;
        }
    }
    let r2 = ps.radial_integral((la, ka), (la, ka), |x| x * x);
    let rhs = r2 * direction_product_element(VecComp::Z, VecComp::Z, la, ma, la, ma).re;
    (lhs, rhs)
}

fn lb_channels(la: u32, n_channels: u32) -> Vec<u32> {
    let mut v = Vec::new();
    if la > 0 {
        v.push(la - 1);
    }
    if la + 1 < n_channels {
        v.push(la + 1);
    }
    v
}
