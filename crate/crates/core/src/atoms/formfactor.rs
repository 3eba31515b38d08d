//! Plane-wave matrix elements and the composite form factors that dress
//! photon and electron couplings: the charge form factor (density), the
//! current form factor (symmetrized momentum), and the seagull kernel.
//!
//! Everything reduces to partial-wave radial integrals of spherical Bessel
//! functions between bound radial functions; the log grid resolves those
//! integrals spectrally until the oscillation approaches the local Nyquist
//! scale, which is what the built-in subsample comparison detects.

use num_complex::Complex64;

use super::model::AtomModel;
use super::states::BoundState;
use super::AtomsError;
use crate::numerics::angular::{gradient_channels, sph_harm, RadialKind};
use crate::numerics::grid::RadialGrid;
use crate::numerics::special::spherical_bessel_j;

/// Relative disagreement between full and every-other-point quadrature above
/// which a plane-wave integral is reported as unresolved.
const QUAD_TOL: f64 = 1e-7;

/// Momentum-space couplings of a composite to one photon (charge, current)
/// and two photons (seagull) at wave vector `k`, between two internal states.
#[derive(Clone, Debug)]
pub struct FormFactor {
    /// Photon wave vector the factors were evaluated at.
    pub k: [f64; 3],
    /// Charge form factor g_ab(k): couples to the scalar density.
    pub charge: Complex64,
    /// Current form factor, the symmetrized-momentum (convective) coupling.
    pub current: [Complex64; 3],
    /// Two-photon contact kernel Σ_i (e_i^2/m_i) x constituent form factor.
    pub seagull: Complex64,
    /// True when |k| x (size of both states) is small enough that the
    /// long-wavelength (dipole) approximation of these couplings holds.
    pub dipole_regime: bool,
}

fn i_pow(l: u32) -> Complex64 {
    match l % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Σ_i ua_i j_L(q r_i) fb_i r_i h over every `stride`-th point.
fn bessel_radial(
    grid: &RadialGrid,
    ua: &[f64],
    fb: &[f64],
    q: f64,
    l_rank: u32,
    stride: usize,
) -> f64 {
    let h = grid.h * stride as f64;
    let mut acc = 0.0;
    let mut i = 0;
    while i < grid.r.len() {
        let r = grid.r[i];
        acc += ua[i] * spherical_bessel_j(l_rank, q * r) * fb[i] * r * h;
        i += stride;
    }
    acc
}

/// ⟨(la, ma, ua)| e^{i q·y} |(lb, mb, fb)⟩ by the partial-wave expansion,
/// returning the value and the full-vs-subsampled disagreement.
fn plane_wave_raw(
    grid: &RadialGrid,
    la: u32,
    ma: i32,
    ua: &[f64],
    lb: u32,
    mb: i32,
    fb: &[f64],
    q: [f64; 3],
) -> (Complex64, f64) {
    let qn = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if qn == 0.0 {
        if la != lb || ma != mb {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let v = bessel_radial(grid, ua, fb, 0.0, 0, 1);
        return (Complex64::new(v, 0.0), 0.0);
    }
    let theta = (q[2] / qn).clamp(-1.0, 1.0).acos();
    let phi = q[1].atan2(q[0]);
    let m_cap = ma - mb;
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut val = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let l_lo = la.abs_diff(lb);
    for l_rank in l_lo..=(la + lb) {
        if (la + lb + l_rank) % 2 == 1 || m_cap.unsigned_abs() > l_rank {
            continue;
        }
        let g = crate::numerics::angular::gaunt(la, ma, l_rank, m_cap, lb, mb);
        if g == 0.0 {
            continue;
        }
        let angular = four_pi * i_pow(l_rank) * sph_harm(l_rank, m_cap, theta, phi).conj() * g;
        val += angular * bessel_radial(grid, ua, fb, qn, l_rank, 1);
        coarse += angular * bessel_radial(grid, ua, fb, qn, l_rank, 2);
    }
    (val, (val - coarse).norm())
}

fn check(context: &str, pair: (Complex64, f64)) -> Result<Complex64, AtomsError> {
    let (val, delta) = pair;
    let tolerance = QUAD_TOL * val.norm().max(1.0);
    if delta > tolerance {
        return Err(AtomsError::QuadratureNotConverged {
            context: context.to_string(),
            delta,
            tolerance,
        });
    }
    Ok(val)
}

/// ⟨a| e^{i q·y} |b⟩ of the internal coordinate. Errs when the grid no
/// longer resolves the oscillation of the integrand.
pub fn plane_wave_matrix(
    a: &BoundState,
    b: &BoundState,
    q: [f64; 3],
) -> Result<Complex64, AtomsError> {
    check(
        "plane-wave matrix element",
        plane_wave_raw(&a.grid, a.l, a.m, &a.u, b.l, b.m, &b.u, q),
    )
}

/// W_i(q; a, b) = ∫ φ_a^* e^{i q·y} ∂_i φ_b: plane wave against the gradient
/// ladder channels of the ket.
fn gradient_plane_wave(
    a: &BoundState,
    b: &BoundState,
    q: [f64; 3],
    comp: crate::numerics::angular::VecComp,
) -> (Complex64, f64) {
    let grid = &a.grid;
    let lb = b.l as f64;
    let mut val = Complex64::new(0.0, 0.0);
    let mut delta = 0.0;
    for (lp, mp, c, kind) in gradient_channels(comp, b.l, b.m) {
        let fb: Vec<f64> = b
            .du
            .iter()
            .zip(&b.u)
            .zip(&grid.r)
            .map(|((&dub, &ub), &r)| match kind {
                RadialKind::Raise => dub - (lb + 1.0) * ub / r,
                RadialKind::Lower => dub + lb * ub / r,
            })
            .collect();
        let (v, d) = plane_wave_raw(grid, a.l, a.m, &a.u, lp, mp, &fb, q);
        val += c * v;
        delta += c.norm() * d;
    }
    (val, delta)
}

/// Symmetrized-momentum plane wave (1/2)⟨a|{p_i, e^{i q·y}}|b⟩ for all three
/// Cartesian components, as -i/2 (W(q; a, b) - conj(W(-q; b, a))).
fn symmetrized_current(
    a: &BoundState,
    b: &BoundState,
    q: [f64; 3],
    context: &str,
) -> Result<[Complex64; 3], AtomsError> {
    use crate::numerics::angular::VecComp;
    let minus_q = [-q[0], -q[1], -q[2]];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, comp) in [VecComp::X, VecComp::Y, VecComp::Z].into_iter().enumerate() {
        let (w, d1) = gradient_plane_wave(a, b, q, comp);
        let (wr, d2) = gradient_plane_wave(b, a, minus_q, comp);
        let val = Complex64::new(0.0, -0.5) * (w - wr.conj());
        let tolerance = QUAD_TOL * val.norm().max(1.0);
        if d1 + d2 > tolerance {
            return Err(AtomsError::QuadratureNotConverged {
                context: context.to_string(),
                delta: d1 + d2,
                tolerance,
            });
        }
        out[i] = val;
    }
    Ok(out)
}

/// Evaluate charge, current, and seagull form factors between internal
/// states `a` and `b` at photon wave vector `k`.
///
/// The constituent legs see the photon at q1 = (m2/M) k and q2 = -(m1/M) k;
/// an infinitely heavy second constituent sits at the center of mass and
/// contributes only its static charge.
pub fn form_factors(
    a: &BoundState,
    b: &BoundState,
    model: &AtomModel,
    k: [f64; 3],
) -> Result<FormFactor, AtomsError> {
    let w1 = model.weight1();
    let w2 = model.weight2();
    let q1 = [w1 * k[0], w1 * k[1], w1 * k[2]];
    let q2 = [-w2 * k[0], -w2 * k[1], -w2 * k[2]];

    let p1 = check(
        "charge form factor, constituent 1",
        plane_wave_raw(&a.grid, a.l, a.m, &a.u, b.l, b.m, &b.u, q1),
    )?;
    let p2 = check(
        "charge form factor, constituent 2",
        plane_wave_raw(&a.grid, a.l, a.m, &a.u, b.l, b.m, &b.u, q2),
    )?;
    let charge = model.e1 * p1 + model.e2 * p2;

    let seagull = {
        let s2 = if model.m2.is_finite() { model.e2 * model.e2 / model.m2 } else { 0.0 };
        (model.e1 * model.e1 / model.m1) * p1 + s2 * p2
    };

    let mut current = symmetrized_current(a, b, q1, "current form factor, constituent 1")?
        .map(|c| c * (model.e1 / model.m1));
    if model.m2.is_finite() {
        let c2 = symmetrized_current(a, b, q2, "current form factor, constituent 2")?;
        for i in 0..3 {
            current[i] -= c2[i] * (model.e2 / model.m2);
        }
    }

    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let size = a.mass_radius(0.999).max(b.mass_radius(0.999));
    Ok(FormFactor { k, charge, current, seagull, dipole_regime: kn * size <= 0.3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::matrix_elements::{dipole_matrix, position_matrix};
    use crate::atoms::states::{solve_hydrogenic, SolveMode, SolverParams};

    fn solution(model: &AtomModel, n_max: u32, l_max: u32) -> crate::atoms::states::HydrogenicSolution {
        solve_hydrogenic(model, n_max, l_max, SolveMode::Analytic, &SolverParams::default())
            .unwrap()
    }

    #[test]
    fn zero_momentum_is_overlap() {
        let model = AtomModel::fixed_core();
        let sol = solution(&model, 2, 1);
        let s1 = sol.state(1, 0, 0).unwrap();
        let s2 = sol.state(2, 0, 0).unwrap();
        let diag = plane_wave_matrix(s1, s1, [0.0; 3]).unwrap();
        let off = plane_wave_matrix(s1, s2, [0.0; 3]).unwrap();
        assert!((diag.re - 1.0).abs() < 1e-9 && diag.im == 0.0);
        assert!(off.norm() < 1e-9);
    }

    #[test]
    fn elastic_ground_state_matches_closed_form() {
        // <1s|e^{iq.y}|1s> = 16/(4+q^2)^2 for unit reduced mass.
        let model = AtomModel::fixed_core();
        let sol = solution(&model, 1, 0);
        let s1 = sol.state(1, 0, 0).unwrap();
        for q in [0.3, 0.7, 1.5, 4.0] {
            let got = plane_wave_matrix(s1, s1, [0.0, 0.0, q]).unwrap();
            let want = 16.0 / (4.0 + q * q).powi(2);
            assert!((got.re - want).abs() < 1e-8, "q={q}: {} vs {want}", got.re);
            assert!(got.im.abs() < 1e-12);
            // Direction independence for an s state.
            let tilted = plane_wave_matrix(s1, s1, [q / 3.0f64.sqrt(); 3]).unwrap();
            assert!((tilted.re - want).abs() < 1e-8);
        }
    }

    #[test]
    fn small_q_expansion_reproduces_dipole_element() {
        let model = AtomModel::fixed_core();
        let sol = solution(&model, 2, 1);
        let s1 = sol.state(1, 0, 0).unwrap();
        let p0 = sol.state(2, 1, 0).unwrap();
        let q = 1e-3;
        let got = plane_wave_matrix(s1, p0, [0.0, 0.0, q]).unwrap();
        let d = position_matrix(s1, p0)[2].re;
        // P = i q <1s|z|2p0> + O(q^3).
        assert!(got.re.abs() < 1e-8);
        assert!((got.im - q * d).abs() < 1e-8, "{} vs {}", got.im, q * d);
    }

    #[test]
    fn hermiticity_under_momentum_reversal() {
        let model = AtomModel::hydrogen();
        let sol = solution(&model, 3, 2);
        let a = sol.state(2, 1, 1).unwrap();
        let b = sol.state(3, 2, 0).unwrap();
        let k = [0.21, -0.13, 0.34];
        let mk = [-0.21, 0.13, -0.34];
        let fab = form_factors(a, b, &model, k).unwrap();
        let fba = form_factors(b, a, &model, mk).unwrap();
        assert!((fab.charge - fba.charge.conj()).norm() < 1e-10);
        for i in 0..3 {
            assert!((fab.current[i] - fba.current[i].conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn neutral_charge_factor_vanishes_quadratically() {
        let model = AtomModel::hydrogen();
        let sol = solution(&model, 1, 0);
        let s1 = sol.state(1, 0, 0).unwrap();
        let f = form_factors(s1, s1, &model, [0.0, 0.0, 0.01]).unwrap();
        assert!(f.charge.norm() < 1e-3, "residual charge {}", f.charge.norm());
        assert!(f.dipole_regime);
    }

    #[test]
    fn current_limit_is_energy_weighted_dipole() {
        // g_vec(k -> 0) = i (eps_a - eps_b) d_ab, finite masses exercised.
        let model = AtomModel::hydrogen();
        let sol = solution(&model, 2, 1);
        let a = sol.state(1, 0, 0).unwrap();
        let b = sol.state(2, 1, 0).unwrap();
        let f = form_factors(a, b, &model, [0.0, 0.0, 1e-6]).unwrap();
        let d = dipole_matrix(a, b, &model);
        let factor = Complex64::new(0.0, a.energy - b.energy);
        for i in 0..3 {
            let want = factor * d[i];
            assert!(
                (f.current[i] - want).norm() < 1e-6,
                "comp {i}: {:?} vs {want:?}",
                f.current[i]
            );
        }
    }

    #[test]
    fn seagull_at_zero_momentum_is_inverse_reduced_mass() {
        let model = AtomModel::hydrogen();
        let sol = solution(&model, 1, 0);
        let s1 = sol.state(1, 0, 0).unwrap();
        let f = form_factors(s1, s1, &model, [0.0; 3]).unwrap();
        assert!((f.seagull.re - 1.0 / model.reduced_mass).abs() < 1e-9);
    }

    #[test]
    fn unresolved_oscillation_is_reported() {
        let model = AtomModel::fixed_core();
        let sol = solution(&model, 1, 0);
        let s1 = sol.state(1, 0, 0).unwrap();
        let err = plane_wave_matrix(s1, s1, [0.0, 0.0, 2.0e4]).unwrap_err();
        match err {
            AtomsError::QuadratureNotConverged { .. } => {}
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn large_momentum_leaves_dipole_regime() {
        let model = AtomModel::fixed_core();
        let sol = solution(&model, 1, 0);
        let s1 = sol.state(1, 0, 0).unwrap();
        let f = form_factors(s1, s1, &model, [0.0, 0.0, 0.5]).unwrap();
        assert!(!f.dipole_regime);
    }
}
