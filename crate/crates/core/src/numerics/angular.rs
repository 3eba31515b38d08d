//! Angular matrix elements between spherical harmonics.
//!
//! Direction cosines and gradients are rank-1 tensors, so their matrix
//! elements follow the ladder structure l -> l±1, m -> m, m±1 with
//! closed-form coefficients; those coefficients are the implementation.
//! Triple products (Gaunt coefficients) are evaluated by Gauss-Legendre x
//! uniform-phi quadrature, which is exact here because every integrand is a
//! polynomial in cos(theta) times a trigonometric polynomial in phi, and the
//! results are cached.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::special::{assoc_legendre, assoc_legendre_dtheta, gauss_legendre, ln_factorial};

/// Cartesian vector component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VecComp {
    X,
    Y,
    Z,
}

/// Radial structure attached to a gradient channel: acting on f(r)Y_lm,
/// the l+1 channel carries f' - l f/r and the l-1 channel f' + (l+1) f/r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialKind {
    Raise,
    Lower,
}

/// Complex spherical harmonic Y_lm(theta, phi), Condon-Shortley phase.
pub fn sph_harm(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    assert!(am <= l);
    let norm = (((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI)).ln()
        + ln_factorial(l - am)
        - ln_factorial(l + am))
    .exp()
    .sqrt();
    let p = assoc_legendre(l, am, theta.cos());
    let e = Complex64::from_polar(1.0, am as f64 * phi);
    let y_pos = norm * p * e;
    if m >= 0 {
        y_pos
    } else {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        sign * y_pos.conj()
    }
}

/// Theta derivative of Y_lm at (theta, phi).
pub fn sph_harm_dtheta(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let norm = (((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI)).ln()
        + ln_factorial(l - am)
        - ln_factorial(l + am))
    .exp()
    .sqrt();
    let dp = assoc_legendre_dtheta(l, am, theta.cos());
    let e = Complex64::from_polar(1.0, am as f64 * phi);
    let d_pos = norm * dp * e;
    if m >= 0 {
        d_pos
    } else {
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        sign * d_pos.conj()
    }
}

fn cz_plus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    (((lf + 1.0) * (lf + 1.0) - mf * mf) / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0))).sqrt()
}

fn cz_minus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    let num = lf * lf - mf * mf;
    if num <= 0.0 {
        0.0
    } else {
        (num / ((2.0 * lf - 1.0) * (2.0 * lf + 1.0))).sqrt()
    }
}

fn cp_plus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    -(((lf + mf + 1.0) * (lf + mf + 2.0)) / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0))).sqrt()
}

fn cp_minus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    let num = (lf - mf) * (lf - mf - 1.0);
    if num <= 0.0 {
        0.0
    } else {
        (num / ((2.0 * lf - 1.0) * (2.0 * lf + 1.0))).sqrt()
    }
}

fn cm_plus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    (((lf - mf + 1.0) * (lf - mf + 2.0)) / ((2.0 * lf + 1.0) * (2.0 * lf + 3.0))).sqrt()
}

fn cm_minus(l: u32, m: i32) -> f64 {
    let (lf, mf) = (l as f64, m as f64);
    let num = (lf + mf) * (lf + mf - 1.0);
    if num <= 0.0 {
        0.0
    } else {
        -(num / ((2.0 * lf - 1.0) * (2.0 * lf + 1.0))).sqrt()
    }
}

/// Channels of n_i Y_lm = Σ c Y_{l'm'}: list of (l', m', c).
///
/// Channels with l' = l-1 are omitted when their coefficient vanishes
/// identically (|m'| > l-1 or l = 0).
pub fn direction_channels(comp: VecComp, l: u32, m: i32) -> Vec<(u32, i32, Complex64)> {
    let mut out: Vec<(u32, i32, Complex64)> = Vec::with_capacity(4);
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match comp {
        VecComp::Z => {
            out.push((l + 1, m, re(cz_plus(l, m))));
            if l > 0 && m.unsigned_abs() <= l - 1 {
                out.push((l - 1, m, re(cz_minus(l, m))));
            }
        }
        VecComp::X => {
            // n_x = (sin e^{i phi} + sin e^{-i phi}) / 2
            out.push((l + 1, m + 1, re(0.5 * cp_plus(l, m))));
            out.push((l + 1, m - 1, re(0.5 * cm_plus(l, m))));
            if l > 0 {
                if (m + 1).unsigned_abs() <= l - 1 {
                    out.push((l - 1, m + 1, re(0.5 * cp_minus(l, m))));
                }
                if (m - 1).unsigned_abs() <= l - 1 {
                    out.push((l - 1, m - 1, re(0.5 * cm_minus(l, m))));
                }
            }
        }
        VecComp::Y => {
            // n_y = (sin e^{i phi} - sin e^{-i phi}) / (2i)
            out.push((l + 1, m + 1, im(-0.5 * cp_plus(l, m))));
            out.push((l + 1, m - 1, im(0.5 * cm_plus(l, m))));
            if l > 0 {
                if (m + 1).unsigned_abs() <= l - 1 {
                    out.push((l - 1, m + 1, im(-0.5 * cp_minus(l, m))));
                }
                if (m - 1).unsigned_abs() <= l - 1 {
                    out.push((l - 1, m - 1, im(0.5 * cm_minus(l, m))));
                }
            }
        }
    }
    out.retain(|&(_, _, c)| c.norm() > 0.0);
    out
}

/// ⟨Y_{l'm'} | n_i | Y_{lm}⟩.
pub fn direction_element(comp: VecComp, lp: u32, mp: i32, l: u32, m: i32) -> Complex64 {
    direction_channels(comp, l, m)
        .into_iter()
        .find(|&(lc, mc, _)| lc == lp && mc == mp)
        .map(|(_, _, c)| c)
        .unwrap_or_else(|| Complex64::new(0.0, 0.0))
}

/// Channels of ∂_i (f(r) Y_lm): (l', m', coefficient, radial structure).
/// The coefficient equals the n_i matrix element of the same channel; the
/// radial factor is f' - l f/r on the raising channel and f' + (l+1) f/r on
/// the lowering channel.
pub fn gradient_channels(comp: VecComp, l: u32, m: i32) -> Vec<(u32, i32, Complex64, RadialKind)> {
    direction_channels(comp, l, m)
        .into_iter()
        .map(|(lp, mp, c)| {
            let kind = if lp == l + 1 { RadialKind::Raise } else { RadialKind::Lower };
            (lp, mp, c, kind)
        })
        .collect()
}

/// ⟨Y_{l'm'} | n_i n_j | Y_{lm}⟩ by composing ladder channels.
pub fn direction_product_element(
    ci: VecComp,
    cj: VecComp,
    lp: u32,
    mp: i32,
    l: u32,
    m: i32,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (lmid, mmid, cjv) in direction_channels(cj, l, m) {
        for (lf, mf, civ) in direction_channels(ci, lmid, mmid) {
            if lf == lp && mf == mp {
                acc += civ * cjv;
            }
        }
    }
    acc
}

/// Gaunt coefficient ∫ Y_{l1 m1}^* Y_{l2 m2} Y_{l3 m3} dΩ (cached).
pub fn gaunt(l1: u32, m1: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> f64 {
    if m1 != m2 + m3 {
        return 0.0;
    }
    if l1 > l2 + l3 || l2 > l1 + l3 || l3 > l1 + l2 {
        return 0.0;
    }
    if (l1 + l2 + l3) % 2 == 1 {
        return 0.0;
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, i32, u32, i32, u32, i32), f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (l1, m1, l2, m2, l3, m3);
    if let Some(&v) = cache.lock().unwrap().get(&key) {
        return v;
    }
    // The phi integral is analytic (m1 = m2 + m3 already enforced); the
    // remaining theta integrand is a polynomial in cos(theta) of degree
    // <= l1+l2+l3, integrated exactly by Gauss-Legendre.
    let npts = ((l1 + l2 + l3) / 2 + 2) as usize;
    let (xs, ws) = gauss_legendre(npts.max(8));
    let mut acc = 0.0;
    for (&x, &w) in xs.iter().zip(&ws) {
        let theta = x.acos();
        let y1 = sph_harm(l1, m1, theta, 0.0);
        let y2 = sph_harm(l2, m2, theta, 0.0);
        let y3 = sph_harm(l3, m3, theta, 0.0);
        acc += w * (y1.conj() * y2 * y3).re;
    }
    let v = acc * 2.0 * std::f64::consts::PI;
    cache.lock().unwrap().insert(key, v);
    v
}

/// Numerical integral ∫ f(theta, phi) dΩ; exact for band-limited integrands
/// below the rule orders. Used by tests to validate the closed forms above
/// and at runtime nowhere.
pub fn sphere_quadrature<F: FnMut(f64, f64) -> Complex64>(
    n_theta: usize,
    n_phi: usize,
    mut f: F,
) -> Complex64 {
    let (xs, ws) = gauss_legendre(n_theta);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in xs.iter().zip(&ws) {
        let theta = x.acos();
        let mut phi_acc = Complex64::new(0.0, 0.0);
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            phi_acc += f(theta, phi);
        }
        acc += w * phi_acc * (2.0 * std::f64::consts::PI / n_phi as f64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonics_are_orthonormal() {
        for &(l1, m1, l2, m2) in &[(0u32, 0i32, 0u32, 0i32), (1, 0, 1, 0), (2, 1, 2, 1), (2, -1, 2, -1), (1, 0, 2, 0), (2, 1, 2, -1), (3, 2, 3, 2)] {
            let got = sphere_quadrature(24, 48, |t, p| {
                sph_harm(l1, m1, t, p).conj() * sph_harm(l2, m2, t, p)
            });
            let want = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(got.re, want, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn direction_elements_match_quadrature() {
        // Exhaustive check of the ladder coefficients against the exact
        // quadrature for l, l' <= 4.
        for comp in [VecComp::X, VecComp::Y, VecComp::Z] {
            for l in 0u32..4 {
                for m in -(l as i32)..=(l as i32) {
                    for lp in 0u32..5 {
                        for mp in -(lp as i32)..=(lp as i32) {
                            let closed = direction_element(comp, lp, mp, l, m);
                            let quad = sphere_quadrature(24, 48, |t, p| {
                                let n = match comp {
                                    VecComp::X => t.sin() * p.cos(),
                                    VecComp::Y => t.sin() * p.sin(),
                                    VecComp::Z => t.cos(),
                                };
                                sph_harm(lp, mp, t, p).conj() * n * sph_harm(l, m, t, p)
                            });
                            assert_abs_diff_eq!(closed.re, quad.re, epsilon = 1e-12);
                            assert_abs_diff_eq!(closed.im, quad.im, epsilon = 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gradient_channels_match_quadrature_on_test_function() {
        // Apply d/dz to f(r) Y_lm with f = r^2 e^{-r} at a fixed radius by
        // comparing the angular decomposition against the chain rule
        // d_z = cos(theta) d_r - sin(theta)/r d_theta.
        let l = 2u32;
        let m = 1i32;
        let r = 1.7;
        let f = |r: f64| r * r * (-r).exp();
        let fp = |r: f64| (2.0 * r - r * r) * (-r).exp();
        for (lp, mp, c, kind) in gradient_channels(VecComp::Z, l, m) {
            let radial = match kind {
                RadialKind::Raise => fp(r) - l as f64 * f(r) / r,
                RadialKind::Lower => fp(r) + (l as f64 + 1.0) * f(r) / r,
            };
            let want = c * radial;
            let got = sphere_quadrature(32, 64, |t, p| {
                let dz = t.cos() * fp(r) * sph_harm(l, m, t, p)
                    - t.sin() / r * f(r) * sph_harm_dtheta(l, m, t, p);
                sph_harm(lp, mp, t, p).conj() * dz
            });
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-10);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn gaunt_reproduces_direction_cosine() {
        // n_z = sqrt(4 pi / 3) Y_10: Gaunt contraction must equal the ladder
        // coefficient.
        let g = gaunt(2, 0, 1, 0, 1, 0);
        let expect = cz_plus(1, 0) / (4.0 * std::f64::consts::PI / 3.0).sqrt();
        assert_abs_diff_eq!(g, expect, epsilon = 1e-12);
        // Parity: odd total l vanishes.
        assert_eq!(gaunt(1, 0, 1, 0, 1, 0), 0.0);
        // m selection.
        assert_eq!(gaunt(2, 1, 1, 0, 1, 0), 0.0);
    }

    #[test]
    fn quadrupole_products_are_hermitian_and_traceful() {
        // Σ_i <l'm'|n_i n_i|lm> = δ_{ll'} δ_{mm'}.
        for l in 0u32..3 {
            for m in -(l as i32)..=(l as i32) {
                let mut trace = Complex64::new(0.0, 0.0);
                for comp in [VecComp::X, VecComp::Y, VecComp::Z] {
                    trace += direction_product_element(comp, comp, l, m, l, m);
                }
                assert_abs_diff_eq!(trace.re, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(trace.im, 0.0, epsilon = 1e-12);
            }
        }
        // <20|n_z n_z|00> = 2/(3 sqrt 5).
        let q = direction_product_element(VecComp::Z, VecComp::Z, 2, 0, 0, 0);
        assert_abs_diff_eq!(q.re, 2.0 / (3.0 * 5.0f64.sqrt()), epsilon = 1e-12);
    }
}
