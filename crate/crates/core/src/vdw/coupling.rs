//! Multipole coupling of two neutral composites: the four-label coupling
//! tensor, the dipole-dipole kernel, and first-order pair energies.
//!
//! The interaction of composites A and B separated by R is the sum of four
//! constituent Coulomb terms. Expanded about the two centers of mass in
//! powers of 1/R, the charge-charge term cancels for neutral composites,
//! the 1/R^3 term couples the two internal dipoles, and the 1/R^4 terms
//! couple each dipole to the other composite's quadrupole.

use num_complex::Complex64;

use super::VdwError;
use crate::atoms::matrix_elements::{dipole_matrix, COMPS};
use crate::atoms::model::AtomModel;
use crate::atoms::states::BoundState;
use crate::numerics::angular::direction_product_element;

/// Effective quadrupole charge of the internal coordinate. The constituents
/// sit at offsets +w1 y and -w2 y from the center of mass (w1 = m2/M,
/// w2 = m1/M), so the composite quadrupole is (e1 w1^2 + e2 w2^2) times the
/// single-coordinate tensor 3 y_i y_j - y^2 delta_ij.
pub fn quadrupole_charge(model: &AtomModel) -> f64 {
    let w1 = model.weight1();
    let w2 = model.weight2();
    model.e1 * w1 * w1 + model.e2 * w2 * w2
}

/// <a| Q_ij |b> with Q_ij = q (3 y_i y_j - y^2 delta_ij), Cartesian 3x3.
/// Traceless and symmetric; vanishes between two s states.
pub fn quadrupole_matrix(
    a: &BoundState,
    b: &BoundState,
    model: &AtomModel,
) -> [[Complex64; 3]; 3] {
    let radial = a.radial_integral(b, |r| r * r);
    let q = quadrupole_charge(model);
    let trace = if a.l == b.l && a.m == b.m { 1.0 } else { 0.0 };
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, ci) in COMPS.iter().enumerate() {
        for (j, cj) in COMPS.iter().enumerate() {
            let mut ang = 3.0 * direction_product_element(*ci, *cj, a.l, a.m, b.l, b.m);
            if i == j {
                ang -= trace;
            }
            out[i][j] = ang * q * radial;
        }
    }
    out
}

/// Dipole-dipole contraction v(x) = (x^2 d_a.d_b - 3 (x.d_a)(x.d_b))/x^5
/// between two fixed transition-dipole vectors. Rotating x and both dipole
/// vectors together leaves the value unchanged.
#[derive(Clone, Debug)]
pub struct DipoleDipoleKernel {
    pub d_a: [Complex64; 3],
    pub d_b: [Complex64; 3],
}

impl DipoleDipoleKernel {
    /// Kernel with d_a = <alpha|d|delta> and d_b = <beta|d|gamma>.
    pub fn from_states(
        alpha: &BoundState,
        delta: &BoundState,
        beta: &BoundState,
        gamma: &BoundState,
        model: &AtomModel,
    ) -> Self {
        DipoleDipoleKernel {
            d_a: dipole_matrix(alpha, delta, model),
            d_b: dipole_matrix(beta, gamma, model),
        }
    }

    pub fn evaluate(&self, x: [f64; 3]) -> Complex64 {
        let x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        let xa = dot_rc(x, self.d_a);
        let xb = dot_rc(x, self.d_b);
        let ab = dot_cc(self.d_a, self.d_b);
        (ab * x2 - 3.0 * xa * xb) / x2.powf(2.5)
    }
}

fn dot_rc(a: [f64; 3], b: [Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Bilinear (unconjugated) contraction: the tensor couples transition
/// elements, not amplitudes, so no factor is conjugated.
fn dot_cc(a: [Complex64; 3], b: [Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Pair coupling element G_{delta gamma; alpha beta}(R): composite A makes
/// the transition alpha -> delta, composite B makes beta -> gamma, with the
/// A center displaced by `separation` from the B center.
#[derive(Clone, Debug)]
pub struct CouplingTensor {
    /// Bra pair then ket pair: (delta, gamma; alpha, beta).
    pub labels: [String; 4],
    pub separation: [f64; 3],
    pub order: u32,
    /// Charge-charge term; exactly zero for neutral composites.
    pub monopole: Complex64,
    /// 1/R^3 term, included at order >= 1.
    pub dipole_dipole: Complex64,
    /// 1/R^4 terms, included at order >= 2.
    pub dipole_quadrupole: Complex64,
    pub quadrupole_dipole: Complex64,
    /// Sum of the included terms.
    pub value: Complex64,
    /// Set when R is below ten characteristic radii: the expansion still
    /// converges there but slowly, so treat the value as an estimate.
    pub near_field: bool,
}

/// Multipole expansion of the pair interaction between four given states.
/// Order 0 keeps the monopole term only, order 1 adds dipole-dipole, order
/// 2 adds the two dipole-quadrupole terms. Errs hard when R is inside three
/// characteristic radii, where the expansion has broken down.
pub fn coupling_tensor(
    delta: &BoundState,
    gamma: &BoundState,
    alpha: &BoundState,
    beta: &BoundState,
    model: &AtomModel,
    separation: [f64; 3],
    order: u32,
) -> Result<CouplingTensor, VdwError> {
    if order > 2 {
        return Err(VdwError::InvalidRequest(format!(
            "multipole order {order} not implemented; supported orders are 0 (monopole), 1 (dipole), 2 (dipole-quadrupole)"
        )));
    }
    if order >= 1 && !model.is_neutral() {
        return Err(VdwError::InvalidRequest(
            "multipole orders beyond the monopole are implemented for neutral composites only"
                .into(),
        ));
    }
    let r = (separation[0] * separation[0]
        + separation[1] * separation[1]
        + separation[2] * separation[2])
        .sqrt();
    let r0 = [delta, gamma, alpha, beta]
        .iter()
        .map(|s| s.radial_integral(s, |x| x))
        .fold(0.0f64, f64::max);
    if r < 3.0 * r0 {
        return Err(VdwError::SeparationTooSmall { separation: r, minimum: 3.0 * r0 });
    }
    let n = [separation[0] / r, separation[1] / r, separation[2] / r];

    // The four constituent Coulomb products carry charges e_i e_j whose sum
    // is (e1 + e2)^2: the monopole term survives only for charged pairs.
    let q_total = model.e1 + model.e2;
    let monopole = Complex64::new(q_total * q_total / r, 0.0);
    let mut value = monopole;

    let mut dipole_dipole = Complex64::new(0.0, 0.0);
    let mut dipole_quadrupole = Complex64::new(0.0, 0.0);
    let mut quadrupole_dipole = Complex64::new(0.0, 0.0);
    if order >= 1 {
        let d_a = dipole_matrix(delta, alpha, model);
        let d_b = dipole_matrix(gamma, beta, model);
        dipole_dipole = DipoleDipoleKernel { d_a, d_b }.evaluate(separation);
        value += dipole_dipole;
        if order >= 2 {
            let q_a = quadrupole_matrix(delta, alpha, model);
            let q_b = quadrupole_matrix(gamma, beta, model);
            // A's dipole in the gradient of B's quadrupole potential, and
            // the mirrored term with the internal direction reversed.
            dipole_quadrupole = dipole_quad_term(d_a, q_b, n) / r.powi(4);
            quadrupole_dipole = -dipole_quad_term(d_b, q_a, n) / r.powi(4);
            value += dipole_quadrupole + quadrupole_dipole;
        }
    }

    Ok(CouplingTensor {
        labels: [delta.label(), gamma.label(), alpha.label(), beta.label()],
        separation,
        order,
        monopole,
        dipole_dipole,
        dipole_quadrupole,
        quadrupole_dipole,
        value,
        near_field: r < 10.0 * r0,
    })
}

/// d.Q.n - (5/2)(n.Q.n)(d.n), the angular core of the dipole-quadrupole
/// energy d.grad(Q_ij n_i n_j / 2R^5).
fn dipole_quad_term(d: [Complex64; 3], q: [[Complex64; 3]; 3], n: [f64; 3]) -> Complex64 {
    let mut dqn = Complex64::new(0.0, 0.0);
    let mut nqn = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            dqn += d[i] * q[i][j] * n[j];
            nqn += n[i] * q[i][j] * n[j];
        }
    }
    dqn - 2.5 * nqn * dot_rc(n, d)
}

/// First-order pair energy. For identical labels this is the tensor
/// diagonal G_{alpha beta; alpha beta}. A pair of distinct states on
/// identical composites is exactly degenerate with its exchange partner
/// (beta, alpha), so first order in the 2x2 degenerate block gives
/// E1 = Re G_direct + |G_exchange|: the resonant branch survives even when
/// every diagonal moment vanishes.
pub fn first_order_energy(
    alpha: &BoundState,
    beta: &BoundState,
    model: &AtomModel,
    separation: [f64; 3],
    order: u32,
) -> Result<f64, VdwError> {
    let direct = coupling_tensor(alpha, beta, alpha, beta, model, separation, order)?;
    if alpha.n == beta.n && alpha.l == beta.l && alpha.m == beta.m {
        return Ok(direct.value.re);
    }
    let exchange = coupling_tensor(beta, alpha, alpha, beta, model, separation, order)?;
    Ok(direct.value.re + exchange.value.norm())
}
