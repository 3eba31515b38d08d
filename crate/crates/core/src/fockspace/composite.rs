//! Composite pair operators on the exact Fock space. Two labelings: the
//! anchor convention ties the label to the species-2 constituent and is
//! exactly orthonormal; the center-of-mass convention labels by the pair
//! centroid on the mass-refined grid, where orthonormality is obstructed
//! because each centroid only reaches the displacements in its residue
//! class.

use num_complex::Complex64;

use super::basis::LatticeFockSpace;
use super::operators::{field_operator, OperatorMatrix};
use super::pair::PairSpectrum;
use super::FockError;

/// How composite operators are labeled by position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositeLabeling {
    /// B^dag_a(z) = sum_y phi_a(y) psi1^dag(z+y) psi2^dag(z), z a lattice
    /// site. Exactly orthonormal on the vacuum for any placements.
    Anchor,
    /// C^dag_a(Z) = sum over the residue class of Z of phi_a(y)
    /// psi1^dag(Z + (m2/M) y) psi2^dag(Z - (m1/M) y), Z on the grid refined
    /// by the total mass. Honest but not orthonormal: each Z reaches only
    /// part of the relative wavefunction.
    CenterOfMass,
}

pub(crate) fn integer_mass(m: f64, label: &str) -> Result<i64, FockError> {
    if m <= 0.0 || m.fract() != 0.0 || m > 64.0 {
        return Err(FockError::InvalidRequest(format!(
            "{label} must be a small positive integer for mass-refined labeling, got {m}"
        )));
    }
    Ok(m as i64)
}

/// Displacements reachable from the centroid `z_idx` (in units of 1/M) on
/// the refined grid: the folded y in (-L/2, L/2] whose constituent sites
/// x1 = Z + (m2/M) y and x2 = Z - (m1/M) y land on the lattice. Returns
/// (y, x1, x2) with the sites wrapped onto the ring.
pub(crate) fn centroid_class(
    config: &super::lattice::LatticeConfig,
    m1: i64,
    m2: i64,
    z_idx: i64,
) -> Vec<(i64, usize, usize)> {
    let l = config.sites as i64;
    let m = m1 + m2;
    let mut class = Vec::new();
    for y in (-(l / 2) + 1)..=(l / 2) {
        if (z_idx - m1 * y).rem_euclid(m) != 0 {
            continue;
        }
        let x2 = (z_idx - m1 * y).div_euclid(m);
        class.push((y, config.wrap(x2 + y), config.wrap(x2)));
    }
    class
}

/// Creation operator of composite `alpha` at position `z`. For the anchor
/// labeling `z` must be a lattice site; for the center-of-mass labeling it
/// must lie on the grid refined by the total mass M = m1 + m2.
pub fn composite_operator(
    space: &LatticeFockSpace,
    spectrum: &PairSpectrum,
    labeling: CompositeLabeling,
    alpha: usize,
    z: f64,
) -> Result<OperatorMatrix, FockError> {
    if alpha >= spectrum.states.len() {
        return Err(FockError::InvalidRequest(format!(
            "bound state {alpha} not in the spectrum ({} levels)",
            spectrum.states.len()
        )));
    }
    let config = &space.config;
    let phi = &spectrum.states[alpha].amplitudes;
    // (weight, site of constituent 1, site of constituent 2) per term.
    let mut terms: Vec<(f64, usize, usize)> = Vec::new();
    match labeling {
        CompositeLabeling::Anchor => {
            let zi = z.round();
            if (z - zi).abs() > 1e-9 {
                return Err(FockError::OffGrid(format!(
                    "anchor position {z} is not a lattice site"
                )));
            }
            let z2 = config.wrap(zi as i64);
            for y in 0..config.sites {
                terms.push((phi[y], config.wrap(z2 as i64 + y as i64), z2));
            }
        }
        CompositeLabeling::CenterOfMass => {
            let m1 = integer_mass(config.mass1, "mass1")?;
            let m2 = integer_mass(config.mass2, "mass2")?;
            let m = m1 + m2;
            let mz = (z * m as f64).round();
            if (z * m as f64 - mz).abs() > 1e-9 {
                return Err(FockError::OffGrid(format!(
                    "centroid {z} is not on the 1/{m} refined grid"
                )));
            }
            // Only the residue class with integer constituent sites
            // contributes; the rest of the relative wavefunction is
            // unreachable from this centroid.
            for (y, x1, x2) in centroid_class(config, m1, m2, mz as i64) {
                terms.push((phi[config.wrap(y)], x1, x2));
            }
        }
    }

    let dim = space.dim();
    let mut op = OperatorMatrix::zero(dim);
    for &(weight, x1, x2) in &terms {
        if weight == 0.0 {
            continue;
        }
        let c1 = field_operator(space, 1, x1).dagger();
        let c2 = field_operator(space, 2, x2).dagger();
        op = op.add(&c1.compose(&c2).scale(Complex64::new(weight, 0.0)));
    }
    Ok(op)
}

/// Gram matrix of composite states and its distance from the identity.
#[derive(Clone, Debug)]
pub struct OrthonormalityReport {
    /// One label per row, naming the placement.
    pub labels: Vec<String>,
    /// Real Gram matrix <Psi_i | Psi_j>.
    pub gram: Vec<Vec<f64>>,
    /// max_ij |gram_ij - delta_ij|.
    pub max_deviation: f64,
}

fn vacuum_vector(space: &LatticeFockSpace) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); space.dim()];
    v[space.vacuum()] = Complex64::new(1.0, 0.0);
    v
}

/// Vacuum expectation of the commutator [B_a(z), B^dag_b(z')] over every
/// pair of placements: bound levels crossed with every position on the
/// labeling's grid. Returns the largest deviation from delta structure.
pub fn vacuum_commutator_check(
    space: &LatticeFockSpace,
    spectrum: &PairSpectrum,
    labeling: CompositeLabeling,
) -> Result<f64, FockError> {
    let refine = match labeling {
        CompositeLabeling::Anchor => 1,
        CompositeLabeling::CenterOfMass => {
            (integer_mass(space.config.mass1, "mass1")? + integer_mass(space.config.mass2, "mass2")?)
                as usize
        }
    };
    let vac = vacuum_vector(space);
    let mut states = Vec::new();
    for alpha in 0..spectrum.states.len() {
        for zi in 0..space.config.sites * refine {
            let z = zi as f64 / refine as f64;
            let op = composite_operator(space, spectrum, labeling, alpha, z)?;
            states.push(op.apply(&vac));
        }
    }
    // On the vacuum the commutator reduces to the overlap of one-composite
    // states: the annihilation half kills the vacuum.
    let mut max_dev: f64 = 0.0;
    for i in 0..states.len() {
        for j in 0..states.len() {
            let g: Complex64 =
                states[i].iter().zip(states[j].iter()).map(|(a, b)| a.conj() * b).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((g - Complex64::new(want, 0.0)).norm());
        }
    }
    Ok(max_dev)
}

/// Build one multi-composite state per placement list and report their Gram
/// matrix. Placements closer than the configured separation fail with
/// `SeparationViolated` unless `force` is set.
pub fn verify_orthonormality(
    space: &LatticeFockSpace,
    spectrum: &PairSpectrum,
    labeling: CompositeLabeling,
    placements: &[Vec<(usize, f64)>],
    force: bool,
) -> Result<OrthonormalityReport, FockError> {
    let required = space.config.separation_a as i64;
    if !force {
        for group in placements {
            for i in 0..group.len() {
                for j in (i + 1)..group.len() {
                    let a = space.config.wrap(group[i].1.round() as i64);
                    let b = space.config.wrap(group[j].1.round() as i64);
                    let distance = space.config.distance(a, b) as i64;
                    if distance < required {
                        return Err(FockError::SeparationViolated { a: i, b: j, distance, required });
                    }
                }
            }
        }
    }

    let vac = vacuum_vector(space);
    let mut labels = Vec::new();
    let mut states = Vec::new();
    for group in placements {
        let mut v = vac.clone();
        for &(alpha, z) in group {
            let op = composite_operator(space, spectrum, labeling, alpha, z)?;
            v = op.apply(&v);
        }
        labels.push(
            group
                .iter()
                .map(|(alpha, z)| format!("a{alpha}@{z}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        states.push(v);
    }

    let n = states.len();
    let mut gram = vec![vec![0.0; n]; n];
    let mut max_deviation: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let g: Complex64 =
                states[i].iter().zip(states[j].iter()).map(|(a, b)| a.conj() * b).sum();
            gram[i][j] = g.re;
            let want = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((g - Complex64::new(want, 0.0)).norm());
        }
    }
    Ok(OrthonormalityReport { labels, gram, max_deviation })
}
