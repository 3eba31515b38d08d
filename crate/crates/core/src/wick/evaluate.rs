//! Numeric evaluation of contracted products.
//!
//! Positions bind the formal variables to ring sites; the pair spectrum
//! supplies the composite amplitudes. Each diagram turns its pairings into
//! congruences `base_i + y_i = base_j + y_j (mod L)` over the composites'
//! internal displacements, solved by a union-find with offsets. Surviving
//! free displacements are summed over the ring, one independent sum per
//! connected group, so a diagram costs at most L work per composite.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::fockspace::PairSpectrum;

use super::contraction::{enumerate_contractions, expand_legs, Leg};
use super::symbols::{OpKind, Product};
use super::WickError;

/// Numeric value of a fully contracted product.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue {
    pub value: Complex64,
}

/// Evaluates the vacuum expectation value of the product, all diagrams
/// included.
pub fn evaluate_vev(
    product: &Product,
    positions: &HashMap<String, i64>,
    spectrum: &PairSpectrum,
) -> Result<KernelValue, WickError> {
    evaluate_vev_filtered(product, positions, spectrum, true)
}

/// Evaluates the vacuum expectation value, optionally dropping diagrams that
/// exchange constituents between composites.
pub fn evaluate_vev_filtered(
    product: &Product,
    positions: &HashMap<String, i64>,
    spectrum: &PairSpectrum,
    include_suppressed: bool,
) -> Result<KernelValue, WickError> {
    if spectrum.states.is_empty() {
        return Err(WickError::InvalidRequest("empty pair spectrum".to_string()));
    }
    let sites = spectrum.states[0].amplitudes.len() as i64;
    let legs = expand_legs(product);
    let levels = composite_levels(product, spectrum)?;
    let mut value = Complex64::new(0.0, 0.0);
    for diagram in enumerate_contractions(product) {
        if diagram.suppressed && !include_suppressed {
            continue;
        }
        let mut forest = OffsetForest::new(product.len(), sites);
        let mut dead = false;
        for pairing in &diagram.pairings {
            let a = leg_of(&legs, pairing.annihilator.slot, pairing.annihilator.leg);
            let b = leg_of(&legs, pairing.creator.slot, pairing.creator.leg);
            let (node_a, base_a) = position_of(product, a, positions)?;
            let (node_b, base_b) = position_of(product, b, positions)?;
            if !forest.merge(node_a, node_b, base_b - base_a) {
                dead = true;
                break;
            }
        }
        if dead {
            continue;
        }
        value += Complex64::new(diagram.sign, 0.0) * amplitude_product(product, &levels, &mut forest, spectrum);
    }
    Ok(KernelValue { value })
}

fn leg_of<'a>(legs: &'a [Leg], slot: usize, leg: usize) -> &'a Leg {
    legs.iter()
        .find(|l| l.slot == slot && l.leg == leg)
        .expect("pairing references a leg of the product")
}

/// Position of a leg as (node, base): node 0 is the grounded root for
/// external positions, node slot+1 carries a composite's internal
/// displacement.
fn position_of(
    product: &Product,
    leg: &Leg,
    positions: &HashMap<String, i64>,
) -> Result<(usize, i64), WickError> {
    let arg = &product.symbols[leg.slot].arg;
    let base = *positions
        .get(arg)
        .ok_or_else(|| WickError::UnboundVariable(arg.clone()))?;
    let node = if leg.displaced { leg.slot + 1 } else { 0 };
    Ok((node, base))
}

fn composite_levels(product: &Product, spectrum: &PairSpectrum) -> Result<Vec<Option<usize>>, WickError> {
    product
        .symbols
        .iter()
        .map(|sym| {
            if !sym.kind.is_composite() {
                return Ok(None);
            }
            let label = sym.label.as_deref().unwrap_or_default();
            let level: usize = label.parse().map_err(|_| {
                WickError::InvalidRequest(format!(
                    "composite label '{label}' is not a level index"
                ))
            })?;
            if level >= spectrum.states.len() {
                return Err(WickError::InvalidRequest(format!(
                    "level {level} outside the spectrum of {} pair states",
                    spectrum.states.len()
                )));
            }
            Ok(Some(level))
        })
        .collect()
}

/// Product of pair amplitudes over the diagram's resolved displacements:
/// grounded composites contribute a single amplitude, each free group an
/// L-term convolution.
fn amplitude_product(
    product: &Product,
    levels: &[Option<usize>],
    forest: &mut OffsetForest,
    spectrum: &PairSpectrum,
) -> Complex64 {
    let sites = forest.modulus;
    let mut grounded = Complex64::new(1.0, 0.0);
    let mut groups: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for sym in &product.symbols {
        let Some(level) = levels[sym.slot] else { continue };
        let (root, offset) = forest.find(sym.slot + 1);
        if root == 0 {
            grounded *= amplitude(product, sym.slot, level, offset, spectrum);
        } else {
            groups.entry(root).or_default().push((sym.slot, offset));
        }
    }
    for members in groups.values() {
        let mut sum = Complex64::new(0.0, 0.0);
        for t in 0..sites {
            let mut term = Complex64::new(1.0, 0.0);
            for &(slot, offset) in members {
                term *= amplitude(product, slot, levels[slot].unwrap(), offset + t, spectrum);
            }
            sum += term;
        }
        grounded *= sum;
    }
    grounded
}

fn amplitude(
    product: &Product,
    slot: usize,
    level: usize,
    displacement: i64,
    spectrum: &PairSpectrum,
) -> Complex64 {
    let amps = &spectrum.states[level].amplitudes;
    let sites = amps.len() as i64;
    let value = Complex64::new(amps[displacement.rem_euclid(sites) as usize], 0.0);
    if product.symbols[slot].kind == OpKind::Phi {
        value.conj()
    } else {
        value
    }
}

/// Union-find over displacement variables with additive offsets mod L.
/// Node 0 is grounded at zero; `value(node) = value(root) + offset`.
struct OffsetForest {
    parent: Vec<usize>,
    offset: Vec<i64>,
    modulus: i64,
}

impl OffsetForest {
    fn new(symbols: usize, modulus: i64) -> Self {
        OffsetForest {
            parent: (0..=symbols).collect(),
            offset: vec![0; symbols + 1],
            modulus,
        }
    }

    fn find(&mut self, x: usize) -> (usize, i64) {
        if self.parent[x] == x {
            return (x, 0);
        }
        let (root, above) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.offset[x] = (self.offset[x] + above).rem_euclid(self.modulus);
        (root, self.offset[x])
    }

    /// Imposes `value(a) - value(b) = delta (mod L)`; false on contradiction.
    fn merge(&mut self, a: usize, b: usize, delta: i64) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        // The constraint in terms of roots: value(ra) - value(rb) = need.
        let need = (delta + ob - oa).rem_euclid(self.modulus);
        if ra == rb {
            return need == 0;
        }
        // Ground wins as root so bound displacements stay recognizable.
        if ra == 0 || (rb != 0 && ra < rb) {
            self.parent[rb] = ra;
            self.offset[rb] = (-need).rem_euclid(self.modulus);
        } else {
            self.parent[ra] = rb;
            self.offset[ra] = need;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::basis::enumerate_basis;
    use crate::fockspace::composite::composite_operator;
    use crate::fockspace::operators::field_operator;
    use crate::fockspace::pair::solve_pair_problem;
    use crate::fockspace::{CompositeLabeling, LatticeConfig, OperatorMatrix, PairPotential};
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn test_config(sites: usize, depth: f64) -> LatticeConfig {
        LatticeConfig::new(sites, PairPotential::square_well(depth, 1))
    }

    fn positions(entries: &[(&str, i64)]) -> HashMap<String, i64> {
        entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    /// Dense Fock-space value of the same product: compose the operators on
    /// the full lattice space and take the vacuum diagonal element.
    fn oracle_vev(
        product: &Product,
        positions: &HashMap<String, i64>,
        config: &LatticeConfig,
        spectrum: &PairSpectrum,
    ) -> Complex64 {
        let space = enumerate_basis(config, config.sites, config.sites).unwrap();
        let sites = config.sites as i64;
        let mut acc = OperatorMatrix::identity(space.dim());
        for sym in &product.symbols {
            let pos = positions[&sym.arg];
            let site = pos.rem_euclid(sites) as usize;
            let matrix = match sym.kind {
                OpKind::Psi1 => field_operator(&space, 1, site),
                OpKind::Psi2 => field_operator(&space, 2, site),
                OpKind::Psi1Dag => field_operator(&space, 1, site).dagger(),
                OpKind::Psi2Dag => field_operator(&space, 2, site).dagger(),
                OpKind::Phi | OpKind::PhiDag => {
                    let level: usize = sym.label.as_deref().unwrap().parse().unwrap();
                    let creator = composite_operator(
                        &space,
                        spectrum,
                        CompositeLabeling::Anchor,
                        level,
                        site as f64,
                    )
                    .unwrap();
                    if sym.kind == OpKind::Phi {
                        creator.dagger()
                    } else {
                        creator
                    }
                }
            };
            acc = acc.compose(&matrix);
        }
        acc.entry(space.vacuum(), space.vacuum())
    }

    #[test]
    fn single_pair_reduces_to_a_site_delta() {
        let config = test_config(4, 5.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let product = Product::parse("psi1(x) psi1+(y)").unwrap();
        let same = evaluate_vev(&product, &positions(&[("x", 2), ("y", 2)]), &spectrum).unwrap();
        let different = evaluate_vev(&product, &positions(&[("x", 2), ("y", 3)]), &spectrum).unwrap();
        assert_eq!(same.value, Complex64::new(1.0, 0.0));
        assert_eq!(different.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn unbound_variables_are_reported() {
        let config = test_config(4, 5.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let product = Product::parse("psi1(x) psi1+(y)").unwrap();
        let err = evaluate_vev(&product, &positions(&[("x", 2)]), &spectrum).unwrap_err();
        assert!(matches!(err, WickError::UnboundVariable(ref v) if v == "y"));
    }

    #[test]
    fn diagram_count_is_factorial_in_the_pair_number() {
        let mut expected = 1usize;
        for n in 1..=4usize {
            expected *= n;
            let mut product = Product::new();
            for i in 0..n {
                product.push(OpKind::Psi1, &format!("x{i}"));
            }
            for i in 0..n {
                product.push(OpKind::Psi1Dag, &format!("u{i}"));
            }
            assert_eq!(enumerate_contractions(&product).len(), expected);
        }
    }

    #[test]
    fn composite_normalization_is_an_exact_double_delta() {
        let config = test_config(6, 8.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        assert!(spectrum.states.len() >= 2);
        for (alpha, beta, z, zp, expect) in [
            (0usize, 0usize, 2i64, 2i64, 1.0),
            (1, 1, 4, 4, 1.0),
            (0, 0, 2, 3, 0.0),
            (0, 1, 2, 2, 0.0),
        ] {
            let mut product = Product::new();
            product
                .push_composite(OpKind::Phi, &alpha.to_string(), "z")
                .push_composite(OpKind::PhiDag, &beta.to_string(), "w");
            let value = evaluate_vev(&product, &positions(&[("z", z), ("w", zp)]), &spectrum)
                .unwrap()
                .value;
            assert!(
                (value - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "<phi[{alpha}]({z}) phi+[{beta}]({zp})> = {value}, expected {expect}"
            );
        }
    }

    #[test]
    fn composite_against_constituents_tracks_the_amplitude() {
        let config = test_config(8, 12.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let product = Product::parse("phi[0](z) psi2+(x2) psi1+(x1)").unwrap();
        // Anchored at the species-2 constituent: the value is minus the pair
        // amplitude at the constituent separation (one fermion crossing).
        for x1 in 0..8i64 {
            let value = evaluate_vev(&product, &positions(&[("z", 3), ("x2", 3), ("x1", x1)]), &spectrum)
                .unwrap()
                .value;
            let expected = -spectrum.states[0].amplitudes[(x1 - 3).rem_euclid(8) as usize];
            assert!((value - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
        // Anchor mismatch kills the diagram entirely.
        let off = evaluate_vev(&product, &positions(&[("z", 3), ("x2", 4), ("x1", 4)]), &spectrum)
            .unwrap()
            .value;
        assert_eq!(off, Complex64::new(0.0, 0.0));
        // Far separation survives only through the exponential tail.
        let far = evaluate_vev(&product, &positions(&[("z", 3), ("x2", 3), ("x1", 7)]), &spectrum)
            .unwrap()
            .value;
        assert!(far.norm() < 1e-2);
    }

    #[test]
    fn adjacent_same_species_swap_flips_the_sign() {
        let config = test_config(4, 5.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let bound = positions(&[("x", 0), ("y", 1), ("u", 0), ("w", 1)]);
        let product = Product::parse("psi1(x) psi1(y) psi1+(u) psi1+(w)").unwrap();
        let swapped = Product::parse("psi1(y) psi1(x) psi1+(u) psi1+(w)").unwrap();
        let a = evaluate_vev(&product, &bound, &spectrum).unwrap().value;
        let b = evaluate_vev(&swapped, &bound, &spectrum).unwrap().value;
        assert!((a + b).norm() < 1e-15);
        assert!(a.norm() > 0.5);
    }

    #[test]
    fn daggered_reversed_product_conjugates_the_value() {
        let config = test_config(4, 4.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let product = Product::parse("psi2(s) phi[0](z) psi1+(u) psi1(v) phi+[0](w) psi2+(t)").unwrap();
        let mut reversed = Product::new();
        for sym in product.symbols.iter().rev() {
            let kind = match sym.kind {
                OpKind::Psi1 => OpKind::Psi1Dag,
                OpKind::Psi1Dag => OpKind::Psi1,
                OpKind::Psi2 => OpKind::Psi2Dag,
                OpKind::Psi2Dag => OpKind::Psi2,
                OpKind::Phi => OpKind::PhiDag,
                OpKind::PhiDag => OpKind::Phi,
            };
            if kind.is_composite() {
                reversed.push_composite(kind, sym.label.as_deref().unwrap(), &sym.arg);
            } else {
                reversed.push(kind, &sym.arg);
            }
        }
        // Positions kill one of the two diagrams so the value cannot cancel.
        let bound = positions(&[("s", 1), ("z", 2), ("u", 3), ("v", 3), ("w", 1), ("t", 2)]);
        let a = evaluate_vev(&product, &bound, &spectrum).unwrap().value;
        let b = evaluate_vev(&reversed, &bound, &spectrum).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14);
        assert!(a.norm() > 1e-4);
    }

    #[test]
    fn random_products_match_the_dense_oracle() {
        let mut rng = StdRng::seed_from_u64(0x00c0_ffee);
        let mut nonzero = 0usize;
        for round in 0..200 {
            let sites = if rng.gen_bool(0.5) { 3usize } else { 4 };
            let config = test_config(sites, 4.0 + rng.gen::<f64>() * 4.0);
            let spectrum = solve_pair_problem(&config).unwrap();
            let levels = spectrum.states.len().min(2);

            // Creator positions mirror the annihilators' within each species
            // so most samples sit away from the trivial zero; a fifth redraw
            // independently to keep vanishing values covered too.
            let pairs1 = rng.gen_range(0..=2usize);
            let pairs2 = rng.gen_range(0..=1usize);
            let composites = rng.gen_range(0..=1usize);
            if pairs1 + pairs2 + composites == 0 {
                continue;
            }
            let mirror = rng.gen_bool(0.8);
            let mut pos1: Vec<i64> = (0..pairs1).map(|_| rng.gen_range(0..sites as i64)).collect();
            let mut pos2: Vec<i64> = (0..pairs2).map(|_| rng.gen_range(0..sites as i64)).collect();
            let mut posc: Vec<(usize, i64)> = (0..composites)
                .map(|_| (rng.gen_range(0..levels), rng.gen_range(0..sites as i64)))
                .collect();
            let mut annihilators: Vec<(OpKind, Option<usize>, i64)> = Vec::new();
            for &p in &pos1 {
                annihilators.push((OpKind::Psi1, None, p));
            }
            for &p in &pos2 {
                annihilators.push((OpKind::Psi2, None, p));
            }
            for &(l, p) in &posc {
                annihilators.push((OpKind::Phi, Some(l), p));
            }
            if mirror {
                pos1.shuffle(&mut rng);
                pos2.shuffle(&mut rng);
            } else {
                for p in pos1.iter_mut().chain(pos2.iter_mut()) {
                    *p = rng.gen_range(0..sites as i64);
                }
                for (l, p) in posc.iter_mut() {
                    *l = rng.gen_range(0..levels);
                    *p = rng.gen_range(0..sites as i64);
                }
            }
            let mut creators: Vec<(OpKind, Option<usize>, i64)> = Vec::new();
            for &p in &pos1 {
                creators.push((OpKind::Psi1Dag, None, p));
            }
            for &p in &pos2 {
                creators.push((OpKind::Psi2Dag, None, p));
            }
            for &(l, p) in &posc {
                creators.push((OpKind::PhiDag, Some(l), p));
            }
            annihilators.shuffle(&mut rng);
            creators.shuffle(&mut rng);
            let mut symbols = annihilators;
            symbols.extend(creators);
            if round % 4 == 0 {
                // Fully random order: often zero, still a valid cross-check.
                symbols.shuffle(&mut rng);
            }

            let mut product = Product::new();
            let mut bound = HashMap::new();
            for (i, (kind, level, pos)) in symbols.iter().enumerate() {
                let var = format!("p{i}");
                // Whole-ring offsets exercise the wrapping on both sides.
                bound.insert(var.clone(), pos + sites as i64 * rng.gen_range(-1..=1));
                match level {
                    Some(l) => product.push_composite(*kind, &l.to_string(), &var),
                    None => product.push(*kind, &var),
                };
            }

            let engine = evaluate_vev(&product, &bound, &spectrum).unwrap().value;
            let oracle = oracle_vev(&product, &bound, &config, &spectrum);
            assert!(
                (engine - oracle).norm() < 1e-12,
                "round {round}: engine {engine} vs oracle {oracle} for {product}"
            );
            if engine.norm() > 1e-9 {
                nonzero += 1;
            }
        }
        assert!(nonzero > 80, "only {nonzero} of the samples were nonzero");
    }

    #[test]
    fn dropping_exchange_diagrams_changes_only_the_overlap_tail() {
        let config = test_config(8, 12.0);
        let spectrum = solve_pair_problem(&config).unwrap();
        let product = Product::parse("phi[0](z) phi[0](w) phi+[0](zp) psi2+(x2) psi1+(x1)").unwrap();
        // Composites far apart: the exchange diagrams carry amplitude tails.
        let bound = positions(&[("z", 0), ("w", 4), ("zp", 0), ("x2", 4), ("x1", 5)]);
        let all = evaluate_vev(&product, &bound, &spectrum).unwrap().value;
        let kept = evaluate_vev_filtered(&product, &bound, &spectrum, false).unwrap().value;
        assert!((all - kept).norm() < 1e-3);
        assert!(kept.norm() > 0.02);
    }
}
