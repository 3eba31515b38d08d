//! Complete contractions of an operator product.
//!
//! Every symbol expands into fermion legs: elementary symbols into one leg,
//! composites into two. The composite annihilator at position `z` expands to
//! `psi2(z) psi1(z+y)` weighted by the conjugate pair amplitude at the
//! internal displacement `y`; its adjoint expands in reverse order. A
//! contraction pairs each annihilator leg with a creator leg of the same
//! species standing to its right; products with an odd number of legs admit
//! none. The sign of a diagram is the parity of its pairing crossings.

use std::collections::BTreeMap;

use super::symbols::{OpKind, Product};
use super::WickError;

/// A leg of a symbol: `slot` indexes the symbol in the product, `leg` the
/// position within its expansion (0 for elementary symbols).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegRef {
    pub slot: usize,
    pub leg: usize,
}

/// One contraction line, always from an annihilator leg to a creator leg
/// standing further right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub annihilator: LegRef,
    pub creator: LegRef,
}

/// A complete contraction: its pairings, crossing-parity sign, symbolic
/// kernel factors, and whether it exchanges constituents between composites.
#[derive(Clone, Debug)]
pub struct ContractionDiagram {
    pub pairings: Vec<Pairing>,
    pub sign: f64,
    pub kernel: Vec<String>,
    /// Two composites share a single contraction between their displaced
    /// legs. The factor is a lattice convolution of two pair amplitudes, so
    /// it decays over the pair size; for composites separated by more than a
    /// few pair radii such diagrams are negligible, and evaluation can drop
    /// them on request. Direct position deltas between composites do not set
    /// this flag.
    pub suppressed: bool,
}

/// How a one-body probe attaches to the rest of the product in one diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProbeClass {
    /// Both probe legs contract with elementary fields.
    BothElementary,
    /// The probe annihilator reaches into a composite; the creator does not.
    CompositeKetSide,
    /// The probe creator reaches into a composite; the annihilator does not.
    CompositeBraSide,
    /// Both reach into composites that also contract with each other.
    CompositeBridge,
    /// Both reach into composites that never contract with each other.
    CompositeChain,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Leg {
    pub slot: usize,
    pub leg: usize,
    pub species: u8,
    pub creator: bool,
    /// Composite species-1 leg, displaced from the anchor by the internal
    /// variable of its symbol.
    pub displaced: bool,
    pub composite: bool,
}

/// Expands a product into its fermion legs, in operator order.
pub(crate) fn expand_legs(product: &Product) -> Vec<Leg> {
    let mut legs = Vec::new();
    for sym in &product.symbols {
        let slot = sym.slot;
        match sym.kind {
            OpKind::Psi1 => legs.push(elementary(slot, 1, false)),
            OpKind::Psi2 => legs.push(elementary(slot, 2, false)),
            OpKind::Psi1Dag => legs.push(elementary(slot, 1, true)),
            OpKind::Psi2Dag => legs.push(elementary(slot, 2, true)),
            OpKind::Phi => {
                legs.push(Leg { slot, leg: 0, species: 2, creator: false, displaced: false, composite: true });
                legs.push(Leg { slot, leg: 1, species: 1, creator: false, displaced: true, composite: true });
            }
            OpKind::PhiDag => {
                legs.push(Leg { slot, leg: 0, species: 1, creator: true, displaced: true, composite: true });
                legs.push(Leg { slot, leg: 1, species: 2, creator: true, displaced: false, composite: true });
            }
        }
    }
    legs
}

/// Enumerates every complete contraction of the product. Products with an
/// odd number of legs return an empty list.
pub fn enumerate_contractions(product: &Product) -> Vec<ContractionDiagram> {
    let legs = expand_legs(product);
    if legs.len() % 2 != 0 {
        return Vec::new();
    }
    let mut matchings = Vec::new();
    let mut paired = vec![false; legs.len()];
    let mut pairs = Vec::new();
    search(&legs, &mut paired, &mut pairs, &mut matchings);
    matchings
        .into_iter()
        .map(|pairs| build_diagram(product, &legs, &pairs))
        .collect()
}

fn elementary(slot: usize, species: u8, creator: bool) -> Leg {
    Leg { slot, leg: 0, species, creator, displaced: false, composite: false }
}

fn search(
    legs: &[Leg],
    paired: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(i) = paired.iter().position(|p| !p) else {
        out.push(pairs.clone());
        return;
    };
    if legs[i].creator {
        // No annihilator remains to its left; this branch is dead.
        return;
    }
    for j in (i + 1)..legs.len() {
        if paired[j] || !legs[j].creator || legs[j].species != legs[i].species {
            continue;
        }
        paired[i] = true;
        paired[j] = true;
        pairs.push((i, j));
        search(legs, paired, pairs, out);
        pairs.pop();
        paired[i] = false;
        paired[j] = false;
    }
}

fn crossing_sign(pairs: &[(usize, usize)]) -> f64 {
    let mut crossings = 0;
    for (a, &(i1, j1)) in pairs.iter().enumerate() {
        for &(i2, j2) in &pairs[a + 1..] {
            let (i1, j1, i2, j2) = if i1 < i2 { (i1, j1, i2, j2) } else { (i2, j2, i1, j1) };
            if i1 < i2 && i2 < j1 && j1 < j2 {
                crossings += 1;
            }
        }
    }
    if crossings % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn build_diagram(product: &Product, legs: &[Leg], pairs: &[(usize, usize)]) -> ContractionDiagram {
    let pairings = pairs
        .iter()
        .map(|&(i, j)| Pairing {
            annihilator: LegRef { slot: legs[i].slot, leg: legs[i].leg },
            creator: LegRef { slot: legs[j].slot, leg: legs[j].leg },
        })
        .collect();
    let (kernel, suppressed) = kernel_factors(product, legs, pairs);
    ContractionDiagram { pairings, sign: crossing_sign(pairs), kernel, suppressed }
}

/// Symbolic kernel of one diagram, with internal displacements substituted
/// away wherever a single delta fixes them.
fn kernel_factors(product: &Product, legs: &[Leg], pairs: &[(usize, usize)]) -> (Vec<String>, bool) {
    let arg = |slot: usize| product.symbols[slot].arg.clone();
    let label = |slot: usize| product.symbols[slot].label.clone().unwrap_or_default();
    let conj_mark = |slot: usize| if product.symbols[slot].kind == OpKind::Phi { "*" } else { "" };

    // amp_arg[slot]: display argument of the slot's pair amplitude, filled in
    // as deltas resolve its internal displacement.
    let mut amp_arg: BTreeMap<usize, String> = BTreeMap::new();
    let mut deltas: Vec<String> = Vec::new();
    // Composite-composite links, keyed by slot pair.
    let mut links: BTreeMap<(usize, usize), Vec<bool>> = BTreeMap::new();
    // Displaced-displaced single links, as (from slot, to slot) for chaining.
    let mut chain_edges: Vec<(usize, usize)> = Vec::new();

    for &(i, j) in pairs {
        let (a, b) = (legs[i], legs[j]);
        match (a.composite, b.composite) {
            (false, false) => deltas.push(format!("delta({},{})", arg(a.slot), arg(b.slot))),
            (true, false) | (false, true) => {
                let (c, e) = if a.composite { (a, b) } else { (b, a) };
                if c.displaced {
                    // delta(z + y, x) fixes y = x - z inside the amplitude.
                    amp_arg.insert(c.slot, format!("{}-{}", arg(e.slot), arg(c.slot)));
                } else {
                    deltas.push(format!("delta({},{})", arg(c.slot), arg(e.slot)));
                }
            }
            (true, true) => {
                let key = (a.slot.min(b.slot), a.slot.max(b.slot));
                let displaced = a.displaced && b.displaced;
                links.entry(key).or_default().push(displaced);
                if displaced {
                    chain_edges.push((a.slot, b.slot));
                }
            }
        }
    }

    let mut factors = Vec::new();
    let mut consumed: Vec<usize> = Vec::new();
    let mut suppressed = false;
    for (&(s, t), kinds) in &links {
        if kinds.len() == 2 {
            // Both legs shared: the internal sum collapses to a level delta.
            factors.push(format!("delta({},{})", arg(s), arg(t)));
            factors.push(format!("delta_level[{},{}]", label(s), label(t)));
            consumed.push(s);
            consumed.push(t);
        } else if kinds[0] {
            suppressed = true;
        } else {
            // Anchor legs linked directly: a plain position delta.
            deltas.push(format!("delta({},{})", arg(s), arg(t)));
        }
    }

    // Chain the surviving displaced-displaced links: delta(z_a + y_a, z_b + y_b)
    // expresses y_b through y_a, leaving one summed displacement per link.
    // Each composite owns a single displaced leg, so links never chain
    // further.
    for &(from, to) in &chain_edges {
        if consumed.contains(&from) || consumed.contains(&to) {
            continue;
        }
        amp_arg.insert(from, format!("y{from}"));
        amp_arg.insert(to, format!("y{from}+{}-{}", arg(from), arg(to)));
    }

    for sym in &product.symbols {
        if !sym.kind.is_composite() || consumed.contains(&sym.slot) {
            continue;
        }
        let own = format!("y{}", sym.slot);
        let expr = amp_arg.get(&sym.slot).cloned().unwrap_or(own.clone());
        if expr == own {
            factors.push(format!("sum_{own}"));
        }
        factors.push(format!("phi{}[{}]({})", conj_mark(sym.slot), label(sym.slot), expr));
    }
    factors.extend(deltas);
    (factors, suppressed)
}

/// Classifies how the probe pair `(creator_slot, annihilator_slot)` attaches
/// to the rest of the product in one diagram. Both slots must hold
/// elementary symbols.
pub fn classify_probe(
    product: &Product,
    diagram: &ContractionDiagram,
    creator_slot: usize,
    annihilator_slot: usize,
) -> Result<ProbeClass, WickError> {
    for slot in [creator_slot, annihilator_slot] {
        let sym = product
            .symbols
            .get(slot)
            .ok_or_else(|| WickError::InvalidRequest(format!("no symbol at slot {slot}")))?;
        if sym.kind.is_composite() {
            return Err(WickError::InvalidRequest(format!(
                "probe slot {slot} holds a composite symbol"
            )));
        }
    }
    let partner_of_creator = diagram
        .pairings
        .iter()
        .find(|p| p.creator.slot == creator_slot)
        .map(|p| p.annihilator.slot);
    let partner_of_annihilator = diagram
        .pairings
        .iter()
        .find(|p| p.annihilator.slot == annihilator_slot)
        .map(|p| p.creator.slot);
    let (Some(bra_side), Some(ket_side)) = (partner_of_creator, partner_of_annihilator) else {
        return Err(WickError::InvalidRequest(
            "probe legs are not contracted in this diagram".to_string(),
        ));
    };
    let bra_composite = product.symbols[bra_side].kind.is_composite();
    let ket_composite = product.symbols[ket_side].kind.is_composite();
    Ok(match (bra_composite, ket_composite) {
        (false, false) => ProbeClass::BothElementary,
        (false, true) => ProbeClass::CompositeKetSide,
        (true, false) => ProbeClass::CompositeBraSide,
        (true, true) => {
            let linked = diagram.pairings.iter().any(|p| {
                let (s, t) = (p.annihilator.slot, p.creator.slot);
                (s == bra_side && t == ket_side) || (s == ket_side && t == bra_side)
            });
            if linked {
                ProbeClass::CompositeBridge
            } else {
                ProbeClass::CompositeChain
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wick::symbols::Product;
    use std::collections::BTreeMap;

    #[test]
    fn elementary_pair_gives_one_delta_diagram() {
        let product = Product::parse("psi1(x) psi1+(y)").unwrap();
        let diagrams = enumerate_contractions(&product);
        assert_eq!(diagrams.len(), 1);
        assert_eq!(diagrams[0].sign, 1.0);
        assert_eq!(diagrams[0].kernel, vec!["delta(x,y)".to_string()]);
        assert!(!diagrams[0].suppressed);
    }

    #[test]
    fn odd_leg_products_admit_no_contractions() {
        let product = Product::parse("psi1(x) psi1+(y) psi1(z)").unwrap();
        assert!(enumerate_contractions(&product).is_empty());
        // Three symbols but four legs: the composite counts twice.
        let product = Product::parse("phi[0](z) psi2+(a) psi1+(b)").unwrap();
        assert_eq!(enumerate_contractions(&product).len(), 1);
    }

    #[test]
    fn crossed_pairings_flip_the_sign() {
        let product = Product::parse("psi1(x) psi1(y) psi1+(u) psi1+(w)").unwrap();
        let diagrams = enumerate_contractions(&product);
        assert_eq!(diagrams.len(), 2);
        let mut signs: Vec<f64> = diagrams.iter().map(|d| d.sign).collect();
        signs.sort_by(f64::total_cmp);
        assert_eq!(signs, vec![-1.0, 1.0]);
        for d in &diagrams {
            let crossed = d.pairings[0].creator.slot == 2;
            assert_eq!(d.sign, if crossed { -1.0 } else { 1.0 });
        }
    }

    #[test]
    fn composite_overlap_collapses_to_level_delta() {
        let product = Product::parse("phi[a](z) phi+[b](w)").unwrap();
        let diagrams = enumerate_contractions(&product);
        assert_eq!(diagrams.len(), 1);
        let d = &diagrams[0];
        assert_eq!(d.sign, 1.0);
        assert!(!d.suppressed);
        assert!(d.kernel.contains(&"delta(z,w)".to_string()));
        assert!(d.kernel.contains(&"delta_level[a,b]".to_string()));
    }

    #[test]
    fn composite_against_constituents_reads_off_the_amplitude() {
        let product = Product::parse("phi[a](z) psi2+(x2) psi1+(x1)").unwrap();
        let diagrams = enumerate_contractions(&product);
        assert_eq!(diagrams.len(), 1);
        let d = &diagrams[0];
        assert!(d.kernel.contains(&"phi*[a](x1-z)".to_string()));
        assert!(d.kernel.contains(&"delta(z,x2)".to_string()));
    }

    #[test]
    fn probe_between_composites_realizes_all_five_classes() {
        let mut product = Product::new();
        product
            .push(OpKind::Psi2, "s")
            .push(OpKind::Psi1, "w")
            .push_composite(OpKind::Phi, "a", "z")
            .push(OpKind::Psi1Dag, "u")
            .push(OpKind::Psi1, "v")
            .push_composite(OpKind::PhiDag, "b", "zp")
            .push(OpKind::Psi1Dag, "wp")
            .push(OpKind::Psi2Dag, "sp");
        let diagrams = enumerate_contractions(&product);
        assert_eq!(diagrams.len(), 8);
        let mut counts: BTreeMap<ProbeClass, usize> = BTreeMap::new();
        for d in &diagrams {
            let class = classify_probe(&product, d, 3, 4).unwrap();
            *counts.entry(class).or_default() += 1;
        }
        assert_eq!(counts.len(), 5);
        assert_eq!(counts[&ProbeClass::BothElementary], 2);
        assert_eq!(counts[&ProbeClass::CompositeKetSide], 2);
        assert_eq!(counts[&ProbeClass::CompositeBraSide], 2);
        assert_eq!(counts[&ProbeClass::CompositeBridge], 1);
        assert_eq!(counts[&ProbeClass::CompositeChain], 1);
        // When the probe contracts with the external constituents, the two
        // composites are left to overlap each other: once through both legs
        // (a full overlap, kept) and once through a single constituent
        // exchange (suppressed). The bridge and chain diagrams contract the
        // composites against the probe instead and carry no exchange link.
        let suppressed: Vec<ProbeClass> = diagrams
            .iter()
            .filter(|d| d.suppressed)
            .map(|d| classify_probe(&product, d, 3, 4).unwrap())
            .collect();
        assert_eq!(suppressed, vec![ProbeClass::BothElementary]);
    }

    #[test]
    fn constituent_exchange_between_composites_is_flagged() {
        // Two composites against two spread-out constituent pairs: the
        // exchange matchings route one constituent of each composite into the
        // other, linking their displaced legs.
        let product = Product::parse("phi[a](z) phi[b](w) psi2+(p) psi1+(q) psi2+(r) psi1+(t)").unwrap();
        let diagrams = enumerate_contractions(&product);
        assert!(!diagrams.is_empty());
        assert!(diagrams.iter().all(|d| !d.suppressed));
        // A mixed overlap, composite against composite and constituents.
        let product = Product::parse("phi[a](z) phi[b](w) phi+[c](zp) psi2+(x2) psi1+(x1)").unwrap();
        let diagrams = enumerate_contractions(&product);
        let flagged: Vec<_> = diagrams.iter().filter(|d| d.suppressed).collect();
        assert!(!flagged.is_empty());
        for d in &flagged {
            let exchange = d
                .pairings
                .iter()
                .filter(|p| {
                    p.annihilator.slot != p.creator.slot
                        && product.symbols[p.annihilator.slot].kind.is_composite()
                        && product.symbols[p.creator.slot].kind.is_composite()
                })
                .count();
            assert!(exchange >= 1);
        }
    }
}
