//! Symbolic form of the dressed fields on the auxiliary space.
//!
//! The dressing trades each elementary field for its auxiliary-space image:
//!
//! ```text
//! psi~1(v) = chi1(v) + sum_y Phi(v, y) chi2+(y)
//! psi~2(w) = chi2(w) - sum_y Phi(y, w) chi1+(y)
//! ```
//!
//! where `Phi(x1, x2)` is the pair field, a sum of boson modes weighted by
//! the pair amplitudes, and the relative sign is fixed by requiring the
//! dressed fields to anticommute. Products map factor by factor. The
//! anticommutators close in this small algebra: the pair fields commute with
//! everything in sight, so each cross term reduces to a fermion delta, and
//! the two surviving terms cancel.

use std::collections::BTreeMap;
use std::fmt;

/// One factor of an auxiliary-space term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AuxFactor {
    /// Leftover elementary fermion.
    Chi { species: u8, dagger: bool, arg: String },
    /// Pair field at constituent positions (species 1 first).
    PairField { dagger: bool, first: String, second: String },
}

impl AuxFactor {
    fn substitute(&mut self, from: &str, to: &str) {
        match self {
            AuxFactor::Chi { arg, .. } => {
                if arg == from {
                    *arg = to.to_string();
                }
            }
            AuxFactor::PairField { first, second, .. } => {
                if first == from {
                    *first = to.to_string();
                }
                if second == from {
                    *second = to.to_string();
                }
            }
        }
    }
}

impl fmt::Display for AuxFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxFactor::Chi { species, dagger, arg } => {
                write!(f, "chi{}{}({})", species, if *dagger { "+" } else { "" }, arg)
            }
            AuxFactor::PairField { dagger, first, second } => {
                write!(f, "Phi{}({},{})", if *dagger { "+" } else { "" }, first, second)
            }
        }
    }
}

/// A signed product of auxiliary factors, with the listed variables summed
/// over the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxTerm {
    pub coeff: i64,
    pub factors: Vec<AuxFactor>,
    pub summed: Vec<String>,
}

impl fmt::Display for AuxTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff >= 0 {
            write!(f, "+{}", self.coeff)?;
        } else {
            write!(f, "{}", self.coeff)?;
        }
        for var in &self.summed {
            write!(f, " sum_{var}")?;
        }
        for factor in &self.factors {
            write!(f, " {factor}")?;
        }
        Ok(())
    }
}

/// A sum of auxiliary terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuxSum {
    pub terms: Vec<AuxTerm>,
}

impl AuxSum {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for AuxSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

/// Image of one elementary field under the dressing, with `var` naming the
/// summed constituent position of the pair-field term.
pub fn tilde_map_with(species: u8, dagger: bool, arg: &str, var: &str) -> AuxSum {
    let chi = AuxTerm {
        coeff: 1,
        factors: vec![AuxFactor::Chi { species, dagger, arg: arg.to_string() }],
        summed: Vec::new(),
    };
    let pair = match (species, dagger) {
        (1, false) => AuxTerm {
            coeff: 1,
            factors: vec![
                AuxFactor::PairField { dagger: false, first: arg.to_string(), second: var.to_string() },
                AuxFactor::Chi { species: 2, dagger: true, arg: var.to_string() },
            ],
            summed: vec![var.to_string()],
        },
        (1, true) => AuxTerm {
            coeff: 1,
            factors: vec![
                AuxFactor::Chi { species: 2, dagger: false, arg: var.to_string() },
                AuxFactor::PairField { dagger: true, first: arg.to_string(), second: var.to_string() },
            ],
            summed: vec![var.to_string()],
        },
        (2, false) => AuxTerm {
            coeff: -1,
            factors: vec![
                AuxFactor::PairField { dagger: false, first: var.to_string(), second: arg.to_string() },
                AuxFactor::Chi { species: 1, dagger: true, arg: var.to_string() },
            ],
            summed: vec![var.to_string()],
        },
        (2, true) => AuxTerm {
            coeff: -1,
            factors: vec![
                AuxFactor::Chi { species: 1, dagger: false, arg: var.to_string() },
                AuxFactor::PairField { dagger: true, first: var.to_string(), second: arg.to_string() },
            ],
            summed: vec![var.to_string()],
        },
        _ => panic!("species is 1 or 2"),
    };
    AuxSum { terms: vec![chi, pair] }
}

/// Image of one elementary field under the dressing.
pub fn tilde_map(species: u8, dagger: bool, arg: &str) -> AuxSum {
    tilde_map_with(species, dagger, arg, &format!("y_{arg}"))
}

/// Image of a product: one dressed sum per factor, in order. Expanding the
/// product distributes over the terms.
pub fn tilde_product(factors: &[(u8, bool, &str)]) -> Vec<AuxSum> {
    factors
        .iter()
        .enumerate()
        .map(|(i, &(species, dagger, arg))| tilde_map_with(species, dagger, arg, &format!("y{i}")))
        .collect()
}

/// Distributes a product of sums into a flat list of terms.
pub fn expand_product(factors: &[AuxSum]) -> Vec<AuxTerm> {
    let mut terms = vec![AuxTerm { coeff: 1, factors: Vec::new(), summed: Vec::new() }];
    for sum in factors {
        let mut next = Vec::new();
        for lhs in &terms {
            for rhs in &sum.terms {
                let mut product = lhs.clone();
                product.coeff *= rhs.coeff;
                product.factors.extend(rhs.factors.iter().cloned());
                product.summed.extend(rhs.summed.iter().cloned());
                next.push(product);
            }
        }
        terms = next;
    }
    terms
}

/// Anticommutator of two dressed annihilation fields, reduced to normal
/// form. Both arguments are (species, position); the result is zero exactly
/// when the dressing closes the fermion algebra.
pub fn tilde_anticommutator(a: (u8, &str), b: (u8, &str)) -> AuxSum {
    let lhs = tilde_map_with(a.0, false, a.1, "s");
    let rhs = tilde_map_with(b.0, false, b.1, "t");
    let mut reduced: Vec<AuxTerm> = Vec::new();
    for ta in &lhs.terms {
        for tb in &rhs.terms {
            if let Some(term) = anticommute_terms(ta, tb) {
                reduced.push(term);
            }
        }
    }
    collect(reduced)
}

/// `{B1 F1, B2 F2}` with commuting pair-field parts B and single fermion
/// factors F: the pair fields pull out front and the fermion anticommutator
/// contracts to a delta or vanishes.
fn anticommute_terms(a: &AuxTerm, b: &AuxTerm) -> Option<AuxTerm> {
    let fermion = |t: &AuxTerm| {
        t.factors.iter().find_map(|f| match f {
            AuxFactor::Chi { species, dagger, arg } => Some((*species, *dagger, arg.clone())),
            _ => None,
        })
    };
    let (sa, da, aa) = fermion(a).expect("dressed terms carry one fermion factor");
    let (sb, db, ab) = fermion(b).expect("dressed terms carry one fermion factor");
    // CAR: {chi_i(x), chi_j+(y)} = delta_ij delta(x - y); all else vanishes.
    if sa != sb || da == db {
        return None;
    }
    // Substitute the delta: the summed variable takes the other argument.
    let (from, to) = if a.summed.contains(&aa) { (aa, ab) } else { (ab, aa) };
    let mut factors: Vec<AuxFactor> = a
        .factors
        .iter()
        .chain(b.factors.iter())
        .filter(|f| matches!(f, AuxFactor::PairField { .. }))
        .cloned()
        .collect();
    for factor in &mut factors {
        factor.substitute(&from, &to);
    }
    let summed: Vec<String> = a
        .summed
        .iter()
        .chain(b.summed.iter())
        .filter(|v| **v != from)
        .cloned()
        .collect();
    factors.sort();
    Some(AuxTerm { coeff: a.coeff * b.coeff, factors, summed })
}

/// Collects like terms and drops the ones whose coefficients cancel.
fn collect(terms: Vec<AuxTerm>) -> AuxSum {
    let mut by_shape: BTreeMap<(Vec<AuxFactor>, Vec<String>), i64> = BTreeMap::new();
    for term in terms {
        let mut summed = term.summed.clone();
        summed.sort();
        *by_shape.entry((term.factors, summed)).or_insert(0) += term.coeff;
    }
    let terms = by_shape
        .into_iter()
        .filter(|&(_, coeff)| coeff != 0)
        .map(|((factors, summed), coeff)| AuxTerm { coeff, factors, summed })
        .collect();
    AuxSum { terms }
}
