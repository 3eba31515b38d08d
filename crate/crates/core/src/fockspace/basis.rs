//! Occupation-number basis for two fermion species on a ring, with the
//! Jordan-Wigner ordering fixed once: species-1 sites ascending, then
//! species-2 sites ascending.

use std::collections::HashMap;
use std::ops::Range;

use super::lattice::LatticeConfig;
use super::FockError;

/// Hard cap on the number of basis states a single space may hold.
pub const BASIS_CAP: u64 = 2_000_000;

/// Fock space truncated to at most `max_n1` + `max_n2` particles, holding
/// every sector up to those caps so that creation and annihilation act
/// within the space.
#[derive(Clone, Debug)]
pub struct LatticeFockSpace {
    pub config: LatticeConfig,
    pub max_n1: usize,
    pub max_n2: usize,
    /// Basis states as bit sets: site x of species s occupies bit (s-1)L + x.
    pub basis: Vec<u64>,
    /// Position of each basis state in `basis`.
    pub index: HashMap<u64, usize>,
    /// Contiguous index range of each (n1, n2) sector, in enumeration order.
    pub sectors: Vec<(usize, usize, Range<usize>)>,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn masks_with_popcount(sites: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if count == 0 {
        out.push(0);
        return out;
    }
    if count > sites {
        return out;
    }
    // Gosper's hack walks masks of fixed popcount in increasing order.
    let mut v: u64 = (1 << count) - 1;
    let limit: u64 = 1 << sites;
    while v < limit {
        out.push(v);
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Build the truncated Fock space for `config`, failing when the basis
/// would exceed the cap.
pub fn enumerate_basis(
    config: &LatticeConfig,
    max_n1: usize,
    max_n2: usize,
) -> Result<LatticeFockSpace, FockError> {
    let l = config.sites;
    if l == 0 || l > 32 {
        return Err(FockError::InvalidRequest(format!(
            "lattice must have between 1 and 32 sites, got {l}"
        )));
    }
    let mut total: u128 = 0;
    for n1 in 0..=max_n1.min(l) {
        for n2 in 0..=max_n2.min(l) {
            total += binomial(l as u64, n1 as u64) * binomial(l as u64, n2 as u64);
        }
    }
    if total > BASIS_CAP as u128 {
        return Err(FockError::CapExceeded { size: total, cap: BASIS_CAP });
    }

    let mut basis = Vec::with_capacity(total as usize);
    let mut sectors = Vec::new();
    for n1 in 0..=max_n1.min(l) {
        let masks1 = masks_with_popcount(l, n1);
        for n2 in 0..=max_n2.min(l) {
            let start = basis.len();
            for &m2 in &masks_with_popcount(l, n2) {
                for &m1 in &masks1 {
                    basis.push(m1 | (m2 << l));
                }
            }
            sectors.push((n1, n2, start..basis.len()));
        }
    }
    let index = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    Ok(LatticeFockSpace {
        config: config.clone(),
        max_n1,
        max_n2,
        basis,
        index,
        sectors,
    })
}

impl LatticeFockSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Jordan-Wigner slot of (species, site); species is 1-based.
    pub fn slot(&self, species: u8, site: usize) -> u32 {
        debug_assert!(species == 1 || species == 2);
        debug_assert!(site < self.config.sites);
        ((species as usize - 1) * self.config.sites + site) as u32
    }

    /// Index of the empty state.
    pub fn vacuum(&self) -> usize {
        self.index[&0]
    }

    pub fn count1(&self, bits: u64) -> usize {
        (bits & ((1u64 << self.config.sites) - 1)).count_ones() as usize
    }

    pub fn count2(&self, bits: u64) -> usize {
        (bits >> self.config.sites).count_ones() as usize
    }

    /// Index range of the (n1, n2) sector, if present.
    pub fn sector(&self, n1: usize, n2: usize) -> Option<Range<usize>> {
        self.sectors
            .iter()
            .find(|&&(a, b, _)| a == n1 && b == n2)
            .map(|(_, _, r)| r.clone())
    }
}

/// Remove a particle from `slot`: new bit set and Jordan-Wigner sign, or
/// None when the slot is empty.
pub fn annihilate(bits: u64, slot: u32) -> Option<(u64, f64)> {
    let mask = 1u64 << slot;
    if bits & mask == 0 {
        return None;
    }
    let parity = (bits & (mask - 1)).count_ones();
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    Some((bits & !mask, sign))
}

/// Add a particle at `slot`: new bit set and Jordan-Wigner sign, or None
/// when the slot is filled.
pub fn create(bits: u64, slot: u32) -> Option<(u64, f64)> {
    let mask = 1u64 << slot;
    if bits & mask != 0 {
        return None;
    }
    let parity = (bits & (mask - 1)).count_ones();
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    Some((bits | mask, sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::lattice::PairPotential;

    fn space(l: usize, n1: usize, n2: usize) -> LatticeFockSpace {
        let config = LatticeConfig::new(l, PairPotential::square_well(1.0, 0));
        enumerate_basis(&config, n1, n2).unwrap()
    }

    #[test]
    fn sector_counts_follow_binomials() {
        // L = 6 with up to 2 + 2 particles: (1 + 6 + 15)^2 = 484.
        assert_eq!(space(6, 2, 2).dim(), 484);
        // L = 2, one particle of species 1 only: 1 + 2 = 3.
        assert_eq!(space(2, 1, 0).dim(), 3);
        // L = 4, one of each: (1 + 4)^2 = 25.
        assert_eq!(space(4, 1, 1).dim(), 25);
    }

    #[test]
    fn cap_rejects_oversized_spaces() {
        let config = LatticeConfig::new(32, PairPotential::square_well(1.0, 0));
        match enumerate_basis(&config, 16, 16) {
            Err(FockError::CapExceeded { size, cap }) => {
                assert!(size > cap as u128);
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn vacuum_is_first_and_sectors_tile_the_basis() {
        let s = space(4, 2, 1);
        assert_eq!(s.vacuum(), 0);
        let mut covered = 0;
        for (_, _, r) in &s.sectors {
            assert_eq!(r.start, covered);
            covered = r.end;
        }
        assert_eq!(covered, s.dim());
        let r = s.sector(2, 1).unwrap();
        assert_eq!(r.len(), 6 * 4);
        for i in r {
            let b = s.basis[i];
            assert_eq!(s.count1(b), 2);
            assert_eq!(s.count2(b), 1);
        }
    }

    #[test]
    fn jordan_wigner_signs_count_preceding_occupation() {
        // Occupied slots 0 and 2: annihilating slot 2 crosses one particle.
        let bits = 0b101u64;
        let (after, sign) = annihilate(bits, 2).unwrap();
        assert_eq!(after, 0b001);
        assert_eq!(sign, -1.0);
        let (after, sign) = annihilate(bits, 0).unwrap();
        assert_eq!(after, 0b100);
        assert_eq!(sign, 1.0);
        assert!(annihilate(bits, 1).is_none());
        let (after, sign) = create(bits, 1).unwrap();
        assert_eq!(after, 0b111);
        assert_eq!(sign, -1.0);
        assert!(create(bits, 0).is_none());
    }

    #[test]
    fn create_then_annihilate_roundtrips_with_consistent_sign() {
        let s = space(5, 2, 2);
        for &bits in s.basis.iter() {
            for slot in 0..10u32 {
                if let Some((up, s1)) = create(bits, slot) {
                    let (down, s2) = annihilate(up, slot).unwrap();
                    assert_eq!(down, bits);
                    assert_eq!(s1 * s2, 1.0);
                }
            }
        }
    }
}
