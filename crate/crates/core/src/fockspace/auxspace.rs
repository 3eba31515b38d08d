//! Auxiliary Fock space where composites are independent bosons. States
//! carry two fermion species (the unbound constituents) plus bosonic modes
//! labeled by internal level and centroid on the mass-refined ring. The
//! dressed fields defined here mix a constituent annihilator with a
//! boson-annihilating constituent creator so that all same- and
//! cross-species anticommutators vanish identically.

use std::collections::HashMap;
use std::ops::Range;

use num_complex::Complex64;

use super::basis::{annihilate, BASIS_CAP};
use super::composite::integer_mass;
use super::lattice::LatticeConfig;
use super::operators::OperatorMatrix;
use super::pair::PairSpectrum;
use super::FockError;

/// Most bosons a packed state can hold.
pub const MAX_BOSONS: usize = 8;

/// One auxiliary basis state: fermion occupation packed as in the exact
/// space (species 1 in bits 0..L, species 2 in bits L..2L) and up to eight
/// bosons packed one byte each, sorted ascending, byte = mode index + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AuxState {
    pub fermions: u64,
    pub bosons: u64,
}

fn unpack(bosons: u64) -> [u8; MAX_BOSONS] {
    bosons.to_le_bytes()
}

fn pack(bytes: [u8; MAX_BOSONS]) -> u64 {
    u64::from_le_bytes(bytes)
}

/// Occupation of one boson mode.
pub fn boson_count(bosons: u64, mode: u8) -> usize {
    unpack(bosons).iter().filter(|&&b| b == mode + 1).count()
}

/// Modes present, ascending, with multiplicity.
pub fn boson_list(bosons: u64) -> Vec<u8> {
    unpack(bosons).iter().filter(|&&b| b != 0).map(|&b| b - 1).collect()
}

/// Add one boson in `mode`; returns the new packing and the ladder factor
/// sqrt(n + 1). None when all slots are full.
pub fn add_boson(bosons: u64, mode: u8) -> Option<(u64, f64)> {
    let mut bytes = unpack(bosons);
    if bytes[MAX_BOSONS - 1] != 0 {
        return None;
    }
    let n_before = boson_count(bosons, mode);
    // Insert keeping nonzero bytes sorted ascending at the front.
    let mut v: Vec<u8> = bytes.iter().copied().filter(|&b| b != 0).collect();
    let pos = v.partition_point(|&b| b <= mode + 1);
    v.insert(pos, mode + 1);
    bytes = [0; MAX_BOSONS];
    bytes[..v.len()].copy_from_slice(&v);
    Some((pack(bytes), ((n_before + 1) as f64).sqrt()))
}

/// Remove one boson from `mode`; returns the new packing and sqrt(n).
/// None when the mode is empty.
pub fn remove_boson(bosons: u64, mode: u8) -> Option<(u64, f64)> {
    let bytes = unpack(bosons);
    let n_before = boson_count(bosons, mode);
    if n_before == 0 {
        return None;
    }
    let mut v: Vec<u8> = bytes.iter().copied().filter(|&b| b != 0).collect();
    let pos = v.iter().position(|&b| b == mode + 1).unwrap();
    v.remove(pos);
    let mut out = [0; MAX_BOSONS];
    out[..v.len()].copy_from_slice(&v);
    Some((pack(out), (n_before as f64).sqrt()))
}

/// Sector-ordered basis of the auxiliary space.
pub struct AuxSpace {
    pub config: LatticeConfig,
    /// Internal pair levels carried by the bosons.
    pub spectrum: PairSpectrum,
    pub max_n1: usize,
    pub max_n2: usize,
    pub max_bosons: usize,
    /// Grid refinement of the centroid ring: the integer total mass M.
    pub refine: usize,
    pub states: Vec<AuxState>,
    pub index: HashMap<AuxState, usize>,
    /// (n1, n2, nb) sectors in enumeration order.
    pub sectors: Vec<(usize, usize, usize, Range<usize>)>,
}

impl AuxSpace {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Number of centroid points: sites times the total mass.
    pub fn centroid_points(&self) -> usize {
        self.config.sites * self.refine
    }

    /// Boson mode index for internal level `alpha` at centroid `z_idx`.
    pub fn mode(&self, alpha: usize, z_idx: usize) -> u8 {
        (alpha * self.centroid_points() + z_idx) as u8
    }

    /// Index of the empty state.
    pub fn vacuum(&self) -> usize {
        self.index[&AuxState { fermions: 0, bosons: 0 }]
    }

    pub fn sector(&self, n1: usize, n2: usize, nb: usize) -> Option<Range<usize>> {
        self.sectors
            .iter()
            .find(|&&(a, b, c, _)| (a, b, c) == (n1, n2, nb))
            .map(|(_, _, _, r)| r.clone())
    }
}

fn bit_patterns(l: usize, n: usize, shift: usize) -> Vec<u64> {
    fn rec(l: usize, n: usize, start: usize, acc: u64, out: &mut Vec<u64>) {
        if n == 0 {
            out.push(acc);
            return;
        }
        for site in start..=(l - n) {
            rec(l, n - 1, site + 1, acc | (1u64 << site), out);
        }
    }
    let mut out = Vec::new();
    if n <= l {
        rec(l, n, 0, 0, &mut out);
    }
    out.iter().map(|b| b << shift).collect()
}

fn boson_multisets(n_modes: usize, nb: usize) -> Vec<u64> {
    fn rec(n_modes: usize, nb: usize, start: usize, acc: &mut Vec<u8>, out: &mut Vec<u64>) {
        if nb == 0 {
            let mut bytes = [0u8; MAX_BOSONS];
            for (i, &m) in acc.iter().enumerate() {
                bytes[i] = m + 1;
            }
            out.push(pack(bytes));
            return;
        }
        for mode in start..n_modes {
            acc.push(mode as u8);
            rec(n_modes, nb - 1, mode, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n_modes, nb, 0, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Enumerate the auxiliary basis with per-species fermion caps and a boson
/// cap. Masses must be small positive integers so the centroid grid is
/// well defined.
pub fn enumerate_aux_basis(
    config: &LatticeConfig,
    spectrum: &PairSpectrum,
    max_n1: usize,
    max_n2: usize,
    max_bosons: usize,
) -> Result<AuxSpace, FockError> {
    let l = config.sites;
    if l == 0 || l > 32 {
        return Err(FockError::InvalidRequest(format!(
            "lattice size {l} outside the supported 1..=32"
        )));
    }
    if max_bosons > MAX_BOSONS {
        return Err(FockError::InvalidRequest(format!(
            "boson cap {max_bosons} exceeds the packing limit {MAX_BOSONS}"
        )));
    }
    let m1 = integer_mass(config.mass1, "mass1")?;
    let m2 = integer_mass(config.mass2, "mass2")?;
    let refine = (m1 + m2) as usize;
    let n_modes = spectrum.states.len() * l * refine;
    if n_modes > 255 {
        return Err(FockError::InvalidRequest(format!(
            "{n_modes} boson modes exceed the one-byte packing limit"
        )));
    }

    let mut total: u128 = 0;
    for n1 in 0..=max_n1 {
        for n2 in 0..=max_n2 {
            for nb in 0..=max_bosons {
                total += binomial(l as u128, n1 as u128)
                    * binomial(l as u128, n2 as u128)
                    * binomial((n_modes + nb - 1) as u128, nb as u128);
            }
        }
    }
    if total > BASIS_CAP as u128 {
        return Err(FockError::CapExceeded { size: total, cap: BASIS_CAP });
    }

    let mut states = Vec::with_capacity(total as usize);
    let mut sectors = Vec::new();
    for n1 in 0..=max_n1 {
        for n2 in 0..=max_n2 {
            for nb in 0..=max_bosons {
                let start = states.len();
                for f2 in bit_patterns(l, n2, l) {
                    for f1 in bit_patterns(l, n1, 0) {
                        for b in boson_multisets(n_modes, nb) {
                            states.push(AuxState { fermions: f1 | f2, bosons: b });
                        }
                    }
                }
                sectors.push((n1, n2, nb, start..states.len()));
            }
        }
    }
    let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    Ok(AuxSpace {
        config: config.clone(),
        spectrum: spectrum.clone(),
        max_n1,
        max_n2,
        max_bosons,
        refine,
        states,
        index,
        sectors,
    })
}

/// Constituent annihilation operator, Jordan-Wigner ordered across both
/// species as in the exact space. Bosons carry no sign.
pub fn chi_operator(aux: &AuxSpace, species: u8, site: usize) -> OperatorMatrix {
    let slot = (species as u32 - 1) * aux.config.sites as u32 + site as u32;
    OperatorMatrix::from_action(aux.dim(), |col| {
        let s = aux.states[col];
        match annihilate(s.fermions, slot) {
            Some((f, sign)) => {
                let target = AuxState { fermions: f, bosons: s.bosons };
                match aux.index.get(&target) {
                    Some(&row) => vec![(row, Complex64::new(sign, 0.0))],
                    None => Vec::new(),
                }
            }
            None => Vec::new(),
        }
    })
}

/// Constituent occupation operator.
pub fn chi_number(aux: &AuxSpace, species: u8, site: usize) -> OperatorMatrix {
    let slot = (species as u32 - 1) * aux.config.sites as u32 + site as u32;
    OperatorMatrix::from_action(aux.dim(), |col| {
        let occ = (aux.states[col].fermions >> slot) & 1;
        if occ == 1 {
            vec![(col, Complex64::new(1.0, 0.0))]
        } else {
            Vec::new()
        }
    })
}

/// Boson annihilation operator for internal level `alpha` at centroid
/// `z_idx` on the refined ring.
pub fn eta_operator(aux: &AuxSpace, alpha: usize, z_idx: usize) -> OperatorMatrix {
    let mode = aux.mode(alpha, z_idx);
    OperatorMatrix::from_action(aux.dim(), |col| {
        let s = aux.states[col];
        match remove_boson(s.bosons, mode) {
            Some((b, amp)) => {
                let target = AuxState { fermions: s.fermions, bosons: b };
                match aux.index.get(&target) {
                    Some(&row) => vec![(row, Complex64::new(amp, 0.0))],
                    None => Vec::new(),
                }
            }
            None => Vec::new(),
        }
    })
}

/// The boson field at constituent sites (v, w): sum over internal levels of
/// phi_a(v - w) eta_a evaluated at the centroid of the pair, using the
/// fundamental-domain representatives of both sites.
fn pair_field(aux: &AuxSpace, v: usize, w: usize) -> OperatorMatrix {
    let config = &aux.config;
    let m1 = config.mass1 as i64;
    let m2 = config.mass2 as i64;
    let points = aux.centroid_points() as i64;
    let z_idx = (m1 * v as i64 + m2 * w as i64).rem_euclid(points) as usize;
    let rel = config.wrap(v as i64 - w as i64);
    let mut op = OperatorMatrix::zero(aux.dim());
    for (alpha, state) in aux.spectrum.states.iter().enumerate() {
        let amp = state.amplitudes[rel];
        if amp != 0.0 {
            op = op.add(&eta_operator(aux, alpha, z_idx).scale(Complex64::new(amp, 0.0)));
        }
    }
    op
}

/// Dressed constituent field: the bare annihilator plus the boson field
/// times the opposite-species creator. Cross- and same-species
/// anticommutators of these fields vanish identically.
pub fn tilde_field(aux: &AuxSpace, species: u8, site: usize) -> OperatorMatrix {
    let l = aux.config.sites;
    let mut op = chi_operator(aux, species, site);
    for y in 0..l {
        let (phi, partner) = match species {
            1 => (pair_field(aux, site, y), chi_operator(aux, 2, y).dagger()),
            2 => (pair_field(aux, y, site).scale(Complex64::new(-1.0, 0.0)), {
                chi_operator(aux, 1, y).dagger()
            }),
            _ => panic!("species index out of range: {species}"),
        };
        if phi.nnz() > 0 {
            op = op.add(&partner.compose(&phi));
        }
    }
    op
}

/// Result of the boost covariance check.
#[derive(Clone, Debug)]
pub struct BoostReport {
    pub velocity: f64,
    /// Largest deviation from the expected phase law over all dressed
    /// fields and boson modes.
    pub max_phase_error: f64,
}

/// Diagonal boost unitary exp(i v S) with S the mass-weighted position sum;
/// boson modes contribute their centroid index on the refined ring.
fn boost_unitary(aux: &AuxSpace, velocity: f64) -> OperatorMatrix {
    let l = aux.config.sites;
    let m1 = aux.config.mass1;
    let m2 = aux.config.mass2;
    let points = aux.centroid_points();
    OperatorMatrix::from_action(aux.dim(), |col| {
        let s = aux.states[col];
        let mut weight = 0.0;
        for site in 0..l {
            if (s.fermions >> site) & 1 == 1 {
                weight += m1 * site as f64;
            }
            if (s.fermions >> (l + site)) & 1 == 1 {
                weight += m2 * site as f64;
            }
        }
        for mode in boson_list(s.bosons) {
            weight += (mode as usize % points) as f64;
        }
        vec![(col, Complex64::from_polar(1.0, velocity * weight))]
    })
}

/// Verify the boost phase laws: conjugating a dressed field by exp(i v S)
/// multiplies it by exp(-i v m x), and a boson mode by exp(-i v Z M). The
/// velocity must wind every species around the ring by a multiple of 2 pi,
/// otherwise the boost is incompatible with the boundary and is rejected.
pub fn galilean_boost_check(aux: &AuxSpace, velocity: f64) -> Result<BoostReport, FockError> {
    let l = aux.config.sites as f64;
    for mass in [aux.config.mass1, aux.config.mass2] {
        let winding = velocity * mass * l / std::f64::consts::TAU;
        if (winding - winding.round()).abs() > 1e-9 {
            return Err(FockError::IncompatibleBoost { velocity });
        }
    }
    let u = boost_unitary(aux, velocity);
    let udag = u.dagger();
    let mut max_err: f64 = 0.0;
    for species in [1u8, 2u8] {
        let mass = if species == 1 { aux.config.mass1 } else { aux.config.mass2 };
        for site in 0..aux.config.sites {
            let field = tilde_field(aux, species, site);
            let conjugated = u.compose(&field).compose(&udag);
            let expected =
                field.scale(Complex64::from_polar(1.0, -velocity * mass * site as f64));
            max_err = max_err.max(conjugated.add(&expected.scale(Complex64::new(-1.0, 0.0))).max_abs());
        }
    }
    for alpha in 0..aux.spectrum.states.len() {
        for z_idx in 0..aux.centroid_points() {
            let field = eta_operator(aux, alpha, z_idx);
            let conjugated = u.compose(&field).compose(&udag);
            let expected = field.scale(Complex64::from_polar(1.0, -velocity * z_idx as f64));
            max_err = max_err.max(conjugated.add(&expected.scale(Complex64::new(-1.0, 0.0))).max_abs());
        }
    }
    Ok(BoostReport { velocity, max_phase_error: max_err })
}
