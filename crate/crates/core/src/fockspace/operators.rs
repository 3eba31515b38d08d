//! Sparse operators on occupation bases, stored column-major: column j
//! holds the image of basis state j. All Fock-space observables reduce to
//! compositions of these.

use num_complex::Complex64;

use super::basis::{annihilate, create, LatticeFockSpace};

/// Sparse linear operator on a finite basis. `cols[j]` lists the nonzero
/// (row, amplitude) pairs of the image of basis state j, sorted by row.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub cols: Vec<Vec<(usize, Complex64)>>,
}

fn normalize_col(col: &mut Vec<(usize, Complex64)>) {
    col.sort_by_key(|&(row, _)| row);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(col.len());
    for &(row, amp) in col.iter() {
        match out.last_mut() {
            Some(last) if last.0 == row => last.1 += amp,
            _ => out.push((row, amp)),
        }
    }
    out.retain(|&(_, amp)| amp != Complex64::new(0.0, 0.0));
    *col = out;
}

impl OperatorMatrix {
    pub fn zero(dim: usize) -> Self {
        OperatorMatrix { dim, cols: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let cols = (0..dim).map(|j| vec![(j, Complex64::new(1.0, 0.0))]).collect();
        OperatorMatrix { dim, cols }
    }

    /// Build column-wise from the action on each basis state. Duplicate rows
    /// are merged and exact zeros dropped.
    pub fn from_action(dim: usize, f: impl Fn(usize) -> Vec<(usize, Complex64)>) -> Self {
        let mut cols: Vec<_> = (0..dim).map(f).collect();
        for col in &mut cols {
            normalize_col(col);
        }
        OperatorMatrix { dim, cols }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(row, amp) in col {
                out[row] += amp * v[j];
            }
        }
        out
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        let mut cols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            for &(row, amp) in col {
                cols[row].push((j, amp.conj()));
            }
        }
        for col in &mut cols {
            col.sort_by_key(|&(row, _)| row);
        }
        OperatorMatrix { dim: self.dim, cols }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(row, amp)| (row, amp * c)).collect())
            .collect();
        OperatorMatrix { dim: self.dim, cols }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut col: Vec<(usize, Complex64)> =
                self.cols[j].iter().chain(other.cols[j].iter()).copied().collect();
            normalize_col(&mut col);
            cols.push(col);
        }
        OperatorMatrix { dim: self.dim, cols }
    }

    /// Operator product self . other (other acts first).
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut col = Vec::new();
            for &(mid, amp1) in &other.cols[j] {
                for &(row, amp2) in &self.cols[mid] {
                    col.push((row, amp2 * amp1));
                }
            }
            normalize_col(&mut col);
            cols.push(col);
        }
        OperatorMatrix { dim: self.dim, cols }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self).scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    /// Largest amplitude magnitude over all stored entries.
    pub fn max_abs(&self) -> f64 {
        self.cols
            .iter()
            .flat_map(|col| col.iter().map(|&(_, amp)| amp.norm()))
            .fold(0.0, f64::max)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.cols[col]
            .iter()
            .find(|&&(r, _)| r == row)
            .map(|&(_, amp)| amp)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// <bra| self |ket>.
    pub fn matrix_element(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        let image = self.apply(ket);
        bra.iter().zip(image.iter()).map(|(b, i)| b.conj() * i).sum()
    }
}

fn one_body(
    space: &LatticeFockSpace,
    step: impl Fn(u64) -> Option<(u64, f64)>,
) -> OperatorMatrix {
    OperatorMatrix::from_action(space.dim(), |j| {
        let bits = space.basis[j];
        match step(bits) {
            Some((new_bits, sign)) => match space.index.get(&new_bits) {
                Some(&row) => vec![(row, Complex64::new(sign, 0.0))],
                None => Vec::new(),
            },
            None => Vec::new(),
        }
    })
}

/// Annihilation operator of `species` (1-based) at `site`. Truncation drops
/// images that leave the space, so creation operators are exact only below
/// the sector caps.
pub fn field_operator(space: &LatticeFockSpace, species: u8, site: usize) -> OperatorMatrix {
    let slot = space.slot(species, site);
    one_body(space, move |bits| annihilate(bits, slot))
}

/// Number operator of `species` at `site`.
pub fn number_operator(space: &LatticeFockSpace, species: u8, site: usize) -> OperatorMatrix {
    let slot = space.slot(species, site);
    OperatorMatrix::from_action(space.dim(), |j| {
        if space.basis[j] & (1u64 << slot) != 0 {
            vec![(j, Complex64::new(1.0, 0.0))]
        } else {
            Vec::new()
        }
    })
}

/// Occupied (species, site) pairs of a basis state, species-1 sites first.
pub fn occupied_sites(space: &LatticeFockSpace, bits: u64) -> Vec<(u8, usize)> {
    let l = space.config.sites;
    let mut out = Vec::new();
    for x in 0..l {
        if bits & (1u64 << x) != 0 {
            out.push((1, x));
        }
    }
    for x in 0..l {
        if bits & (1u64 << (l + x)) != 0 {
            out.push((2, x));
        }
    }
    out
}

/// Interaction energy of a configuration: the pair potential summed over
/// unordered particle pairs.
pub fn interaction_energy(space: &LatticeFockSpace, bits: u64) -> f64 {
    let occ = occupied_sites(space, bits);
    let mut acc = 0.0;
    for a in 0..occ.len() {
        for b in (a + 1)..occ.len() {
            let (si, xi) = occ[a];
            let (sj, xj) = occ[b];
            acc += space.config.potential.between(si, sj, space.config.distance(xi, xj));
        }
    }
    acc
}

/// Full lattice Hamiltonian: nearest-neighbor ring hops with species masses
/// plus the two-body potential, diagonal in the occupation basis.
pub fn lattice_hamiltonian(space: &LatticeFockSpace) -> OperatorMatrix {
    let l = space.config.sites;
    let inv_mass = [1.0 / space.config.mass1, 1.0 / space.config.mass2];
    OperatorMatrix::from_action(space.dim(), |j| {
        let bits = space.basis[j];
        let mut col = Vec::new();
        // Diagonal: on-site kinetic term plus pairwise potential.
        let n1 = space.count1(bits) as f64;
        let n2 = space.count2(bits) as f64;
        let diag = n1 * inv_mass[0] + n2 * inv_mass[1] + interaction_energy(space, bits);
        col.push((j, Complex64::new(diag, 0.0)));
        // Hops x -> x+1 and back, both species, ring-periodic.
        for species in 1..=2u8 {
            let t = -0.5 * inv_mass[species as usize - 1];
            for x in 0..l {
                let y = (x + 1) % l;
                for (from, to) in [(x, y), (y, x)] {
                    if let Some((mid, s1)) = annihilate(bits, space.slot(species, from)) {
                        if let Some((new_bits, s2)) = create(mid, space.slot(species, to)) {
                            if let Some(&row) = space.index.get(&new_bits) {
                                col.push((row, Complex64::new(t * s1 * s2, 0.0)));
                            }
                        }
                    }
                }
            }
        }
        col
    })
}
