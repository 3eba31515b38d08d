//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration with cluster re-orthogonalization for
//! eigenvectors.
//!
//! An irreducible symmetric tridiagonal matrix has simple spectrum, so every
//! eigenvalue can be located by bisection on the Sturm count alone. That is
//! cheap enough (O(n) per count) to stay fast in unoptimized builds where a
//! dense O(n^3) solve would blow the time budget of the radial problems.

/// Symmetric tridiagonal matrix: `diag` has length n, `offdiag` length n-1.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len(), "offdiag must be one shorter than diag");
        SymTridiag { diag, offdiag }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let e2 = self.offdiag[i - 1] * self.offdiag[i - 1];
            let denom = if q != 0.0 { q } else { f64::MIN_POSITIVE };
            q = self.diag[i] - x - e2 / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds containing the whole spectrum.
    pub fn spectrum_bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        // Widen slightly so bisection brackets are strict.
        let pad = 1e-12 * (hi - lo).abs().max(1.0) + f64::MIN_POSITIVE;
        (lo - pad, hi + pad)
    }

    /// k-th eigenvalue (ascending, 0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.spectrum_bounds();
        // Invariant: count_below(lo) <= k < count_below(hi).
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            let scale = lo.abs().max(hi.abs()).max(1e-300);
            if (hi - lo) / scale < 4.0 * f64::EPSILON {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvalues k0..k1 (ascending, half-open range).
    pub fn eigenvalues_range(&self, k0: usize, k1: usize) -> Vec<f64> {
        (k0..k1).map(|k| self.eigenvalue(k)).collect()
    }

    /// Solve (T - shift) x = b with partial pivoting; overwrites b with x.
    ///
    /// Gaussian elimination over the three bands (the row swap creates one
    /// extra superdiagonal, `du2`). At step i the subdiagonal entry of row
    /// i+1 is still the original off-diagonal element.
    fn solve_shifted(&self, shift: f64, b: &mut [f64]) {
        let n = self.n();
        let mut d: Vec<f64> = self.diag.iter().map(|&v| v - shift).collect();
        let mut du: Vec<f64> = if n > 1 { self.offdiag.clone() } else { Vec::new() };
        let mut du2 = vec![0.0; n.saturating_sub(2)];

        for i in 0..n.saturating_sub(1) {
            let sub = self.offdiag[i];
            if sub.abs() > d[i].abs() {
                // Swap rows i and i+1, then eliminate.
                let (old_di, old_di1, old_dui) = (d[i], d[i + 1], du[i]);
                let old_dui1 = if i + 2 < n { du[i + 1] } else { 0.0 };
                d[i] = sub;
                du[i] = old_di1;
                if i + 2 < n {
                    du2[i] = old_dui1;
                }
                b.swap(i, i + 1);
                let m = old_di / sub;
                d[i + 1] = old_dui - m * old_di1;
                if i + 2 < n {
                    du[i + 1] = -m * old_dui1;
                }
                b[i + 1] -= m * b[i];
            } else {
                let denom = if d[i] != 0.0 { d[i] } else { f64::MIN_POSITIVE };
                let m = sub / denom;
                d[i + 1] -= m * du[i];
                b[i + 1] -= m * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut v = b[i];
            if i + 1 < n {
                v -= du[i] * b[i + 1];
            }
            if i + 2 < n {
                v -= du2[i] * b[i + 2];
            }
            let denom = if d[i] != 0.0 { d[i] } else { f64::MIN_POSITIVE };
            b[i] = v / denom;
        }
    }

    /// Eigenvector for an eigenvalue computed by [`Self::eigenvalue`].
    ///
    /// `prev_cluster` holds already-computed eigenvectors whose eigenvalues
    /// lie within the cluster tolerance of this one; the result is
    /// orthogonalized against them between iterations.
    pub fn eigenvector(&self, lambda: f64, prev_cluster: &[Vec<f64>]) -> Vec<f64> {
        let n = self.n();
        // Deterministic pseudo-random start avoids accidental orthogonality
        // to the target eigenvector.
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let x = (i as f64 * 0.754_877_666 + 0.318_309_886).fract();
                2.0 * x - 1.0
            })
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            self.solve_shifted(lambda, &mut v);
            for p in prev_cluster {
                let c = dot(&v, p);
                for (vi, pi) in v.iter_mut().zip(p) {
                    *vi -= c * pi;
                }
            }
            normalize(&mut v);
        }
        v
    }

    /// All eigenpairs in the closed index range [k0, k1), ascending.
    ///
    /// `cluster_tol` is the absolute eigenvalue spacing below which adjacent
    /// eigenvectors are re-orthogonalized against each other.
    pub fn eigenpairs_range(&self, k0: usize, k1: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let values = self.eigenvalues_range(k0, k1);
        let (blo, bhi) = self.spectrum_bounds();
        let cluster_tol = 1e-10 * (bhi - blo).abs().max(1.0);
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        for (j, &lam) in values.iter().enumerate() {
            let mut cluster: Vec<Vec<f64>> = Vec::new();
            let mut i = j;
            while i > 0 && (values[i - 1] - lam).abs() < cluster_tol {
                i -= 1;
                cluster.push(vectors[i].clone());
            }
            vectors.push(self.eigenvector(lam, &cluster));
        }
        (values, vectors)
    }

    /// Full spectrum with eigenvectors.
    pub fn eigenpairs_all(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        self.eigenpairs_range(0, self.n())
    }

    /// Residual |T v - lambda v| for diagnostics.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let n = self.n();
        let mut r2 = 0.0;
        for i in 0..n {
            let mut t = self.diag[i] * v[i] - lambda * v[i];
            if i > 0 {
                t += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += self.offdiag[i] * v[i + 1];
            }
            r2 += t * t;
        }
        r2.sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let nrm = dot(v, v).sqrt();
    if nrm > 0.0 {
        for x in v.iter_mut() {
            *x /= nrm;
        }
    }
}
