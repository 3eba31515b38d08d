//! Logarithmic radial grid and quadrature on it.
//!
//! Points r_i = r_min * exp(i*h). The substitution u(r) = e^{s/2} w(s),
//! s = ln(r/r_min), turns the radial Schroedinger operator into a symmetric
//! tridiagonal matrix (see [`crate::atoms::radial`]); eigenvectors of that
//! matrix are orthonormal in the plain Euclidean sense, so matrix elements
//! of local operators are plain weighted sums without extra quadrature error.

#[derive(Clone, Debug)]
pub struct RadialGrid {
    pub r: Vec<f64>,
    /// Logarithmic step.
    pub h: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Self {
        assert!(r_min > 0.0 && r_max > r_min && n >= 16, "grid must be positive, ordered, n >= 16");
        let h = (r_max / r_min).ln() / (n as f64 - 1.0);
        let r: Vec<f64> = (0..n).map(|i| r_min * (h * i as f64).exp()).collect();
        RadialGrid { r, h, r_min, r_max }
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    /// Trapezoid weights for ∫ f(r) dr = Σ w_i f(r_i); dr = r ds on the
    /// log grid. End corrections matter only for integrands that do not
    /// vanish at the boundaries.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n();
        let mut w: Vec<f64> = self.r.iter().map(|&ri| ri * self.h).collect();
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
        w
    }

    /// ∫ f(r) dr by the trapezoid rule on the log grid.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.n());
        self.weights().iter().zip(f).map(|(w, v)| w * v).sum()
    }
}
