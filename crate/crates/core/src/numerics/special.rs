//! Special functions: factorials, associated Laguerre polynomials,
//! associated Legendre functions, spherical Bessel functions,
//! Gauss-Legendre quadrature rules.

/// n! as f64 (exact through n = 22, accurate to f64 beyond).
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0f64, |acc, k| acc * k as f64)
}

/// ln(n!).
pub fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Associated Laguerre polynomial L_n^a(x) by the three-term recurrence.
pub fn assoc_laguerre(n: u32, a: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 + a - x,
        _ => {
            let mut lm2 = 1.0;
            let mut lm1 = 1.0 + a - x;
            for k in 2..=n {
                let kf = k as f64;
                let l = ((2.0 * kf - 1.0 + a - x) * lm1 - (kf - 1.0 + a) * lm2) / kf;
                lm2 = lm1;
                lm1 = l;
            }
            lm1
        }
    }
}

/// d/dx L_n^a(x) = -L_{n-1}^{a+1}(x).
pub fn assoc_laguerre_deriv(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -assoc_laguerre(n - 1, a + 1.0, x)
    }
}

/// Legendre polynomial P_l(x).
pub fn legendre(l: u32, x: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let mut pm2 = 1.0;
            let mut pm1 = x;
            for k in 2..=l {
                let kf = k as f64;
                let p = ((2.0 * kf - 1.0) * x * pm1 - (kf - 1.0) * pm2) / kf;
                pm2 = pm1;
                pm1 = p;
            }
            pm1
        }
    }
}

/// Associated Legendre P_l^m(x) with Condon-Shortley phase, m >= 0.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(m <= l);
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let mf = m as f64;
        let p = ((2.0 * llf - 1.0) * x * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pmmp1;
        pmmp1 = p;
    }
    pmmp1
}

/// d/dtheta P_l^m(cos theta); valid away from the poles.
pub fn assoc_legendre_dtheta(l: u32, m: u32, x: f64) -> f64 {
    // (1-x^2) dP/dx = -l x P_l^m + (l+m) P_{l-1}^m; dP/dtheta = -sin(theta) dP/dx.
    let sin_t = ((1.0 - x) * (1.0 + x)).max(1e-300).sqrt();
    let lf = l as f64;
    let mf = m as f64;
    let plm = assoc_legendre(l, m, x);
    let plm1 = if l == 0 || m > l - 1 { 0.0 } else { assoc_legendre(l - 1, m, x) };
    -(-lf * x * plm + (lf + mf) * plm1) / sin_t
}

/// Spherical Bessel j_l(x), stable for small and moderate x (l <= ~10).
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    let ax = x.abs();
    // Power series for small argument: avoids cancellation in the
    // upward recurrence, which is unstable for x << l.
    if ax < 0.5 + 0.5 * l as f64 {
        return j_series(l, x);
    }
    // Upward recurrence from j0, j1 is stable for x >~ l.
    let j0 = x.sin() / x;
    if l == 0 {
        return j0;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if l == 1 {
        return j1;
    }
    let mut jm2 = j0;
    let mut jm1 = j1;
    for k in 2..=l {
        let j = (2.0 * k as f64 - 1.0) / x * jm1 - jm2;
        jm2 = jm1;
        jm1 = j;
    }
    jm1
}

fn j_series(l: u32, x: f64) -> f64 {
    // j_l(x) = x^l / (2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+2k+1)!!)-ish;
    // standard series j_l = sum_k (-1)^k x^{2k+l} / (2^k k! (2l+2k+1)!!).
    let mut dfact = 1.0; // (2l+1)!!
    for k in 1..=l {
        dfact *= 2.0 * k as f64 + 1.0;
    }
    let mut term = x.powi(l as i32) / dfact;
    let mut sum = term;
    let x2 = x * x;
    for k in 1..60 {
        let kf = k as f64;
        term *= -x2 / (2.0 * kf * (2.0 * (l as f64 + kf) + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n as u32, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n as u32, x);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: u32, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
