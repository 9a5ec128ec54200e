//! Gauss-Legendre quadrature. The 64-point rule doubles as the axial
//! fallback integrator and as the per-axis rule of the 3D grid oracle.

use std::sync::LazyLock;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

static GL64: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| gauss_legendre(64));

/// Nodes and weights of the n-point rule mapped to [lo, hi].
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let c = 0.5 * (hi + lo);
    let h = 0.5 * (hi - lo);
    (
        xs.iter().map(|x| c + h * x).collect(),
        ws.iter().map(|w| w * h).collect(),
    )
}

/// 64-point Gauss-Legendre integral of `f` over [lo, hi].
pub fn integrate_gl64<F: Fn(f64) -> f64>(lo: f64, hi: f64, f: F) -> f64 {
    let (xs, ws) = &*GL64;
    let c = 0.5 * (hi + lo);
    let h = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * f(c + h * x);
    }
    acc * h
}
