//! Gauss–Legendre quadrature.

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            x = 0.0;
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite rule: `panels` equal panels, each with a fixed Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl CompositeRule {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self {
            nodes,
            weights,
            panels: panels.max(1),
        }
    }

    pub fn integrate<T: Real>(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let h = (b - a) / T::from_usize_lossy(self.panels);
        let half = h * T::half();
        let mut total = T::zero();
        for p in 0..self.panels {
            let mid = a + h * (T::from_usize_lossy(p) + T::half());
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                total = total + T::lit(*w) * f(mid + half * T::lit(*x));
            }
        }
        total * half
    }
}
