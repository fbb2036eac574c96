//! Fixed-rule quadrature used for normalization and phase integrals.

use crate::specfun::legendre_unchecked;

/// Composite Simpson rule over `[a, b]` with `panels` panels (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(2) + panels % 2;
    let h = (b - a) / panels as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..panels {
        let v = f(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

fn legendre_slope(order: usize, x: f64) -> f64 {
    let n = order as f64;
    n * (x * legendre_unchecked(order, x) - legendre_unchecked(order - 1, x)) / (x * x - 1.0)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let mut nodes = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        let n = order as f64;
        for i in 0..order {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            for _ in 0..100 {
                let dx = legendre_unchecked(order, x) / legendre_slope(order, x);
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let dp = legendre_slope(order, x);
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.integrate_span(f, a, b - a)
    }

    /// Integral of `f` over `[start, start + span]`. The span enters only as a
    /// factor and in the node offsets, so it keeps full relative precision
    /// even when `start + span` rounds to `start`.
    pub fn integrate_span<F: Fn(f64) -> f64>(&self, f: F, start: f64, span: f64) -> f64 {
        let half = 0.5 * span;
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(start + half * (1.0 + x)))
            .sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 4);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let gl = GaussLegendre::new(10);
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact up to degree 19
        let v = gl.integrate(|x| x.powi(18), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let s = gl.integrate(f64::sin, 0.0, std::f64::consts::PI);
        assert!((s - 2.0).abs() < 1e-13);
    }
}
