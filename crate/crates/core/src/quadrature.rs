//! Gauss–Legendre quadrature on `[-1, 1]`.

use std::f64::consts::PI;

/// Nodes and weights of an `n`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Newton iteration stops once the root update falls below this.
const NEWTON_TOLERANCE: f64 = 1e-14;

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the asymptotic guesses
    /// `cos(pi (i - 1/4) / (n + 1/2))`, weights `2 / ((1 - x^2) P_n'(x)^2)`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_slope(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < NEWTON_TOLERANCE {
                    break;
                }
            }
            let (_, dp) = legendre_and_slope(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// `sum_i w_i f(x_i)` over `[-1, 1]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_and_slope(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for l in 1..n {
        let p2 = ((2 * l + 1) as f64 * x * p1 - l as f64 * p0) / (l + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let p_prev = if n == 0 { 0.0 } else { p0 };
    (p, n as f64 * (x * p - p_prev) / (x * x - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two_and_nodes_are_sorted() {
        for n in [1, 2, 5, 16, 64, 128] {
            let rule = GaussLegendre::new(n);
            assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(8);
        for p in 0..16 {
            let exact = if p % 2 == 1 {
                0.0
            } else {
                2.0 / (p + 1) as f64
            };
            assert_relative_eq!(rule.integrate(|x| x.powi(p)), exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn three_point_rule_closed_form() {
        let rule = GaussLegendre::new(3);
        let r = (0.6_f64).sqrt();
        assert_relative_eq!(rule.nodes[0], -r, epsilon = 1e-15);
        assert_eq!(rule.nodes[1], 0.0);
        assert_relative_eq!(rule.weights[0], 5.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(rule.weights[1], 8.0 / 9.0, epsilon = 1e-15);
    }
}
