//! Gauss-Legendre quadrature on arbitrary finite intervals.

use super::NumericsError;

/// Nodes and weights of an n-point rule on [a, b]. Nodes are strictly
/// increasing and interior; weights are positive and sum to b - a.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Fixed-order weighted sum of f over the nodes. The summation order never
    /// changes, so results are bit-identical across runs and thread counts.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(*x);
        }
        acc
    }

    /// Weighted inner product of two functions sampled on the nodes.
    pub fn inner_product(&self, f: &[f64], g: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len());
        assert_eq!(g.len(), self.len());
        let mut acc = 0.0;
        for i in 0..self.len() {
            acc += self.weights[i] * f[i] * g[i];
        }
        acc
    }
}

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree
/// 2n - 1. Roots of the Legendre polynomial are found by Newton iteration
/// from the Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureGrid, NumericsError> {
    if n == 0 {
        return Err(NumericsError::InvalidArgument(
            "quadrature order must be positive".into(),
        ));
    }
    if !a.is_finite() {
        return Err(NumericsError::NonFinite { name: "a", value: a });
    }
    if !b.is_finite() {
        return Err(NumericsError::NonFinite { name: "b", value: b });
    }
    if a >= b {
        return Err(NumericsError::InvalidArgument(format!(
            "inverted or empty interval [{a}, {b}]"
        )));
    }

    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for k in 0..m {
        // k-th root in descending order, then mirrored
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut p_prime = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            p_prime = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p, dp) = legendre_and_derivative(n, x);
                p_prime = dp;
                x -= p / dp;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * p_prime * p_prime);
        ref_nodes[n - 1 - k] = x;
        ref_weights[n - 1 - k] = w;
        ref_nodes[k] = -x;
        ref_weights[k] = w;
    }
    if n % 2 == 1 {
        // odd rules have a node exactly at the origin
        ref_nodes[n / 2] = 0.0;
        let (_, dp) = legendre_and_derivative(n, 0.0);
        ref_weights[n / 2] = 2.0 / (dp * dp);
    }

    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes: Vec<f64> = ref_nodes.iter().map(|x| mid + half * x).collect();
    let weights: Vec<f64> = ref_weights.iter().map(|w| half * w).collect();
    Ok(QuadratureGrid { a, b, nodes, weights })
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 0.0;
    for j in 1..=n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p2) / j as f64;
    }
    let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
    (p0, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_point_rule_is_the_midpoint() {
        let g = gauss_legendre(1, 0.0, 1.0).unwrap();
        assert_eq!(g.nodes, vec![0.5]);
        assert_eq!(g.weights, vec![1.0]);
    }

    #[test]
    fn two_points_integrate_a_cubic_exactly() {
        let g = gauss_legendre(2, 0.0, 1.0).unwrap();
        let v = g.integrate(|x| x * x * x);
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn twenty_points_nail_a_full_sine_arc() {
        let g = gauss_legendre(20, 0.0, std::f64::consts::PI).unwrap();
        assert!((g.integrate(f64::sin) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_interior_and_increasing() {
        for n in [1, 2, 3, 7, 64, 257] {
            let g = gauss_legendre(n, -2.0, 3.0).unwrap();
            assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(g.nodes.iter().all(|&x| x > -2.0 && x < 3.0));
            assert!(g.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(gauss_legendre(4, 2.0, 1.0).is_err());
        assert!(gauss_legendre(4, f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_interval_length(n in 1usize..80, a in -5.0f64..5.0, len in 0.01f64..10.0) {
            let g = gauss_legendre(n, a, a + len).unwrap();
            let sum: f64 = g.weights.iter().sum();
            prop_assert!((sum - len).abs() < 1e-12 * len.max(1.0));
        }

        #[test]
        fn exact_for_monomials_up_to_degree_2n_minus_1(n in 1usize..20, a in -2.0f64..0.0, b in 0.5f64..2.0) {
            let g = gauss_legendre(n, a, b).unwrap();
            for d in 0..2 * n {
                let got = g.integrate(|x| x.powi(d as i32));
                let want = (b.powi(d as i32 + 1) - a.powi(d as i32 + 1)) / (d as f64 + 1.0);
                prop_assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "degree {d}: {got} vs {want}");
            }
        }
    }
}
