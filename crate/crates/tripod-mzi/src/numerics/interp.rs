//! Barycentric Lagrange interpolation on arbitrary distinct nodes.
//!
//! Weights are built in log space so that hundreds of Gauss nodes do not
//! overflow the product formula. Used to resample Schmidt modes from
//! quadrature nodes onto fine uniform grids.

use super::NumericsError;

#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    pub fn new(nodes: &[f64]) -> Result<Self, NumericsError> {
        if nodes.len() < 2 {
            return Err(NumericsError::InvalidArgument(
                "need at least two interpolation nodes".into(),
            ));
        }
        let n = nodes.len();
        let mut log_w = vec![0.0f64; n];
        let mut sign = vec![1.0f64; n];
        for j in 0..n {
            for k in 0..n {
                if k == j {
                    continue;
                }
                let d = nodes[j] - nodes[k];
                if d == 0.0 {
                    return Err(NumericsError::InvalidArgument(format!(
                        "duplicate interpolation node {}",
                        nodes[j]
                    )));
                }
                log_w[j] -= d.abs().ln();
                if d < 0.0 {
                    sign[j] = -sign[j];
                }
            }
        }
        let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights = (0..n).map(|j| sign[j] * (log_w[j] - max).exp()).collect();
        Ok(Barycentric {
            nodes: nodes.to_vec(),
            weights,
        })
    }

    /// Interpolate values (sampled on the nodes) at x.
    pub fn eval(&self, values: &[f64], x: f64) -> f64 {
        assert_eq!(values.len(), self.nodes.len());
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..self.nodes.len() {
            let d = x - self.nodes[j];
            if d.abs() < 1e-307 {
                return values[j];
            }
            let t = self.weights[j] / d;
            num += t * values[j];
            den += t;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre;

    #[test]
    fn reproduces_a_polynomial_exactly() {
        let g = gauss_legendre(8, -1.0, 2.0).unwrap();
        let f = |x: f64| 1.0 - 3.0 * x + 0.5 * x.powi(4);
        let vals: Vec<f64> = g.nodes.iter().map(|&x| f(x)).collect();
        let b = Barycentric::new(&g.nodes).unwrap();
        for x in [-0.9, -0.3, 0.0, 0.7, 1.99] {
            assert!((b.eval(&vals, x) - f(x)).abs() < 1e-12);
        }
        // at a node, returns the sample itself
        assert_eq!(b.eval(&vals, g.nodes[3]), vals[3]);
    }

    #[test]
    fn smooth_function_on_many_gauss_nodes() {
        let g = gauss_legendre(200, 0.0, 5.5).unwrap();
        let f = |x: f64| (1.7 * x).sin() * (-0.3 * x).exp();
        let vals: Vec<f64> = g.nodes.iter().map(|&x| f(x)).collect();
        let b = Barycentric::new(&g.nodes).unwrap();
        let mut x = 0.01;
        while x < 5.5 {
            assert!((b.eval(&vals, x) - f(x)).abs() < 1e-10, "at {x}");
            x += 0.37;
        }
    }

    #[test]
    fn rejects_degenerate_node_sets() {
        assert!(Barycentric::new(&[1.0]).is_err());
        assert!(Barycentric::new(&[1.0, 1.0]).is_err());
    }
}
