//! Symmetric eigendecomposition by cyclic Jacobi sweeps.
//!
//! Chosen for its unconditional robustness and bit-reproducibility; the
//! matrices in this crate stay small enough (n <= 2000) that the O(n^3) sweep
//! cost is irrelevant next to kernel assembly.

use super::{Mat, NumericsError};

pub const MAX_DIM: usize = 2000;
const MAX_SWEEPS: usize = 60;

/// Largest matrix dimension `symmetric_eig` accepts.
pub fn eigen_max_dim() -> usize {
    MAX_DIM
}

/// Eigenvalues in descending order; `vectors` holds the matching orthonormal
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

pub fn symmetric_eig(a: &Mat) -> Result<SymmetricEigen, NumericsError> {
    if a.rows() != a.cols() {
        return Err(NumericsError::InvalidArgument(format!(
            "matrix is {}x{}, expected square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_DIM {
        return Err(NumericsError::DimensionTooLarge { dim: n, max: MAX_DIM });
    }
    let scale = a.max_abs();
    let tol = 1e-10 * scale;
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if asym > tol {
        return Err(NumericsError::NotSymmetric {
            max_asymmetry: asym,
            tolerance: tol,
        });
    }

    // work on the symmetrised copy so tiny input asymmetry cannot bias a side
    let mut m = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = Mat::identity(n);

    if n > 1 {
        let stop = 1e-15 * scale.max(f64::MIN_POSITIVE);
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            let mut off: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(m[(p, q)].abs());
                }
            }
            if off <= stop {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq.abs() <= stop * 1e-2 {
                        continue;
                    }
                    let theta = 0.5 * (m[(q, q)] - m[(p, p)]) / apq;
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);

                    let app = m[(p, p)];
                    let aqq = m[(q, q)];
                    m[(p, p)] = app - t * apq;
                    m[(q, q)] = aqq + t * apq;
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    for r in 0..n {
                        if r != p && r != q {
                            let arp = m[(r, p)];
                            let arq = m[(r, q)];
                            let np = arp - s * (arq + tau * arp);
                            let nq = arq + s * (arp - tau * arq);
                            m[(r, p)] = np;
                            m[(p, r)] = np;
                            m[(r, q)] = nq;
                            m[(q, r)] = nq;
                        }
                    }
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp - s * (vrq + tau * vrp);
                        v[(r, q)] = vrq + s * (vrp - tau * vrq);
                    }
                }
            }
        }
        if !converged {
            // final check after the last sweep
            let mut off: f64 = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off.max(m[(p, q)].abs());
                }
            }
            if off > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap().then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}
