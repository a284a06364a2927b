//! Self-contained numerical building blocks: Bessel J0, Gauss-Legendre rules,
//! a cyclic-Jacobi symmetric eigensolver, barycentric interpolation and a
//! minimal dense matrix type.
//!
//! Everything here is pure and deterministic; no global state, f64 throughout.

mod bessel;
mod eigen;
mod interp;
mod mat;
mod quadrature;

pub use bessel::bessel_j0;
pub(crate) use bessel::j0_raw;
pub use eigen::{eigen_max_dim, symmetric_eig, SymmetricEigen};
pub use interp::Barycentric;
pub use mat::Mat;
pub use quadrature::{gauss_legendre, QuadratureGrid};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("non-finite input {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix not symmetric: max asymmetry {max_asymmetry:.3e} exceeds {tolerance:.3e}")]
    NotSymmetric { max_asymmetry: f64, tolerance: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension {dim} exceeds supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
}
