//! Desk-scale simulator of a broadband resonant tripod atomic memory driven as a
//! controllable Mach-Zehnder interferometer for quadrature-squeezed light pulses.
//!
//! The crate is organised as a pipeline:
//!
//! * [`numerics`] - self-contained special functions, quadrature and a symmetric
//!   eigensolver; everything downstream builds on these.
//! * [`kernel`] - the write kernel of the memory, the full write/read-cycle kernel
//!   and its Schmidt decomposition into temporal/spatial mode pairs.
//! * [`source`] - quadrature statistics of the sub-Poissonian semiconductor laser
//!   feeding the memory, projected onto the Schmidt modes.
//! * [`gaussian`] - a small Gaussian-state engine: covariance matrices over labelled
//!   modes, memory half-cycle maps, basis rotations and entanglement witnesses.
//! * [`protocol`] - write/read scenario scripts (store-and-retrieve, beam-splitting,
//!   two-pulse entangling, ...) evaluated per Schmidt mode.
//! * [`oracle`] - an independent finite-difference integration of the underlying
//!   three-wave equations, used to validate the kernel path end to end.
//! * [`config`], [`report`], [`cli`] - the file-driven front end.
//!
//! Most users should start from the runnable programs in `examples/`.

pub mod cli;
pub mod config;
pub mod gaussian;
pub mod kernel;
pub mod numerics;
pub mod oracle;
pub mod protocol;
pub mod report;
pub mod source;

pub use config::RunConfig;
pub use kernel::{
    compute_full_cycle, compute_write_kernel, compute_write_kernel_diag, schmidt_decompose,
    FullCycleKernel, KernelConfig, SchmidtBasis, WriteKernel, DEFAULT_RANK_TOL,
};
pub use source::{build_input_spec, InputPulseSpec, SourceParams};
