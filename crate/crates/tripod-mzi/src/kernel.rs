//! Memory kernels and their Schmidt decomposition.
//!
//! The write stage of the broadband memory maps an input envelope a_in onto a
//! spin wave through
//!
//! ```text
//! b(z) = -(1/sqrt 2) int_0^T dt a_in(T - t) G(t, z),
//! G(t, z) = int_0^t ds cos(t - 2s) J0(sqrt(z s)) J0(sqrt(z (t - s)))
//! ```
//!
//! (dimensionless retarded time and optical depth). A full write/read cycle
//! with backward retrieval composes two such maps into the symmetric kernel
//! `G2(t, t') = 1/2 int_0^L dz G(t, z) G(t', z)`, whose eigenmodes are the
//! temporal Schmidt modes phi_i with transfer eigenvalues sqrt(lambda_i).
//! All integrals run on Gauss-Legendre grids; a mode pair (phi_i, g_i) can be
//! evaluated off-grid through its defining integral relation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{
    gauss_legendre, j0_raw, symmetric_eig, Mat, NumericsError, QuadratureGrid,
};

/// Discard Schmidt modes whose singular value falls below this fraction of
/// the leading one.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("invalid kernel config: {0}")]
    InvalidConfig(String),
    #[error("kernel is numerically degenerate: no singular value above {rank_tol:.1e} of the maximum")]
    Degenerate { rank_tol: f64 },
    #[error("transfer eigenvalue {lambda} exceeds the passive bound 1 beyond tolerance")]
    EfficiencyBound { lambda: f64 },
    #[error("kernel objects were built from different configs")]
    ConfigMismatch,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Grid and resolution parameters shared by every kernel computation.
/// `t_w` is the write window, `l` the optical depth of the cell; both in the
/// dimensionless units of the propagation equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub t_w: f64,
    pub l: f64,
    pub n_t: usize,
    pub n_z: usize,
    pub n_inner: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            t_w: 5.5,
            l: 10.0,
            n_t: 256,
            n_z: 256,
            n_inner: 128,
        }
    }
}

impl KernelConfig {
    pub fn validate(&self) -> Result<(), KernelError> {
        if !self.t_w.is_finite() || self.t_w <= 0.0 {
            return Err(KernelError::InvalidConfig(format!(
                "t_w must be positive and finite, got {}",
                self.t_w
            )));
        }
        if !self.l.is_finite() || self.l <= 0.0 {
            return Err(KernelError::InvalidConfig(format!(
                "l must be positive and finite, got {}",
                self.l
            )));
        }
        for (name, v) in [("n_t", self.n_t), ("n_z", self.n_z)] {
            if v < 8 || v > crate::numerics::eigen_max_dim() {
                return Err(KernelError::InvalidConfig(format!(
                    "{name} must lie in [8, {}], got {v}",
                    crate::numerics::eigen_max_dim()
                )));
            }
        }
        if self.n_inner < 4 || self.n_inner > 4096 {
            return Err(KernelError::InvalidConfig(format!(
                "n_inner must lie in [4, 4096], got {}",
                self.n_inner
            )));
        }
        Ok(())
    }
}

/// Write kernel sampled on the (t, z) product grid.
#[derive(Debug, Clone)]
pub struct WriteKernel {
    pub config: KernelConfig,
    pub t_grid: QuadratureGrid,
    pub z_grid: QuadratureGrid,
    /// `values[(i, j)] = G(t_i, z_j)`.
    pub values: Mat,
    inner_unit: QuadratureGrid,
}

/// Inner convolution on [0, t], rescaled from a unit rule. The cosine factor
/// makes the odd (sine) part cancel pairwise, so the result is real.
fn kernel_value(unit: &QuadratureGrid, t: f64, z: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (u, w) in unit.nodes.iter().zip(&unit.weights) {
        let s = t * u;
        acc += w * (t - 2.0 * s).cos() * j0_raw((z * s).sqrt()) * j0_raw((z * (t - s)).sqrt());
    }
    t * acc
}

/// Ghost sine part of the same convolution; vanishes by symmetry and serves
/// as a per-cell sanity diagnostic in debug runs.
fn kernel_odd_part(unit: &QuadratureGrid, t: f64, z: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (u, w) in unit.nodes.iter().zip(&unit.weights) {
        let s = t * u;
        acc += w * (t - 2.0 * s).sin() * j0_raw((z * s).sqrt()) * j0_raw((z * (t - s)).sqrt());
    }
    t * acc
}

/// Single off-grid kernel evaluation with a freshly built inner rule.
pub fn eval_write_kernel_at(config: &KernelConfig, t: f64, z: f64) -> Result<f64, KernelError> {
    config.validate()?;
    if !t.is_finite() || !z.is_finite() || t < 0.0 || z < 0.0 {
        return Err(KernelError::InvalidConfig(format!(
            "evaluation point (t = {t}, z = {z}) outside the domain"
        )));
    }
    let unit = gauss_legendre(config.n_inner, 0.0, 1.0)?;
    Ok(kernel_value(&unit, t, z))
}

pub fn compute_write_kernel(config: &KernelConfig) -> Result<WriteKernel, KernelError> {
    Ok(compute_write_kernel_diag(config)?.0)
}

/// As `compute_write_kernel`, additionally returning the largest absolute
/// value of the ghost sine part over the grid.
pub fn compute_write_kernel_diag(config: &KernelConfig) -> Result<(WriteKernel, f64), KernelError> {
    config.validate()?;
    let t_grid = gauss_legendre(config.n_t, 0.0, config.t_w)?;
    let z_grid = gauss_legendre(config.n_z, 0.0, config.l)?;
    let inner_unit = gauss_legendre(config.n_inner, 0.0, 1.0)?;

    let mut values = Mat::zeros(config.n_t, config.n_z);
    let odd_max = {
        let t_nodes = &t_grid.nodes;
        let z_nodes = &z_grid.nodes;
        values
            .par_rows_mut()
            .enumerate()
            .map(|(i, row)| {
                let t = t_nodes[i];
                let mut odd: f64 = 0.0;
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = kernel_value(&inner_unit, t, z_nodes[j]);
                    odd = odd.max(kernel_odd_part(&inner_unit, t, z_nodes[j]).abs());
                }
                odd
            })
            .reduce(|| 0.0, f64::max)
    };

    Ok((
        WriteKernel {
            config: config.clone(),
            t_grid,
            z_grid,
            values,
            inner_unit,
        },
        odd_max,
    ))
}

impl WriteKernel {
    /// Kernel value at an arbitrary point, using the stored inner rule.
    pub fn eval_at(&self, t: f64, z: f64) -> f64 {
        kernel_value(&self.inner_unit, t, z)
    }
}

/// Symmetric full-cycle kernel `G2(t, t')` on the t grid.
#[derive(Debug, Clone)]
pub struct FullCycleKernel {
    pub t_grid: QuadratureGrid,
    pub values: Mat,
}

/// `G2 = 1/2 int dz G(t, z) G(t', z)` with a shared z sum; the matrix is
/// symmetric exactly because cells (i, j) and (j, i) are assigned once.
pub fn compute_full_cycle(wk: &WriteKernel) -> FullCycleKernel {
    let n = wk.config.n_t;
    let wz = &wk.z_grid.weights;
    let mut values = Mat::zeros(n, n);
    // upper triangle rows in parallel, then mirror
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = wk.values.row(i);
            (i..n)
                .map(|j| {
                    let rj = wk.values.row(j);
                    let mut acc = 0.0;
                    for k in 0..wz.len() {
                        acc += wz[k] * ri[k] * rj[k];
                    }
                    0.5 * acc
                })
                .collect()
        })
        .collect();
    for i in 0..n {
        for (off, v) in rows[i].iter().enumerate() {
            let j = i + off;
            values[(i, j)] = *v;
            values[(j, i)] = *v;
        }
    }
    FullCycleKernel {
        t_grid: wk.t_grid.clone(),
        values,
    }
}

/// Validation path: every (t, t') cell is integrated independently, nesting
/// the inner convolution of the first factor over [0, t_i] outside the z sum.
/// Cells (i, j) and (j, i) therefore follow genuinely different quadrature
/// routes and their agreement measures real integration error, not copy
/// symmetry. `n_s` and `n_zq` are the validation resolutions.
pub fn full_cycle_direct(
    config: &KernelConfig,
    n_s: usize,
    n_zq: usize,
) -> Result<Mat, KernelError> {
    config.validate()?;
    let t_grid = gauss_legendre(config.n_t, 0.0, config.t_w)?;
    let zq = gauss_legendre(n_zq, 0.0, config.l)?;
    let unit = gauss_legendre(n_s, 0.0, 1.0)?;
    let n = config.n_t;

    // second factor G(t_j, z_k), evaluated once per (j, k)
    let gb = Mat::from_fn(n, n_zq, |j, k| kernel_value(&unit, t_grid.nodes[j], zq.nodes[k]));

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = t_grid.nodes[i];
            // bessel table for the outer s nodes of row i
            let mut table = vec![0.0; n_s * n_zq];
            for (si, u) in unit.nodes.iter().enumerate() {
                let s = t * u;
                for (k, z) in zq.nodes.iter().enumerate() {
                    table[si * n_zq + k] =
                        j0_raw((z * s).sqrt()) * j0_raw((z * (t - s)).sqrt());
                }
            }
            (0..n)
                .map(|j| {
                    let gbj = gb.row(j);
                    let mut outer = 0.0;
                    for (si, (u, w)) in unit.nodes.iter().zip(&unit.weights).enumerate() {
                        let mut inner = 0.0;
                        let trow = &table[si * n_zq..(si + 1) * n_zq];
                        for k in 0..n_zq {
                            inner += zq.weights[k] * trow[k] * gbj[k];
                        }
                        outer += w * (t - 2.0 * t * u).cos() * inner;
                    }
                    0.5 * t * outer
                })
                .collect()
        })
        .collect();

    let mut out = Mat::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        out.row_mut(i).copy_from_slice(&row);
    }
    Ok(out)
}

/// Schmidt mode pairs of the full cycle: temporal modes phi_i on the t grid,
/// spatial modes g_i on the z grid, transfer eigenvalues lambda_i (descending)
/// and write-stage norms mu_i = 2 sqrt(lambda_i).
#[derive(Debug, Clone)]
pub struct SchmidtBasis {
    pub config: KernelConfig,
    pub t_grid: QuadratureGrid,
    pub z_grid: QuadratureGrid,
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    /// `phi[(j, i)] = phi_i(t_j)`, orthonormal under the t weights.
    pub phi: Mat,
    /// `g[(k, i)] = g_i(z_k)`, orthonormal under the z weights.
    pub g: Mat,
    inner_unit: QuadratureGrid,
}

/// Diagonalise the weighted full-cycle matrix. The similarity transform
/// `M = W^(1/2) G2 W^(1/2)` turns quadrature orthonormality into plain vector
/// orthonormality, so a symmetric eigensolve is exactly the Nystrom method.
pub fn schmidt_decompose(
    fck: &FullCycleKernel,
    wk: &WriteKernel,
    rank_tol: f64,
) -> Result<SchmidtBasis, KernelError> {
    if fck.t_grid.len() != wk.t_grid.len()
        || fck.t_grid.b != wk.t_grid.b
        || fck.t_grid.nodes.first() != wk.t_grid.nodes.first()
    {
        return Err(KernelError::ConfigMismatch);
    }
    if !(rank_tol > 0.0) || !rank_tol.is_finite() {
        return Err(KernelError::InvalidConfig(format!(
            "rank_tol must be positive and finite, got {rank_tol}"
        )));
    }
    let n = fck.t_grid.len();
    let sqrt_w: Vec<f64> = fck.t_grid.weights.iter().map(|w| w.sqrt()).collect();
    let m = Mat::from_fn(n, n, |i, j| sqrt_w[i] * fck.values[(i, j)] * sqrt_w[j]);
    let eig = symmetric_eig(&m)?;

    let s_max = eig.values[0];
    if !(s_max > 0.0) {
        return Err(KernelError::Degenerate { rank_tol });
    }
    let cut = rank_tol * s_max;
    let retained: Vec<usize> = (0..n).filter(|&i| eig.values[i] >= cut).collect();
    if retained.is_empty() {
        return Err(KernelError::Degenerate { rank_tol });
    }

    let mut lambdas = Vec::with_capacity(retained.len());
    let mut mus = Vec::with_capacity(retained.len());
    let mut phi = Mat::zeros(n, retained.len());
    for (col, &idx) in retained.iter().enumerate() {
        let s = eig.values[idx];
        let lam = s * s;
        if lam > 1.0 + 1e-6 {
            return Err(KernelError::EfficiencyBound { lambda: lam });
        }
        lambdas.push(lam);
        mus.push(2.0 * lam.sqrt());
        // sign convention: phi_i at the first t node is non-negative
        let flip = if eig.vectors[(0, idx)] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            phi[(j, col)] = flip * eig.vectors[(j, idx)] / sqrt_w[j];
        }
    }

    // spatial partners inherit phi's signs through the defining integral
    let nz = wk.z_grid.len();
    let wt = &wk.t_grid.weights;
    let mut g = Mat::zeros(nz, retained.len());
    for (col, _) in retained.iter().enumerate() {
        let norm = 1.0 / mus[col].sqrt();
        for k in 0..nz {
            let mut acc = 0.0;
            for j in 0..n {
                acc += wt[j] * phi[(j, col)] * wk.values[(j, k)];
            }
            g[(k, col)] = norm * acc;
        }
    }

    Ok(SchmidtBasis {
        config: wk.config.clone(),
        t_grid: wk.t_grid.clone(),
        z_grid: wk.z_grid.clone(),
        lambdas,
        mus,
        phi,
        g,
        inner_unit: gauss_legendre(wk.config.n_inner, 0.0, 1.0)?,
    })
}

impl SchmidtBasis {
    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    /// Zero-frequency amplitude `phi_i(w = 0) = T^(-1/2) int phi_i(t) dt`.
    /// Squared, this is the fraction of a monochromatic drive picked up by
    /// mode i; the squares summed over any mode set stay below 1.
    pub fn phi_zero_frequency(&self, i: usize) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.t_grid.len() {
            acc += self.t_grid.weights[j] * self.phi[(j, i)];
        }
        acc / self.config.t_w.sqrt()
    }

    /// Off-grid temporal mode value via `phi_i(t) = mu_i^(-1/2) int g_i(z) G(t, z) dz`.
    pub fn phi_at(&self, i: usize, t: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.z_grid.len() {
            acc += self.z_grid.weights[k]
                * self.g[(k, i)]
                * kernel_value(&self.inner_unit, t, self.z_grid.nodes[k]);
        }
        acc / self.mus[i].sqrt()
    }

    /// Off-grid spatial mode value via `g_i(z) = mu_i^(-1/2) int phi_i(t) G(t, z) dt`.
    pub fn g_at(&self, i: usize, z: f64) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.t_grid.len() {
            acc += self.t_grid.weights[j]
                * self.phi[(j, i)]
                * kernel_value(&self.inner_unit, self.t_grid.nodes[j], z);
        }
        acc / self.mus[i].sqrt()
    }

    /// Largest deviation from weighted orthonormality, for (phi, g).
    pub fn orthonormality_defect(&self) -> (f64, f64) {
        let defect = |mat: &Mat, grid: &QuadratureGrid| {
            let mut worst: f64 = 0.0;
            for i in 0..self.n_modes() {
                for j in i..self.n_modes() {
                    let mut acc = 0.0;
                    for r in 0..grid.len() {
                        acc += grid.weights[r] * mat[(r, i)] * mat[(r, j)];
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((acc - want).abs());
                }
            }
            worst
        };
        (defect(&self.phi, &self.t_grid), defect(&self.g, &self.z_grid))
    }

    /// Relative L2 error of rebuilding the full-cycle kernel from the
    /// retained modes, measured in the quadrature-weighted norm.
    pub fn reconstruction_error(&self, fck: &FullCycleKernel) -> f64 {
        let n = self.t_grid.len();
        let sqrt_w: Vec<f64> = self.t_grid.weights.iter().map(|w| w.sqrt()).collect();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            for j in 0..n {
                let m = sqrt_w[i] * fck.values[(i, j)] * sqrt_w[j];
                let mut rec = 0.0;
                for (col, lam) in self.lambdas.iter().enumerate() {
                    rec += lam.sqrt()
                        * (sqrt_w[i] * self.phi[(i, col)])
                        * (sqrt_w[j] * self.phi[(j, col)]);
                }
                num += (m - rec) * (m - rec);
                den += m * m;
            }
        }
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> KernelConfig {
        KernelConfig {
            n_t: 48,
            n_z: 48,
            n_inner: 96,
            ..KernelConfig::default()
        }
    }

    #[test]
    fn z0_column_is_a_sine() {
        let cfg = small_config();
        let v = eval_write_kernel_at(&cfg, 1.0, 0.0).unwrap();
        assert!((v - 0.8414709848).abs() < 1e-8);
        let wk = compute_write_kernel(&cfg).unwrap();
        for &t in &wk.t_grid.nodes {
            assert!((wk.eval_at(t, 0.0) - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishes_at_zero_duration() {
        let cfg = small_config();
        assert_eq!(eval_write_kernel_at(&cfg, 0.0, 3.0).unwrap(), 0.0);
        // smallest t node carries O(t_min) mass only
        let wk = compute_write_kernel(&cfg).unwrap();
        let t_min = wk.t_grid.nodes[0];
        for j in 0..cfg.n_z {
            assert!(wk.values[(0, j)].abs() <= 2.0 * t_min);
        }
    }

    #[test]
    fn interior_point_matches_refined_quadrature() {
        // reference from a 10x-refined independent quadrature of the same integrand
        let cfg = KernelConfig {
            n_inner: 128,
            ..KernelConfig::default()
        };
        let v = eval_write_kernel_at(&cfg, 2.0, 5.0).unwrap();
        assert!((v - -5.9953926414521e-3).abs() < 1e-7);
        let refined = eval_write_kernel_at(
            &KernelConfig {
                n_inner: 1280,
                ..cfg
            },
            2.0,
            5.0,
        )
        .unwrap();
        assert!((v - refined).abs() < 1e-10);
    }

    #[test]
    fn ghost_sine_part_stays_numerically_zero() {
        let (_, odd) = compute_write_kernel_diag(&small_config()).unwrap();
        assert!(odd <= 1e-10, "odd part {odd}");
    }

    #[test]
    fn full_cycle_is_exactly_symmetric_and_frozen_value_holds() {
        let cfg = KernelConfig {
            n_t: 48,
            n_z: 256,
            n_inner: 128,
            ..KernelConfig::default()
        };
        let wk = compute_write_kernel(&cfg).unwrap();
        let fck = compute_full_cycle(&wk);
        assert_eq!(fck.values.max_abs_diff(&fck.values.transpose()), 0.0);

        // reference value of G2(1, 1) from a refined-grid computation
        let ga: Vec<f64> = wk.z_grid.nodes.iter().map(|&z| wk.eval_at(1.0, z)).collect();
        let g2_11 = 0.5 * wk.z_grid.inner_product(&ga, &ga);
        assert!(
            (g2_11 - 0.59959759674723).abs() < 1e-6 * 0.6,
            "G2(1,1) = {g2_11}"
        );
    }

    #[test]
    fn direct_cell_integration_is_symmetric_and_consistent() {
        let cfg = KernelConfig {
            n_t: 24,
            n_z: 64,
            n_inner: 96,
            ..KernelConfig::default()
        };
        let direct = full_cycle_direct(&cfg, 96, 96).unwrap();
        assert!(direct.max_abs_diff(&direct.transpose()) <= 1e-10);
        let wk = compute_write_kernel(&cfg).unwrap();
        let fck = compute_full_cycle(&wk);
        assert!(direct.max_abs_diff(&fck.values) <= 1e-7);
    }

    fn basis_for(cfg: &KernelConfig) -> (WriteKernel, FullCycleKernel, SchmidtBasis) {
        let wk = compute_write_kernel(cfg).unwrap();
        let fck = compute_full_cycle(&wk);
        let basis = schmidt_decompose(&fck, &wk, DEFAULT_RANK_TOL).unwrap();
        (wk, fck, basis)
    }

    #[test]
    fn schmidt_spectrum_at_the_reference_operating_point() {
        let cfg = KernelConfig {
            n_t: 96,
            n_z: 96,
            n_inner: 96,
            ..KernelConfig::default()
        };
        let (_, fck, basis) = basis_for(&cfg);
        // leading eigenvalues are grid-converged to ~1e-10 at this resolution
        assert!(basis.lambdas[0] > 0.99542 && basis.lambdas[0] < 0.99545);
        assert!(basis.lambdas[1] > 0.7782 && basis.lambdas[1] < 0.7785);
        assert!(basis.lambdas.windows(2).all(|w| w[0] >= w[1]));
        assert!(basis.lambdas.iter().all(|&l| l >= 0.0 && l <= 1.0 + 1e-6));
        for (i, &mu) in basis.mus.iter().enumerate() {
            assert_eq!(mu, 2.0 * basis.lambdas[i].sqrt());
        }

        let p1 = basis.phi_zero_frequency(0).powi(2);
        let p2 = basis.phi_zero_frequency(1).powi(2);
        assert!(p1 > 0.5570 && p1 < 0.5580, "phi1(0)^2 = {p1}");
        assert!(p2 > 0.3748 && p2 < 0.3758, "phi2(0)^2 = {p2}");
        let total: f64 = (0..basis.n_modes())
            .map(|i| basis.phi_zero_frequency(i).powi(2))
            .sum();
        assert!(total <= 1.0 + 1e-9);

        let (dp, dg) = basis.orthonormality_defect();
        assert!(dp <= 1e-8 && dg <= 1e-8, "defects {dp} {dg}");
        assert!(basis.reconstruction_error(&fck) <= 1e-6);

        // sign convention
        for i in 0..basis.n_modes() {
            assert!(basis.phi[(0, i)] >= 0.0);
        }
    }

    #[test]
    fn leading_eigenvalue_stable_under_4x_refinement() {
        let coarse = KernelConfig {
            n_t: 64,
            n_z: 64,
            n_inner: 128,
            ..KernelConfig::default()
        };
        let fine = KernelConfig {
            n_t: 256,
            n_z: 256,
            n_inner: 128,
            ..KernelConfig::default()
        };
        let (_, _, bc) = basis_for(&coarse);
        let (_, _, bf) = basis_for(&fine);
        let rel = (bc.lambdas[0] - bf.lambdas[0]).abs() / bf.lambdas[0];
        assert!(rel < 1e-4, "relative drift {rel}");
    }

    #[test]
    fn leading_eigenvalue_converged_above_200_nodes() {
        let mk = |n: usize| KernelConfig {
            n_t: n,
            n_z: n,
            n_inner: 128,
            ..KernelConfig::default()
        };
        let (_, _, b200) = basis_for(&mk(200));
        let (_, _, b400) = basis_for(&mk(400));
        let rel = (b200.lambdas[0] - b400.lambdas[0]).abs() / b400.lambdas[0];
        assert!(rel < 1e-3, "relative drift {rel}");
    }

    #[test]
    fn off_grid_evaluation_agrees_with_grid_samples() {
        let cfg = small_config();
        let (_, _, basis) = basis_for(&cfg);
        // at a grid node the integral extension must reproduce the sample
        for &i in &[0usize, 1] {
            let j = 17;
            let got = basis.phi_at(i, basis.t_grid.nodes[j]);
            assert!((got - basis.phi[(j, i)]).abs() < 1e-8);
            let k = 29;
            let gz = basis.g_at(i, basis.z_grid.nodes[k]);
            assert!((gz - basis.g[(k, i)]).abs() < 1e-8);
        }
        // off-grid, compare with barycentric resampling of the grid samples
        let b = crate::numerics::Barycentric::new(&basis.t_grid.nodes).unwrap();
        let col: Vec<f64> = (0..cfg.n_t).map(|j| basis.phi[(j, 0)]).collect();
        for t in [0.3, 1.9, 3.7, 5.2] {
            assert!((basis.phi_at(0, t) - b.eval(&col, t)).abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_cut_is_reported() {
        let cfg = small_config();
        let wk = compute_write_kernel(&cfg).unwrap();
        let fck = compute_full_cycle(&wk);
        assert!(matches!(
            schmidt_decompose(&fck, &wk, 2.0),
            Err(KernelError::Degenerate { .. })
        ));
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        for bad in [
            KernelConfig { t_w: 0.0, ..KernelConfig::default() },
            KernelConfig { t_w: f64::NAN, ..KernelConfig::default() },
            KernelConfig { l: -1.0, ..KernelConfig::default() },
            KernelConfig { n_t: 4, ..KernelConfig::default() },
            KernelConfig { n_inner: 0, ..KernelConfig::default() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(eval_write_kernel_at(&KernelConfig::default(), -1.0, 0.0).is_err());
    }
}
