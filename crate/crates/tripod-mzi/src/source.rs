//! Quadrature statistics of the sub-Poissonian semiconductor laser feeding
//! the memory, projected onto the retained temporal Schmidt modes.
//!
//! The laser emits a bright carrier with pump-noise-suppressed amplitude
//! fluctuations. Cut into a pulse of duration T_W, each Schmidt mode picks up
//! a coherent amplitude proportional to its zero-frequency weight phi_i(0)
//! and, when occupied, a squeezed quadrature whose normally ordered variance
//! follows from the two-sided exponential amplitude correlation function
//!
//! ```text
//! <:dx(t) dx(t'):> = n0 * (gamma/2) exp(-gamma |t - t'|),
//! n0 = -(1/4)(1 - mu)/(1 - mu/2)^2,   gamma = kappa T_W / T_W
//! ```
//!
//! with synchronization parameter mu. For kappa T_W >> 1 the kernel collapses
//! to a delta and the variance becomes mode independent.

use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{ModeSpec, VACUUM_VAR};
use crate::kernel::SchmidtBasis;
use crate::numerics::{Barycentric, NumericsError};

/// Schmidt modes with zero-frequency weight below this stay in vacuum.
pub const OCCUPANCY_THRESHOLD: f64 = 0.01;

/// Below this kappa T_W the finite-pulse correction replaces the flat-limit
/// variance in input specs.
pub const FLAT_LIMIT_KAPPA_TW: f64 = 1e3;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("invalid source parameters: {0}")]
    InvalidParams(String),
    #[error("mode index {i} out of range (retained modes: {n_modes})")]
    ModeIndex { i: usize, n_modes: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quadrature {
    X,
    Y,
}

/// Laser and pulse parameters. `n_bar_tw` is the mean photon number per
/// pulse, `mu` the synchronization parameter and `kappa_tw` the pulse
/// duration in units of the inverse noise-suppression bandwidth.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SourceParams {
    pub n_bar_tw: f64,
    pub mu: f64,
    pub kappa_tw: f64,
    pub squeezed_quadrature: Quadrature,
}

impl Default for SourceParams {
    fn default() -> Self {
        SourceParams {
            n_bar_tw: 1000.0,
            mu: 0.1,
            kappa_tw: 1e4,
            squeezed_quadrature: Quadrature::X,
        }
    }
}

impl SourceParams {
    /// Hard validity plus soft warnings about parameter ranges where the
    /// underlying laser model degrades.
    pub fn validate(&self) -> Result<Vec<String>, SourceError> {
        if !self.n_bar_tw.is_finite() || self.n_bar_tw < 0.0 {
            return Err(SourceError::InvalidParams(format!(
                "n_bar_tw must be finite and >= 0, got {}",
                self.n_bar_tw
            )));
        }
        // mu = 1 is the coherent limit and is allowed as a boundary case
        if !self.mu.is_finite() || self.mu <= 0.0 || self.mu > 1.0 {
            return Err(SourceError::InvalidParams(format!(
                "mu must lie in (0, 1], got {}",
                self.mu
            )));
        }
        if !self.kappa_tw.is_finite() || self.kappa_tw <= 0.0 {
            return Err(SourceError::InvalidParams(format!(
                "kappa_tw must be finite and > 0, got {}",
                self.kappa_tw
            )));
        }
        let mut warnings = Vec::new();
        if self.mu > 0.5 {
            warnings.push(format!(
                "mu = {} is large; the squeezing model assumes mu << 1",
                self.mu
            ));
        }
        if self.kappa_tw < 10.0 {
            warnings.push(format!(
                "kappa_tw = {} is small; the pulse no longer averages the laser noise",
                self.kappa_tw
            ));
        }
        Ok(warnings)
    }
}

/// Initial conditions for one retained Schmidt mode.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModePulse {
    pub mode_index: usize,
    pub occupancy: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    /// True when the mode sits below the occupancy threshold and was left
    /// in vacuum.
    pub vacuum: bool,
}

impl ModePulse {
    pub fn as_mode_spec(&self) -> ModeSpec {
        ModeSpec {
            mean_x: self.mean_x,
            mean_y: self.mean_y,
            var_x: self.var_x,
            var_y: self.var_y,
        }
    }
}

/// Input description for the whole retained basis, one entry per mode, plus
/// the unassigned fraction of the zero-frequency weight.
#[derive(Debug, Clone, Serialize)]
pub struct InputPulseSpec {
    pub modes: Vec<ModePulse>,
    /// `1 - sum_i phi_i(0)^2`; photons in this fraction of the drive never
    /// enter a retained mode.
    pub parseval_gap: f64,
}

/// Mean photon number deposited in mode i: `n_bar_tw * phi_i(0)^2`.
pub fn mode_occupancy(
    params: &SourceParams,
    basis: &SchmidtBasis,
    i: usize,
) -> Result<f64, SourceError> {
    if i >= basis.n_modes() {
        return Err(SourceError::ModeIndex {
            i,
            n_modes: basis.n_modes(),
        });
    }
    Ok(params.n_bar_tw * basis.phi_zero_frequency(i).powi(2))
}

/// Flat-spectrum (kappa T_W -> infinity) squeezed-quadrature variance:
/// (normally ordered, full). The normally ordered part is
/// `-(1/4)(1 - mu)/(1 - mu/2)^2`; adding the vacuum 1/4 gives the full
/// variance, which reduces to mu^2/16 for small mu.
pub fn squeezed_variance(params: &SourceParams) -> (f64, f64) {
    let mu = params.mu;
    let denom = 1.0 - 0.5 * mu;
    let nord = -0.25 * (1.0 - mu) / (denom * denom);
    (nord, VACUUM_VAR + nord)
}

/// Overlap of a temporal mode with the two-sided exponential correlation
/// kernel, normalised so that the value tends to 1 as gamma -> infinity:
///
/// `F = gamma int dt phi(t) int dt' phi(t') exp(-gamma |t - t'|) / 2` with
/// `int phi^2 = 1`. The inner convolution solves v' = phi - gamma v with an
/// exponential-trapezoidal step, exact for the stiff part, so any gamma is
/// handled on a fixed fine grid.
fn lorentzian_overlap(
    phi_nodes: &[f64],
    t_nodes: &[f64],
    t_w: f64,
    gamma: f64,
    n_fine: usize,
) -> Result<f64, NumericsError> {
    let bary = Barycentric::new(t_nodes)?;
    let h = t_w / n_fine as f64;
    let phi: Vec<f64> = (0..=n_fine)
        .map(|k| bary.eval(phi_nodes, k as f64 * h))
        .collect();

    // On each step phi is linearised; v and the running integral of phi * v
    // are then advanced in closed form, so stiffness costs no accuracy:
    // v(s) = A exp(-gamma s) + B + (m / gamma) s with the coefficients below.
    let e = (-gamma * h).exp();
    let int_e = (1.0 - e) / gamma;
    let int_se = (1.0 - e * (1.0 + gamma * h)) / (gamma * gamma);
    let mut v = 0.0;
    let mut acc = 0.0;
    for k in 0..n_fine {
        let phi0 = phi[k];
        let m = (phi[k + 1] - phi0) / h;
        let a = v - phi0 / gamma + m / (gamma * gamma);
        let b = phi0 / gamma - m / (gamma * gamma);
        acc += a * (phi0 * int_e + m * int_se)
            + b * (phi0 * h + 0.5 * m * h * h)
            + (m / gamma) * (0.5 * phi0 * h * h + m * h * h * h / 3.0);
        v = a * e + b + m * h / gamma;
    }
    Ok(gamma * acc)
}

/// Normally ordered squeezed-quadrature variance of mode i at finite
/// kappa T_W, i.e. without replacing the exponential correlation kernel by a
/// delta. Always closer to zero (less squeezing) than the flat limit.
pub fn finite_pulse_correction(
    params: &SourceParams,
    basis: &SchmidtBasis,
    i: usize,
) -> Result<f64, SourceError> {
    if i >= basis.n_modes() {
        return Err(SourceError::ModeIndex {
            i,
            n_modes: basis.n_modes(),
        });
    }
    let t_w = basis.config.t_w;
    let gamma = params.kappa_tw / t_w;
    let phi_col: Vec<f64> = (0..basis.t_grid.len()).map(|j| basis.phi[(j, i)]).collect();
    let overlap = lorentzian_overlap(&phi_col, &basis.t_grid.nodes, t_w, gamma, 8000)?;
    let (nord, _) = squeezed_variance(params);
    Ok(nord * overlap)
}

/// Assemble the per-mode input description: coherent means from the
/// zero-frequency weights, squeezing on the configured quadrature for every
/// mode above the occupancy threshold, pure-state completion on the other
/// quadrature, vacuum elsewhere.
pub fn build_input_spec(
    params: &SourceParams,
    basis: &SchmidtBasis,
) -> Result<InputPulseSpec, SourceError> {
    params.validate()?;
    let use_finite = params.kappa_tw < FLAT_LIMIT_KAPPA_TW;
    let mut modes = Vec::with_capacity(basis.n_modes());
    let mut weight_sum = 0.0;
    for i in 0..basis.n_modes() {
        let phi0 = basis.phi_zero_frequency(i);
        weight_sum += phi0 * phi0;
        let occupancy = params.n_bar_tw * phi0 * phi0;
        if phi0 * phi0 < OCCUPANCY_THRESHOLD {
            modes.push(ModePulse {
                mode_index: i,
                occupancy,
                mean_x: 0.0,
                mean_y: 0.0,
                var_x: VACUUM_VAR,
                var_y: VACUUM_VAR,
                vacuum: true,
            });
            continue;
        }
        let nord = if use_finite {
            finite_pulse_correction(params, basis, i)?
        } else {
            squeezed_variance(params).0
        };
        let var_sq = VACUUM_VAR + nord;
        let var_anti = VACUUM_VAR * VACUUM_VAR / var_sq;
        let mean = params.n_bar_tw.sqrt() * phi0;
        let (mean_x, mean_y, var_x, var_y) = match params.squeezed_quadrature {
            Quadrature::X => (mean, 0.0, var_sq, var_anti),
            Quadrature::Y => (0.0, mean, var_anti, var_sq),
        };
        modes.push(ModePulse {
            mode_index: i,
            occupancy,
            mean_x,
            mean_y,
            var_x,
            var_y,
            vacuum: false,
        });
    }
    Ok(InputPulseSpec {
        modes,
        parseval_gap: 1.0 - weight_sum,
    })
}
