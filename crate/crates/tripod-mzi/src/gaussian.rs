//! Gaussian quadrature-statistics engine.
//!
//! States are tracked through first moments and the covariance matrix of the
//! quadratures (x, y) of a handful of labelled modes, with vacuum variance
//! 1/4. Every protocol step of the memory is a Gaussian map, so this is exact
//! for the squeezed inputs considered here.
//!
//! A memory half cycle (one write or one read addressing a single Schmidt
//! mode) acts on the addressed mode and a fresh loss mode as the orthogonal
//! pair coupling
//!
//! ```text
//! ( -lambda^(1/4)        sqrt(1 - sqrt(lambda)) )
//! ( sqrt(1 - sqrt(lambda))      lambda^(1/4)    )
//! ```
//!
//! applied identically to x and y, which is symplectic. Two half cycles
//! compose to the familiar sqrt(lambda) full-cycle transfer.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{symmetric_eig, Mat, NumericsError};

/// Vacuum variance of each quadrature in this convention.
pub const VACUUM_VAR: f64 = 0.25;

#[derive(Debug, Error)]
pub enum GaussianError {
    #[error("unknown mode {0}")]
    UnknownMode(String),
    #[error("duplicate mode label {0}")]
    DuplicateMode(String),
    #[error("mode {0} must be vacuum at this step")]
    NotVacuum(String),
    #[error("invalid mode spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Roles a mode can play in a memory scenario. `Loss` indexes the fresh
/// vacuum ancillas consumed by successive half cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    In1,
    In2,
    Spin1,
    Spin2,
    SpinPlus,
    SpinMinus,
    Out1,
    Out2,
    Loss(u32),
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeLabel::In1 => write!(f, "in1"),
            ModeLabel::In2 => write!(f, "in2"),
            ModeLabel::Spin1 => write!(f, "spin1"),
            ModeLabel::Spin2 => write!(f, "spin2"),
            ModeLabel::SpinPlus => write!(f, "spin_plus"),
            ModeLabel::SpinMinus => write!(f, "spin_minus"),
            ModeLabel::Out1 => write!(f, "out1"),
            ModeLabel::Out2 => write!(f, "out2"),
            ModeLabel::Loss(k) => write!(f, "loss{k}"),
        }
    }
}

/// Initial second and first moments for one mode. The quadratures are
/// uncorrelated at preparation; correlations only arise through the maps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeSpec {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
}

impl ModeSpec {
    pub fn vacuum() -> Self {
        ModeSpec {
            mean_x: 0.0,
            mean_y: 0.0,
            var_x: VACUUM_VAR,
            var_y: VACUUM_VAR,
        }
    }
}

/// Marginal moments of one mode inside a larger state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

/// Which sign convention attained the minimum in the two-mode variance
/// witness: `PlusMinus` is V(x_a + x_b) + V(y_a - y_b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DuanSign {
    PlusMinus,
    MinusPlus,
}

#[derive(Debug, Clone)]
pub struct GaussianState {
    labels: Vec<ModeLabel>,
    /// (x_0, y_0, x_1, y_1, ...)
    mean: Vec<f64>,
    cov: Mat,
}

impl GaussianState {
    /// All modes in vacuum. Labels must be distinct.
    pub fn vacuum_register(labels: &[ModeLabel]) -> Result<Self, GaussianError> {
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(GaussianError::DuplicateMode(a.to_string()));
            }
        }
        let n = 2 * labels.len();
        let mut cov = Mat::zeros(n, n);
        for i in 0..n {
            cov[(i, i)] = VACUUM_VAR;
        }
        Ok(GaussianState {
            labels: labels.to_vec(),
            mean: vec![0.0; n],
            cov,
        })
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    fn index(&self, label: ModeLabel) -> Result<usize, GaussianError> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| GaussianError::UnknownMode(label.to_string()))
    }

    fn check_spec(spec: &ModeSpec, allow_sub_heisenberg: bool) -> Result<(), GaussianError> {
        for (name, v) in [
            ("mean_x", spec.mean_x),
            ("mean_y", spec.mean_y),
            ("var_x", spec.var_x),
            ("var_y", spec.var_y),
        ] {
            if !v.is_finite() {
                return Err(GaussianError::InvalidSpec(format!("{name} = {v}")));
            }
        }
        if spec.var_x < 0.0 || spec.var_y < 0.0 {
            return Err(GaussianError::InvalidSpec(format!(
                "negative variance ({}, {})",
                spec.var_x, spec.var_y
            )));
        }
        if !allow_sub_heisenberg {
            // V(x) V(y) >= 1/16, with a little slack for round-off
            let bound = VACUUM_VAR * VACUUM_VAR * (1.0 - 1e-9);
            if spec.var_x * spec.var_y < bound {
                return Err(GaussianError::InvalidSpec(format!(
                    "variance product {:.3e} violates the uncertainty bound {:.3e}",
                    spec.var_x * spec.var_y,
                    VACUUM_VAR * VACUUM_VAR
                )));
            }
        }
        Ok(())
    }

    fn write_spec(&mut self, idx: usize, spec: &ModeSpec) {
        let n = self.cov.rows();
        let (ix, iy) = (2 * idx, 2 * idx + 1);
        for r in [ix, iy] {
            for c in 0..n {
                self.cov[(r, c)] = 0.0;
                self.cov[(c, r)] = 0.0;
            }
        }
        self.cov[(ix, ix)] = spec.var_x;
        self.cov[(iy, iy)] = spec.var_y;
        self.mean[ix] = spec.mean_x;
        self.mean[iy] = spec.mean_y;
    }

    /// Prepare a mode in a (possibly displaced, squeezed) product state.
    /// Existing correlations with that mode are discarded. The spec must
    /// respect the uncertainty bound V(x) V(y) >= 1/16.
    pub fn set_mode(&mut self, label: ModeLabel, spec: &ModeSpec) -> Result<(), GaussianError> {
        Self::check_spec(spec, false)?;
        let idx = self.index(label)?;
        self.write_spec(idx, spec);
        Ok(())
    }

    /// As `set_mode`, but without the uncertainty check. Exists for probing
    /// exact limits (for instance a noiseless quadrature) that no physical
    /// source attains; reported symplectic eigenvalues then drop below 1/4.
    pub fn set_mode_idealized(
        &mut self,
        label: ModeLabel,
        spec: &ModeSpec,
    ) -> Result<(), GaussianError> {
        Self::check_spec(spec, true)?;
        let idx = self.index(label)?;
        self.write_spec(idx, spec);
        Ok(())
    }

    fn is_vacuum_idx(&self, idx: usize) -> bool {
        let (ix, iy) = (2 * idx, 2 * idx + 1);
        if self.mean[ix].abs() > 1e-12 || self.mean[iy].abs() > 1e-12 {
            return false;
        }
        for r in [ix, iy] {
            for c in 0..self.cov.cols() {
                let want = if r == c { VACUUM_VAR } else { 0.0 };
                if (self.cov[(r, c)] - want).abs() > 1e-12 {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_vacuum(&self, label: ModeLabel) -> Result<bool, GaussianError> {
        Ok(self.is_vacuum_idx(self.index(label)?))
    }

    /// Apply a 2x2 matrix jointly to the x and y quadratures of two modes.
    fn apply_pair(&mut self, p: usize, q: usize, r: [[f64; 2]; 2]) {
        let n = self.cov.rows();
        let mut s = Mat::identity(n);
        for off in 0..2 {
            let (a, b) = (2 * p + off, 2 * q + off);
            s[(a, a)] = r[0][0];
            s[(a, b)] = r[0][1];
            s[(b, a)] = r[1][0];
            s[(b, b)] = r[1][1];
        }
        self.cov = s.mul(&self.cov).mul(&s.transpose());
        self.mean = s.mul_vec(&self.mean);
    }

    /// One write or read half cycle with transfer eigenvalue `lambda`.
    ///
    /// `from` is consumed, `to` receives the stored or retrieved wave and
    /// `loss` picks up the untransferred remainder; `to` and `loss` must be
    /// vacuum beforehand. After the call `from` labels a vacuum mode.
    pub fn memory_half_cycle(
        &mut self,
        from: ModeLabel,
        to: ModeLabel,
        loss: ModeLabel,
        lambda: f64,
    ) -> Result<(), GaussianError> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(GaussianError::InvalidArgument(format!(
                "transfer eigenvalue {lambda} outside [0, 1]"
            )));
        }
        let pf = self.index(from)?;
        let pt = self.index(to)?;
        let pl = self.index(loss)?;
        if pf == pt || pf == pl || pt == pl {
            return Err(GaussianError::InvalidArgument(
                "half cycle needs three distinct modes".into(),
            ));
        }
        for (idx, label) in [(pt, to), (pl, loss)] {
            if !self.is_vacuum_idx(idx) {
                return Err(GaussianError::NotVacuum(label.to_string()));
            }
        }
        let root = lambda.sqrt();
        let quarter = root.sqrt();
        let t = (1.0 - root).max(0.0).sqrt();
        self.apply_pair(pf, pl, [[-quarter, t], [t, quarter]]);
        // the transformed slot now holds the destination wave
        self.labels.swap(pf, pt);
        Ok(())
    }

    /// Balanced rotation between two modes: (a, b) -> ((a+b), (a-b))/sqrt 2
    /// on both quadratures. Involutive; used to hop between the individual
    /// and the superposition spin-wave bases and to entangle input pairs.
    pub fn rotate_pm_basis(&mut self, a: ModeLabel, b: ModeLabel) -> Result<(), GaussianError> {
        let pa = self.index(a)?;
        let pb = self.index(b)?;
        if pa == pb {
            return Err(GaussianError::InvalidArgument(
                "rotation needs two distinct modes".into(),
            ));
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.apply_pair(pa, pb, [[r, r], [r, -r]]);
        Ok(())
    }

    /// Rename a mode; the target name must be free.
    pub fn relabel(&mut self, from: ModeLabel, to: ModeLabel) -> Result<(), GaussianError> {
        if from == to {
            return Ok(());
        }
        if self.labels.contains(&to) {
            return Err(GaussianError::DuplicateMode(to.to_string()));
        }
        let idx = self.index(from)?;
        self.labels[idx] = to;
        Ok(())
    }

    /// 2x2 cross-covariance block between two modes:
    /// rows (x_a, y_a), columns (x_b, y_b). Zero iff the modes are
    /// statistically independent (for Gaussian states with these labels).
    pub fn cross_covariance(
        &self,
        a: ModeLabel,
        b: ModeLabel,
    ) -> Result<[[f64; 2]; 2], GaussianError> {
        let pa = self.index(a)?;
        let pb = self.index(b)?;
        if pa == pb {
            return Err(GaussianError::InvalidArgument(
                "cross covariance needs two distinct modes".into(),
            ));
        }
        let mut out = [[0.0; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.cov[(2 * pa + r, 2 * pb + c)];
            }
        }
        Ok(out)
    }

    pub fn mode_moments(&self, label: ModeLabel) -> Result<ModeMoments, GaussianError> {
        let idx = self.index(label)?;
        let (ix, iy) = (2 * idx, 2 * idx + 1);
        Ok(ModeMoments {
            mean_x: self.mean[ix],
            mean_y: self.mean[iy],
            var_x: self.cov[(ix, ix)],
            var_y: self.cov[(iy, iy)],
            cov_xy: self.cov[(ix, iy)],
        })
    }

    /// Mean photon number of one mode, displacement included.
    pub fn photon_number(&self, label: ModeLabel) -> Result<f64, GaussianError> {
        let m = self.mode_moments(label)?;
        Ok(m.mean_x * m.mean_x
            + m.mean_y * m.mean_y
            + (m.var_x - VACUUM_VAR)
            + (m.var_y - VACUUM_VAR))
    }

    /// Two-mode variance witness
    /// `D = min[ V(x_a + x_b) + V(y_a - y_b), V(x_a - x_b) + V(y_a + y_b) ]`.
    /// Any separable state satisfies D >= 1 in this normalisation; smaller
    /// values certify entanglement between the two modes.
    pub fn duan(&self, a: ModeLabel, b: ModeLabel) -> Result<(f64, DuanSign), GaussianError> {
        let pa = self.index(a)?;
        let pb = self.index(b)?;
        if pa == pb {
            return Err(GaussianError::InvalidArgument(
                "witness needs two distinct modes".into(),
            ));
        }
        let v = |r: usize, c: usize| self.cov[(r, c)];
        let (xa, ya, xb, yb) = (2 * pa, 2 * pa + 1, 2 * pb, 2 * pb + 1);
        let sum = |sx: f64, sy: f64| {
            v(xa, xa) + v(xb, xb) + 2.0 * sx * v(xa, xb) + v(ya, ya) + v(yb, yb)
                + 2.0 * sy * v(ya, yb)
        };
        let plus_minus = sum(1.0, -1.0);
        let minus_plus = sum(-1.0, 1.0);
        if plus_minus <= minus_plus {
            Ok((plus_minus, DuanSign::PlusMinus))
        } else {
            Ok((minus_plus, DuanSign::MinusPlus))
        }
    }

    /// Smallest symplectic eigenvalue of the full covariance matrix.
    /// Physical states satisfy nu_min >= 1/4; idealized preparations fall
    /// below that deliberately.
    pub fn min_symplectic_eigenvalue(&self) -> Result<f64, GaussianError> {
        let n = self.cov.rows();
        // V^(1/2) through the spectral decomposition; tiny negative
        // eigenvalues from round-off are clamped
        let eig = symmetric_eig(&self.cov)?;
        let mut s = Mat::zeros(n, n);
        for k in 0..n {
            let d = eig.values[k].max(0.0).sqrt();
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += d * eig.vectors[(i, k)] * eig.vectors[(j, k)];
                }
            }
        }
        // K = V^(1/2) J V^(1/2) with J the symplectic form; -K^2 is
        // symmetric PSD with eigenvalues nu_i^2 (each twice)
        let mut j_mat = Mat::zeros(n, n);
        for m in 0..self.labels.len() {
            j_mat[(2 * m, 2 * m + 1)] = 1.0;
            j_mat[(2 * m + 1, 2 * m)] = -1.0;
        }
        let k = s.mul(&j_mat).mul(&s);
        let neg_k2 = {
            let k2 = k.mul(&k);
            Mat::from_fn(n, n, |i, j| -0.5 * (k2[(i, j)] + k2[(j, i)]))
        };
        let nus = symmetric_eig(&neg_k2)?;
        let min = nus.values.last().copied().unwrap_or(0.0);
        Ok(min.max(0.0).sqrt())
    }

    /// Per-mode moments keyed by label text, for reporting.
    pub fn snapshot(&self) -> Vec<(String, ModeMoments)> {
        self.labels
            .iter()
            .map(|&l| (l.to_string(), self.mode_moments(l).unwrap()))
            .collect()
    }
}
