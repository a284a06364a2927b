//! Write/read scenario scripts and their per-Schmidt-mode evaluation.
//!
//! A scenario is a short program: up to two writes (each feeding one input
//! pulse into one spin wave) followed by up to two reads. All statistics are
//! diagonal in the Schmidt index, so each retained mode runs in its own small
//! Gaussian register with the scalar transfer eigenvalue lambda_i; temporal
//! shapes only enter through the input occupancies.
//!
//! The driving field selects which spin wave a half cycle addresses: one
//! Rabi frequency alone couples to b1 or b2, the balanced combinations to
//! b+/- = (b1 +- b2)/sqrt 2. Writing in one basis and reading in the other is
//! what turns the memory into a Mach-Zehnder interferometer between the two
//! spin waves; the engine inserts the basis rotation automatically.

use serde::Serialize;
use thiserror::Error;

use crate::gaussian::{
    DuanSign, GaussianError, GaussianState, ModeLabel, ModeSpec, VACUUM_VAR,
};
use crate::kernel::SchmidtBasis;
use crate::source::InputPulseSpec;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("invalid scenario script: {0}")]
    Script(String),
    #[error("efficiency undefined: {0}")]
    Efficiency(String),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

/// Driving-field configuration of one half cycle. The total Rabi norm is the
/// same in all four cases, so every configuration produces the same kernel
/// and differs only in which spin wave it addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DrivingConfig {
    Omega1Only,
    Omega2Only,
    SymmetricPlus,
    SymmetricMinus,
}

impl DrivingConfig {
    /// Rabi amplitudes (Omega1, Omega2) in units of the total norm.
    pub fn amplitudes(self) -> (f64, f64) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            DrivingConfig::Omega1Only => (1.0, 0.0),
            DrivingConfig::Omega2Only => (0.0, 1.0),
            DrivingConfig::SymmetricPlus => (r, r),
            DrivingConfig::SymmetricMinus => (r, -r),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DrivingConfig::Omega1Only => "omega1",
            DrivingConfig::Omega2Only => "omega2",
            DrivingConfig::SymmetricPlus => "plus",
            DrivingConfig::SymmetricMinus => "minus",
        }
    }
}

/// The spin wave a driving configuration couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinWave {
    W1,
    W2,
    Plus,
    Minus,
}

/// Whether a wave lives in the individual (b1, b2) or the superposition
/// (b+, b-) basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinBasis {
    Individual,
    Superposition,
}

impl SpinWave {
    pub fn basis(self) -> SpinBasis {
        match self {
            SpinWave::W1 | SpinWave::W2 => SpinBasis::Individual,
            SpinWave::Plus | SpinWave::Minus => SpinBasis::Superposition,
        }
    }

    pub fn label(self) -> ModeLabel {
        match self {
            SpinWave::W1 => ModeLabel::Spin1,
            SpinWave::W2 => ModeLabel::Spin2,
            SpinWave::Plus => ModeLabel::SpinPlus,
            SpinWave::Minus => ModeLabel::SpinMinus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpinWave::W1 => "1",
            SpinWave::W2 => "2",
            SpinWave::Plus => "+",
            SpinWave::Minus => "-",
        }
    }
}

impl SpinBasis {
    fn waves(self) -> (SpinWave, SpinWave) {
        match self {
            SpinBasis::Individual => (SpinWave::W1, SpinWave::W2),
            SpinBasis::Superposition => (SpinWave::Plus, SpinWave::Minus),
        }
    }
}

/// Spin wave addressed by a driving configuration.
pub fn target_wave(cfg: DrivingConfig) -> SpinWave {
    match cfg {
        DrivingConfig::Omega1Only => SpinWave::W1,
        DrivingConfig::Omega2Only => SpinWave::W2,
        DrivingConfig::SymmetricPlus => SpinWave::Plus,
        DrivingConfig::SymmetricMinus => SpinWave::Minus,
    }
}

/// One write: which input pulse (0 or 1) enters under which driving field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WriteStep {
    pub pulse: usize,
    pub drive: DrivingConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioScript {
    pub name: String,
    pub title: String,
    pub writes: Vec<WriteStep>,
    pub reads: Vec<DrivingConfig>,
    /// Mix the two input pulses on a balanced splitter before writing.
    pub entangled_inputs: bool,
}

impl ScenarioScript {
    /// Structural checks: at most two writes into distinct waves of one
    /// basis, at most two reads from distinct waves of one basis, input
    /// pulse ids within range, entangled inputs only with two writes.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.name.is_empty() {
            return Err(ProtocolError::Script("empty scenario name".into()));
        }
        if self.writes.len() > 2 {
            return Err(ProtocolError::Script(format!(
                "{} writes requested; the register holds two spin waves",
                self.writes.len()
            )));
        }
        if self.reads.len() > 2 {
            return Err(ProtocolError::Script(format!(
                "{} reads requested; at most two are possible",
                self.reads.len()
            )));
        }
        if let [a, b] = self.writes[..] {
            let (wa, wb) = (target_wave(a.drive), target_wave(b.drive));
            if wa == wb {
                return Err(ProtocolError::Script(format!(
                    "both writes address spin wave {}; re-writing an excited wave is not modelled",
                    wa.name()
                )));
            }
            if wa.basis() != wb.basis() {
                return Err(ProtocolError::Script(
                    "the two written waves must be orthogonal (same basis pair)".into(),
                ));
            }
            if a.pulse == b.pulse {
                return Err(ProtocolError::Script(
                    "both writes consume the same input pulse".into(),
                ));
            }
        }
        for w in &self.writes {
            if w.pulse > 1 {
                return Err(ProtocolError::Script(format!(
                    "input pulse id {} out of range (two pulses available)",
                    w.pulse
                )));
            }
        }
        if let [a, b] = self.reads[..] {
            let (ra, rb) = (target_wave(a), target_wave(b));
            if ra == rb {
                return Err(ProtocolError::Script(format!(
                    "both reads address spin wave {}",
                    ra.name()
                )));
            }
            if ra.basis() != rb.basis() {
                return Err(ProtocolError::Script(
                    "successive reads must address waves of the same basis pair".into(),
                ));
            }
        }
        if self.entangled_inputs && self.writes.len() != 2 {
            return Err(ProtocolError::Script(
                "entangled inputs require two writes".into(),
            ));
        }
        Ok(())
    }
}

/// The six scripted protocols.
pub fn builtin_scenarios() -> Vec<ScenarioScript> {
    let w = |pulse, drive| WriteStep { pulse, drive };
    vec![
        ScenarioScript {
            name: "S1".into(),
            title: "store and retrieve one squeezed pulse through the same wave".into(),
            writes: vec![w(0, DrivingConfig::SymmetricPlus)],
            reads: vec![DrivingConfig::SymmetricPlus],
            entangled_inputs: false,
        },
        ScenarioScript {
            name: "S2".into(),
            title: "store in the plus wave, read half of it out via wave 1".into(),
            writes: vec![w(0, DrivingConfig::SymmetricPlus)],
            reads: vec![DrivingConfig::Omega1Only],
            entangled_inputs: false,
        },
        ScenarioScript {
            name: "S3".into(),
            title: "split one stored pulse into two half-squeezed outputs".into(),
            writes: vec![w(0, DrivingConfig::SymmetricPlus)],
            reads: vec![DrivingConfig::Omega1Only, DrivingConfig::Omega2Only],
            entangled_inputs: false,
        },
        ScenarioScript {
            name: "S4".into(),
            title: "entangle two independently squeezed pulses across the basis change".into(),
            writes: vec![
                w(0, DrivingConfig::SymmetricPlus),
                w(1, DrivingConfig::SymmetricMinus),
            ],
            reads: vec![DrivingConfig::Omega1Only, DrivingConfig::Omega2Only],
            entangled_inputs: false,
        },
        ScenarioScript {
            name: "S5".into(),
            title: "store two pulses and retrieve both unchanged (interferometer identity)".into(),
            writes: vec![
                w(0, DrivingConfig::SymmetricPlus),
                w(1, DrivingConfig::SymmetricMinus),
            ],
            reads: vec![DrivingConfig::SymmetricPlus, DrivingConfig::SymmetricMinus],
            entangled_inputs: false,
        },
        ScenarioScript {
            name: "S6".into(),
            title: "disentangle two entangled inputs through the basis-changing read".into(),
            writes: vec![
                w(0, DrivingConfig::SymmetricPlus),
                w(1, DrivingConfig::SymmetricMinus),
            ],
            reads: vec![DrivingConfig::Omega1Only, DrivingConfig::Omega2Only],
            entangled_inputs: true,
        },
    ]
}

/// Full and normally ordered second moments of one register mode.
#[derive(Debug, Clone, Serialize)]
pub struct ModeMetrics {
    pub label: String,
    pub photon_number: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub nord_var_x: f64,
    pub nord_var_y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DuanEntry {
    pub mode_a: String,
    pub mode_b: String,
    pub value: f64,
    pub sign: DuanSign,
}

/// Everything measured on the register of one Schmidt mode.
#[derive(Debug, Clone, Serialize)]
pub struct ModeReport {
    /// 1-based Schmidt index, matching the file outputs.
    pub mode: usize,
    pub lambda: f64,
    /// Spin photons per input photon after the write stage; present only
    /// for single-write scenarios with a non-vacuum input.
    pub write_efficiency: Option<f64>,
    pub inputs: Vec<ModeMetrics>,
    pub outputs: Vec<ModeMetrics>,
    /// Spin waves never consumed by a read.
    pub spins: Vec<ModeMetrics>,
    pub duan: Vec<DuanEntry>,
    /// Largest cross-covariance magnitude between the two outputs, when two
    /// reads produced them.
    pub output_cross_covariance: Option<f64>,
    pub min_symplectic_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub title: String,
    pub entangled_inputs: bool,
    pub writes: Vec<String>,
    pub reads: Vec<String>,
    pub notes: Vec<String>,
    pub modes: Vec<ModeReport>,
}

fn metrics(state: &GaussianState, label: ModeLabel) -> Result<ModeMetrics, GaussianError> {
    let m = state.mode_moments(label)?;
    Ok(ModeMetrics {
        label: label.to_string(),
        photon_number: state.photon_number(label)?,
        mean_x: m.mean_x,
        mean_y: m.mean_y,
        var_x: m.var_x,
        var_y: m.var_y,
        nord_var_x: m.var_x - VACUUM_VAR,
        nord_var_y: m.var_y - VACUUM_VAR,
    })
}

/// Evaluate one Schmidt mode's register.
fn run_mode(
    script: &ScenarioScript,
    mode_index: usize,
    lambda: f64,
    pulses: &[ModeSpec; 2],
    idealized: bool,
) -> Result<ModeReport, ProtocolError> {
    let write_basis = script
        .writes
        .first()
        .map(|w| target_wave(w.drive).basis())
        .unwrap_or(SpinBasis::Superposition);
    let read_basis = script
        .reads
        .first()
        .map(|&r| target_wave(r).basis())
        .unwrap_or(write_basis);

    let in_labels = [ModeLabel::In1, ModeLabel::In2];
    let out_labels = [ModeLabel::Out1, ModeLabel::Out2];
    let (sa, sb) = write_basis.waves();
    let mut labels = Vec::new();
    labels.extend(in_labels.iter().take(script.writes.len().max(1)));
    labels.push(sa.label());
    labels.push(sb.label());
    labels.extend(out_labels.iter().take(script.reads.len()));
    let n_half_cycles = script.writes.len() + script.reads.len();
    labels.extend((0..n_half_cycles as u32).map(ModeLabel::Loss));
    let mut state = GaussianState::vacuum_register(&labels)?;

    for (k, w) in script.writes.iter().enumerate() {
        let spec = &pulses[w.pulse];
        if idealized {
            state.set_mode_idealized(in_labels[k], spec)?;
        } else {
            state.set_mode(in_labels[k], spec)?;
        }
    }
    if script.entangled_inputs {
        state.rotate_pm_basis(ModeLabel::In1, ModeLabel::In2)?;
    }
    let inputs = script
        .writes
        .iter()
        .enumerate()
        .map(|(k, _)| metrics(&state, in_labels[k]))
        .collect::<Result<Vec<_>, _>>()?;
    let input_photons: f64 = inputs.iter().map(|m| m.photon_number).sum();

    let mut loss_counter = 0u32;
    for (k, w) in script.writes.iter().enumerate() {
        state.memory_half_cycle(
            in_labels[k],
            target_wave(w.drive).label(),
            ModeLabel::Loss(loss_counter),
            lambda,
        )?;
        loss_counter += 1;
    }

    let write_efficiency = if script.writes.len() == 1 && input_photons > 0.0 {
        let spin_photons = state.photon_number(target_wave(script.writes[0].drive).label())?;
        Some(spin_photons / input_photons)
    } else {
        None
    };

    // hop to the read basis once, carrying the labels along
    let mut spin_basis = write_basis;
    if !script.reads.is_empty() && read_basis != write_basis {
        let (ca, cb) = spin_basis.waves();
        let (na, nb) = read_basis.waves();
        state.rotate_pm_basis(ca.label(), cb.label())?;
        state.relabel(ca.label(), na.label())?;
        state.relabel(cb.label(), nb.label())?;
        spin_basis = read_basis;
    }

    let mut consumed = Vec::new();
    for (k, &r) in script.reads.iter().enumerate() {
        let wave = target_wave(r);
        state.memory_half_cycle(
            wave.label(),
            out_labels[k],
            ModeLabel::Loss(loss_counter),
            lambda,
        )?;
        loss_counter += 1;
        consumed.push(wave);
    }

    let outputs = (0..script.reads.len())
        .map(|k| metrics(&state, out_labels[k]))
        .collect::<Result<Vec<_>, _>>()?;
    let (ra, rb) = spin_basis.waves();
    let live_spins: Vec<SpinWave> = [ra, rb]
        .into_iter()
        .filter(|w| !consumed.contains(w))
        .collect();
    let spins = live_spins
        .iter()
        .map(|w| metrics(&state, w.label()))
        .collect::<Result<Vec<_>, _>>()?;

    // witness values over every output/surviving-spin pair
    let mut duan = Vec::new();
    let mut witness_labels: Vec<ModeLabel> = (0..script.reads.len())
        .map(|k| out_labels[k])
        .collect();
    witness_labels.extend(live_spins.iter().map(|w| w.label()));
    for i in 0..witness_labels.len() {
        for j in (i + 1)..witness_labels.len() {
            let (value, sign) = state.duan(witness_labels[i], witness_labels[j])?;
            duan.push(DuanEntry {
                mode_a: witness_labels[i].to_string(),
                mode_b: witness_labels[j].to_string(),
                value,
                sign,
            });
        }
    }
    // an un-read spin pair is also reported in the conjugate basis, where
    // cross-written correlations (or their absence) become visible
    if live_spins.len() == 2 {
        let mut rotated = state.clone();
        let (ca, cb) = spin_basis.waves();
        let conj = match spin_basis {
            SpinBasis::Individual => SpinBasis::Superposition,
            SpinBasis::Superposition => SpinBasis::Individual,
        };
        let (na, nb) = conj.waves();
        rotated.rotate_pm_basis(ca.label(), cb.label())?;
        rotated.relabel(ca.label(), na.label())?;
        rotated.relabel(cb.label(), nb.label())?;
        let (value, sign) = rotated.duan(na.label(), nb.label())?;
        duan.push(DuanEntry {
            mode_a: na.label().to_string(),
            mode_b: nb.label().to_string(),
            value,
            sign,
        });
    }

    let output_cross_covariance = if script.reads.len() == 2 {
        let block = state.cross_covariance(ModeLabel::Out1, ModeLabel::Out2)?;
        Some(
            block
                .iter()
                .flatten()
                .fold(0.0f64, |acc, v| acc.max(v.abs())),
        )
    } else {
        None
    };

    Ok(ModeReport {
        mode: mode_index + 1,
        lambda,
        write_efficiency,
        inputs,
        outputs,
        spins,
        duan,
        output_cross_covariance,
        min_symplectic_eigenvalue: state.min_symplectic_eigenvalue()?,
    })
}

fn assemble(
    script: &ScenarioScript,
    lambdas: &[f64],
    per_mode_pulses: &[[ModeSpec; 2]],
    idealized: bool,
) -> Result<ScenarioReport, ProtocolError> {
    script.validate()?;
    assert_eq!(lambdas.len(), per_mode_pulses.len());
    let mut modes = Vec::with_capacity(lambdas.len());
    for (i, (&lambda, pulses)) in lambdas.iter().zip(per_mode_pulses).enumerate() {
        modes.push(run_mode(script, i, lambda, pulses, idealized)?);
    }
    let mut notes = Vec::new();
    if !script.reads.is_empty() && lambdas.iter().any(|&l| l < 1.0) {
        notes.push(
            "post-read spin residuals live in loss modes; their full variances \
             follow the vacuum-completion convention"
                .into(),
        );
    }
    Ok(ScenarioReport {
        scenario: script.name.clone(),
        title: script.title.clone(),
        entangled_inputs: script.entangled_inputs,
        writes: script
            .writes
            .iter()
            .map(|w| format!("pulse{} -> {}", w.pulse + 1, w.drive.name()))
            .collect(),
        reads: script.reads.iter().map(|r| r.name().to_string()).collect(),
        notes,
        modes,
    })
}

/// Physical evaluation: per retained Schmidt mode, pulse 1 comes from the
/// source description and pulse 2 is its mirror image squeezed along the
/// orthogonal quadrature. Input specs pass the uncertainty check.
pub fn run_scenario(
    script: &ScenarioScript,
    basis: &SchmidtBasis,
    input: &InputPulseSpec,
) -> Result<ScenarioReport, ProtocolError> {
    if input.modes.len() != basis.n_modes() {
        return Err(ProtocolError::Script(format!(
            "input spec covers {} modes, basis retains {}",
            input.modes.len(),
            basis.n_modes()
        )));
    }
    let lambdas: Vec<f64> = basis.lambdas.clone();
    let pulses: Vec<[ModeSpec; 2]> = input
        .modes
        .iter()
        .map(|m| {
            let p1 = m.as_mode_spec();
            let p2 = ModeSpec {
                mean_x: p1.mean_y,
                mean_y: p1.mean_x,
                var_x: p1.var_y,
                var_y: p1.var_x,
            };
            [p1, p2]
        })
        .collect();
    assemble(script, &lambdas, &pulses, false)
}

/// Exact-limit evaluation with explicit transfer eigenvalues and pulse
/// specs, bypassing the uncertainty check so noiseless quadratures can probe
/// the analytic limits. Not a model of any physical source.
pub fn run_scenario_idealized(
    script: &ScenarioScript,
    lambdas: &[f64],
    per_mode_pulses: &[[ModeSpec; 2]],
) -> Result<ScenarioReport, ProtocolError> {
    if lambdas.len() != per_mode_pulses.len() {
        return Err(ProtocolError::Script(format!(
            "{} eigenvalues but {} pulse spec pairs",
            lambdas.len(),
            per_mode_pulses.len()
        )));
    }
    for &l in lambdas {
        if !(0.0..=1.0).contains(&l) {
            return Err(ProtocolError::Script(format!(
                "transfer eigenvalue {l} outside [0, 1]"
            )));
        }
    }
    assemble(script, lambdas, per_mode_pulses, true)
}

/// Spin photons per input photon for mode i of a single-write report.
pub fn efficiency(report: &ScenarioReport, i: usize) -> Result<f64, ProtocolError> {
    let mode = report
        .modes
        .get(i)
        .ok_or_else(|| ProtocolError::Efficiency(format!("no mode {i} in the report")))?;
    mode.write_efficiency.ok_or_else(|| {
        ProtocolError::Efficiency(
            "undefined for multi-write scenarios or vacuum input".into(),
        )
    })
}
