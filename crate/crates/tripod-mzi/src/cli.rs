//! Command-line front end: one subcommand per pipeline stage, deterministic
//! CSV/JSON files in the configured output directory.
//!
//! Exit codes: 0 success, 2 configuration or validation failure, 3 numerical
//! failure, 4 I/O failure. The TRIPOD_MZI_THREADS environment variable caps
//! the worker pool; emitted numbers never depend on the thread count.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{parse_config, OutputFormat, RunConfig};
use crate::gaussian::GaussianError;
use crate::kernel::{
    compute_full_cycle, compute_write_kernel, compute_write_kernel_diag, schmidt_decompose,
    FullCycleKernel, KernelError, SchmidtBasis, WriteKernel, DEFAULT_RANK_TOL,
};
use crate::oracle::{compare_with_kernel, integrate_write, OracleError, PdeGrid};
use crate::protocol::{run_scenario, DrivingConfig, ProtocolError};
use crate::report::{
    self, fields_csv, full_cycle_csv, kernel_csv, oracle_csv, scenario_csv, schmidt_csv,
    schmidt_table, source_csv, source_table, sweep_csv, DebugInfo, ReportBundle, SweepRow,
};
use crate::source::{build_input_spec, SourceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Validation,
    Numerical,
    Io,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ExitKind::Validation => 2,
            ExitKind::Numerical => 3,
            ExitKind::Io => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::new(ExitKind::Validation, e.to_string())
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        let kind = match e {
            KernelError::InvalidConfig(_) | KernelError::ConfigMismatch => ExitKind::Validation,
            _ => ExitKind::Numerical,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<SourceError> for CliError {
    fn from(e: SourceError) -> Self {
        let kind = match e {
            SourceError::Numerics(_) => ExitKind::Numerical,
            _ => ExitKind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<GaussianError> for CliError {
    fn from(e: GaussianError) -> Self {
        let kind = match e {
            GaussianError::Numerics(_) | GaussianError::NotVacuum(_) => ExitKind::Numerical,
            _ => ExitKind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Gaussian(g) => g.into(),
            other => CliError::new(ExitKind::Validation, other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let kind = match e {
            OracleError::Unstable { .. } => ExitKind::Numerical,
            _ => ExitKind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new(ExitKind::Io, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tripod-mzi",
    version,
    about = "Desk-scale simulator of a two-wave resonant quantum memory \
             operated as a Mach-Zehnder interferometer"
)]
pub struct Cli {
    /// INI run configuration; worked defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Emit internal diagnostics: kernel ghost-sine magnitude, oracle field
    /// snapshots.
    #[arg(long, global = true)]
    pub debug: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the write kernel and the full-cycle kernel, dump both as CSV.
    Kernel,
    /// Schmidt-decompose the full-cycle kernel and dump the spectrum.
    Schmidt,
    /// Tabulate per-mode statistics of the configured input source.
    Input,
    /// Run the configured write/read scenario through the Gaussian engine.
    Scenario,
    /// Cross-validate the kernel path against the finite-difference
    /// integration.
    Oracle,
    /// Scan one parameter and tabulate the spectrum and source response.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    #[value(name = "t_w")]
    TW,
    #[value(name = "l")]
    L,
    #[value(name = "mu")]
    Mu,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Parameter to scan.
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Number of evenly spaced values, endpoints included.
    #[arg(long)]
    pub steps: usize,
}

fn load_config(path: Option<&Path>) -> Result<(RunConfig, Vec<String>), CliError> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::new(ExitKind::Io, format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(parse_config(&text)?)
}

struct Outputs {
    dir: PathBuf,
    formats: Vec<OutputFormat>,
}

impl Outputs {
    fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        let dir = PathBuf::from(&cfg.output.directory);
        fs::create_dir_all(&dir)
            .map_err(|e| CliError::new(ExitKind::Io, format!("{}: {e}", dir.display())))?;
        Ok(Outputs {
            dir,
            formats: cfg.output.formats.clone(),
        })
    }

    fn write(&self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::new(ExitKind::Io, format!("{}: {e}", path.display())))?;
        Ok(())
    }

    fn csv(
        &self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>,
    ) -> Result<(), CliError> {
        if !self.formats.contains(&OutputFormat::Csv) {
            return Ok(());
        }
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.write(name, &buf)
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        if !self.formats.contains(&OutputFormat::Json) {
            return Ok(());
        }
        self.write(name, report::to_json(value).as_bytes())
    }
}

struct Computed {
    wk: WriteKernel,
    fck: FullCycleKernel,
    basis: SchmidtBasis,
    debug: Option<DebugInfo>,
}

fn compute(cfg: &RunConfig, debug: bool) -> Result<Computed, CliError> {
    let (wk, debug) = if debug {
        let (wk, max_odd) = compute_write_kernel_diag(&cfg.grid)?;
        eprintln!("debug: max kernel ghost sine part {max_odd:.3e}");
        (
            wk,
            Some(DebugInfo {
                max_kernel_odd_part: max_odd,
            }),
        )
    } else {
        (compute_write_kernel(&cfg.grid)?, None)
    };
    let fck = compute_full_cycle(&wk);
    let basis = schmidt_decompose(&fck, &wk, DEFAULT_RANK_TOL)?;
    Ok(Computed {
        wk,
        fck,
        basis,
        debug,
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, warnings) = load_config(cli.config.as_deref())?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let out = Outputs::new(&cfg)?;
    match cli.command {
        Command::Kernel => cmd_kernel(&cfg, warnings, &out, cli.debug),
        Command::Schmidt => cmd_schmidt(&cfg, warnings, &out, cli.debug),
        Command::Input => cmd_input(&cfg, warnings, &out, cli.debug),
        Command::Scenario => cmd_scenario(&cfg, warnings, &out, cli.debug),
        Command::Oracle => cmd_oracle(&cfg, warnings, &out, cli.debug),
        Command::Sweep(args) => cmd_sweep(&cfg, warnings, &out, cli.debug, &args),
    }
}

fn cmd_kernel(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
) -> Result<(), CliError> {
    let c = compute(cfg, debug)?;
    out.csv("kernel.csv", |w| kernel_csv(&c.wk, w))?;
    out.csv("full_cycle.csv", |w| full_cycle_csv(&c.fck, w))?;
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.debug = c.debug;
    out.json("kernel.json", &bundle)
}

fn cmd_schmidt(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
) -> Result<(), CliError> {
    let c = compute(cfg, debug)?;
    let table = schmidt_table(&c.basis);
    out.csv("schmidt.csv", |w| schmidt_csv(&table, w))?;
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.schmidt = Some(table);
    bundle.debug = c.debug;
    out.json("schmidt.json", &bundle)
}

fn cmd_input(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
) -> Result<(), CliError> {
    let c = compute(cfg, debug)?;
    let spec = build_input_spec(&cfg.source, &c.basis)?;
    let table = source_table(&spec);
    out.csv("source.csv", |w| source_csv(&table, w))?;
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.schmidt = Some(schmidt_table(&c.basis));
    bundle.source = Some(table);
    bundle.debug = c.debug;
    out.json("input.json", &bundle)
}

fn cmd_scenario(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
) -> Result<(), CliError> {
    let script = cfg.resolve_script()?;
    let c = compute(cfg, debug)?;
    let spec = build_input_spec(&cfg.source, &c.basis)?;
    let scenario = run_scenario(&script, &c.basis, &spec)?;
    out.csv("scenario.csv", |w| scenario_csv(&scenario, w))?;
    let oracle = if cfg.oracle.enabled {
        let report = compare_with_kernel(
            &c.basis,
            cfg.oracle.n_t,
            cfg.oracle.n_z,
            cfg.oracle.backward,
        )?;
        out.csv("oracle.csv", |w| oracle_csv(&report, w))?;
        Some(report)
    } else {
        None
    };
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.schmidt = Some(schmidt_table(&c.basis));
    bundle.source = Some(source_table(&spec));
    bundle.scenario = Some(scenario);
    bundle.oracle = oracle;
    bundle.debug = c.debug;
    out.json("scenario.json", &bundle)
}

fn cmd_oracle(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
) -> Result<(), CliError> {
    let c = compute(cfg, debug)?;
    let report = compare_with_kernel(
        &c.basis,
        cfg.oracle.n_t,
        cfg.oracle.n_z,
        cfg.oracle.backward,
    )?;
    out.csv("oracle.csv", |w| oracle_csv(&report, w))?;
    if debug {
        // write-stage space-time snapshot of the leading mode, for plotting
        let grid = PdeGrid::new(cfg.oracle.n_t, cfg.oracle.n_z, cfg.grid.t_w, cfg.grid.l)?;
        let a_in: Vec<f64> = grid
            .t_nodes()
            .iter()
            .map(|&t| c.basis.phi_at(0, cfg.grid.t_w - t))
            .collect();
        let fields = integrate_write(grid, &a_in, DrivingConfig::SymmetricPlus)?;
        out.csv("fields.csv", |w| fields_csv(&fields, w))?;
    }
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.oracle = Some(report);
    bundle.debug = c.debug;
    out.json("oracle.json", &bundle)
}

fn sweep_values(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    if args.steps < 2 {
        return Err(CliError::new(
            ExitKind::Validation,
            format!("--steps must be at least 2, got {}", args.steps),
        ));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(CliError::new(
            ExitKind::Validation,
            "--from and --to must be finite",
        ));
    }
    let n = args.steps;
    let values: Vec<f64> = (0..n)
        .map(|k| args.from + (args.to - args.from) * k as f64 / (n - 1) as f64)
        .collect();
    for &v in &values {
        let ok = match args.param {
            SweepParam::TW | SweepParam::L => v > 0.0,
            SweepParam::Mu => v > 0.0 && v <= 1.0,
        };
        if !ok {
            return Err(CliError::new(
                ExitKind::Validation,
                format!("sweep value {v} outside the valid range for the parameter"),
            ));
        }
    }
    Ok(values)
}

fn cmd_sweep(
    cfg: &RunConfig,
    warnings: Vec<String>,
    out: &Outputs,
    debug: bool,
    args: &SweepArgs,
) -> Result<(), CliError> {
    let values = sweep_values(args)?;
    let param_name = match args.param {
        SweepParam::TW => "t_w",
        SweepParam::L => "l",
        SweepParam::Mu => "mu",
    };
    let mut rows = Vec::new();
    // the geometry is fixed during a source sweep, so the basis is shared
    let shared = if args.param == SweepParam::Mu {
        Some(compute(cfg, debug)?)
    } else {
        None
    };
    for &value in &values {
        let mut step_cfg = cfg.clone();
        match args.param {
            SweepParam::TW => step_cfg.grid.t_w = value,
            SweepParam::L => step_cfg.grid.l = value,
            SweepParam::Mu => step_cfg.source.mu = value,
        }
        step_cfg.grid.validate()?;
        step_cfg.source.validate()?;
        let local;
        let c = match &shared {
            Some(c) => c,
            None => {
                local = compute(&step_cfg, false)?;
                &local
            }
        };
        let spec = build_input_spec(&step_cfg.source, &c.basis)?;
        for (i, mode) in spec.modes.iter().enumerate() {
            rows.push(SweepRow {
                param: param_name.to_string(),
                value,
                mode: i + 1,
                lambda: c.basis.lambdas[i],
                phi0_sq: c.basis.phi_zero_frequency(i).powi(2),
                occupancy: mode.occupancy,
                var_x: mode.var_x,
                var_y: mode.var_y,
            });
        }
    }
    out.csv("sweep.csv", |w| sweep_csv(&rows, w))?;
    let mut bundle = ReportBundle::new(cfg.clone(), warnings);
    bundle.sweep = Some(rows);
    bundle.debug = shared.and_then(|c| c.debug);
    out.json("sweep.json", &bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(dir: &Path, extra: &str) -> PathBuf {
        let path = dir.join("run.ini");
        let text = format!(
            "[grid]\nn_t = 48\nn_z = 48\nn_inner = 24\n[output]\ndirectory = {}\n{extra}",
            dir.join("out").display()
        );
        fs::write(&path, text).unwrap();
        path
    }

    fn run_cmd(config: PathBuf, command: Command) -> Result<(), CliError> {
        run(Cli {
            config: Some(config),
            debug: false,
            command,
        })
    }

    #[test]
    fn subcommands_write_their_files() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = small_cfg(tmp.path(), "[oracle]\nn_t = 32\nn_z = 32\n");
        run_cmd(cfg.clone(), Command::Schmidt).unwrap();
        run_cmd(cfg.clone(), Command::Input).unwrap();
        run_cmd(cfg.clone(), Command::Scenario).unwrap();
        run_cmd(cfg.clone(), Command::Oracle).unwrap();
        let out = tmp.path().join("out");
        for name in [
            "schmidt.csv",
            "schmidt.json",
            "source.csv",
            "input.json",
            "scenario.csv",
            "scenario.json",
            "oracle.csv",
            "oracle.json",
        ] {
            assert!(out.join(name).is_file(), "{name} missing");
        }
        let text = fs::read_to_string(out.join("schmidt.csv")).unwrap();
        assert!(text.starts_with("i,lambda,mu,phi0_sq\n"));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("scenario.json")).unwrap()).unwrap();
        assert_eq!(json["scenario"]["scenario"], "S1");
    }

    #[test]
    fn kernel_debug_reports_the_ghost_sine() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = small_cfg(tmp.path(), "");
        run(Cli {
            config: Some(cfg),
            debug: true,
            command: Command::Kernel,
        })
        .unwrap();
        let out = tmp.path().join("out");
        assert!(out.join("kernel.csv").is_file());
        assert!(out.join("full_cycle.csv").is_file());
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("kernel.json")).unwrap()).unwrap();
        let odd = json["debug"]["max_kernel_odd_part"].as_f64().unwrap();
        assert!(odd.abs() <= 1e-10, "ghost sine {odd}");
    }

    #[test]
    fn sweep_emits_one_row_per_value_and_mode() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = small_cfg(tmp.path(), "");
        run_cmd(
            cfg,
            Command::Sweep(SweepArgs {
                param: SweepParam::Mu,
                from: 0.05,
                to: 0.25,
                steps: 3,
            }),
        )
        .unwrap();
        let text = fs::read_to_string(tmp.path().join("out/sweep.csv")).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert!(!rows.is_empty());
        assert_eq!(rows.len() % 3, 0);
        // 0.05 is not exactly representable; 17 digits show the true value
        assert!(rows[0].starts_with("mu,5.0000000000000003e-2,1,"));
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let tmp = tempfile::tempdir().unwrap();
        let bad = tmp.path().join("bad.ini");
        fs::write(&bad, "[grid]\nt_w = -2\n").unwrap();
        let err = run_cmd(bad, Command::Schmidt).unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let missing = tmp.path().join("nope.ini");
        let err = run_cmd(missing, Command::Schmidt).unwrap_err();
        assert_eq!(err.exit_code(), 4);

        let cfg = small_cfg(tmp.path(), "");
        let err = run_cmd(
            cfg,
            Command::Sweep(SweepArgs {
                param: SweepParam::Mu,
                from: 0.5,
                to: 1.5,
                steps: 3,
            }),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
