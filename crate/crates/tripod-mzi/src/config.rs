//! Flat INI-style run configuration.
//!
//! Four sections cover the whole pipeline; every key is optional and falls
//! back to the worked defaults (L = 10, T_W = 5.5 grid, the reference source
//! settings, scenario S1). Unknown sections or keys are rejected rather than
//! ignored so that typos cannot silently run a different experiment.
//!
//! ```text
//! # comment lines start with '#'
//! [grid]
//! t_w = 5.5
//! l = 10
//! n_t = 256
//! n_z = 256
//! n_inner = 128
//!
//! [source]
//! n_bar_tw = 1000
//! mu = 0.1
//! kappa_tw = 1e4
//! squeezed_quadrature = x
//!
//! [scenario]
//! name = S4            # S1..S6 or custom
//! # script = write 1 plus; write 2 minus; read omega1; read omega2
//!
//! [oracle]
//! enabled = false
//! n_t = 512
//! n_z = 512
//! backward = true
//!
//! [output]
//! directory = out
//! formats = csv, json
//! ```
//!
//! Custom scripts are semicolon-separated statements: `write <pulse> <wave>`
//! with pulse 1 or 2 and wave one of plus, minus, omega1, omega2;
//! `read <wave>`; and the bare word `entangled` to mix the two input pulses
//! on a balanced splitter before writing.

use serde::Serialize;
use thiserror::Error;

use crate::kernel::KernelConfig;
use crate::protocol::{builtin_scenarios, DrivingConfig, ScenarioScript, WriteStep};
use crate::source::{Quadrature, SourceParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub script: Option<String>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "S1".into(),
            script: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleConfig {
    pub enabled: bool,
    pub n_t: usize,
    pub n_z: usize,
    pub backward: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enabled: false,
            n_t: 512,
            n_z: 512,
            backward: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputConfig {
    pub directory: String,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: "out".into(),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct RunConfig {
    pub grid: KernelConfig,
    pub source: SourceParams,
    pub scenario: ScenarioConfig,
    pub oracle: OracleConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Turn the scenario section into an executable script.
    pub fn resolve_script(&self) -> Result<ScenarioScript, ConfigError> {
        if self.scenario.name.eq_ignore_ascii_case("custom") {
            let text = self.scenario.script.as_deref().ok_or_else(|| {
                ConfigError::Invalid("scenario name = custom requires a script".into())
            })?;
            let script = parse_script(text)?;
            script
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            return Ok(script);
        }
        if self.scenario.script.is_some() {
            return Err(ConfigError::Invalid(
                "a script is only accepted with scenario name = custom".into(),
            ));
        }
        builtin_scenarios()
            .into_iter()
            .find(|s| s.name.eq_ignore_ascii_case(&self.scenario.name))
            .ok_or_else(|| {
                ConfigError::Invalid(format!(
                    "unknown scenario '{}'; choose S1..S6 or custom",
                    self.scenario.name
                ))
            })
    }
}

fn parse_drive(word: &str) -> Option<DrivingConfig> {
    match word {
        "plus" => Some(DrivingConfig::SymmetricPlus),
        "minus" => Some(DrivingConfig::SymmetricMinus),
        "omega1" => Some(DrivingConfig::Omega1Only),
        "omega2" => Some(DrivingConfig::Omega2Only),
        _ => None,
    }
}

/// Parse the semicolon-separated custom script grammar.
pub fn parse_script(text: &str) -> Result<ScenarioScript, ConfigError> {
    let mut script = ScenarioScript {
        name: "custom".into(),
        title: "user-scripted protocol".into(),
        writes: Vec::new(),
        reads: Vec::new(),
        entangled_inputs: false,
    };
    for stmt in text.split(';') {
        let words: Vec<&str> = stmt.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["write", pulse, wave] => {
                let pulse: usize = pulse.parse().ok().filter(|p| (1..=2).contains(p)).ok_or_else(
                    || ConfigError::Invalid(format!("write pulse must be 1 or 2, got '{pulse}'")),
                )?;
                let drive = parse_drive(wave).ok_or_else(|| {
                    ConfigError::Invalid(format!(
                        "unknown wave '{wave}'; use plus, minus, omega1 or omega2"
                    ))
                })?;
                script.writes.push(WriteStep {
                    pulse: pulse - 1,
                    drive,
                });
            }
            ["read", wave] => {
                let drive = parse_drive(wave).ok_or_else(|| {
                    ConfigError::Invalid(format!(
                        "unknown wave '{wave}'; use plus, minus, omega1 or omega2"
                    ))
                })?;
                script.reads.push(drive);
            }
            ["entangled"] => script.entangled_inputs = true,
            _ => {
                return Err(ConfigError::Invalid(format!(
                    "unrecognized script statement '{}'",
                    stmt.trim()
                )))
            }
        }
    }
    Ok(script)
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| at(line, format!("{key} expects a number, got '{value}'")))
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse::<usize>()
        .map_err(|_| at(line, format!("{key} expects a positive integer, got '{value}'")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(at(line, format!("{key} expects true or false, got '{value}'"))),
    }
}

/// Parse and fully validate a configuration file. Returns the config plus
/// any non-fatal warnings from the owning modules.
pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<String> = None;
    // line numbers of the grid/source keys, so late constraint checks from
    // the owning validators can still point at a line
    let mut grid_line = 0usize;
    let mut source_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| at(line, "unterminated section header"))?
                .trim();
            if !["grid", "source", "scenario", "oracle", "output"].contains(&name) {
                return Err(at(line, format!("unknown section [{name}]")));
            }
            section = Some(name.to_string());
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| at(line, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let section = section
            .as_deref()
            .ok_or_else(|| at(line, format!("key '{key}' appears before any [section]")))?;
        match (section, key) {
            ("grid", "t_w") => {
                cfg.grid.t_w = parse_f64(line, key, value)?;
                grid_line = line;
            }
            ("grid", "l") => {
                cfg.grid.l = parse_f64(line, key, value)?;
                grid_line = line;
            }
            ("grid", "n_t") => {
                cfg.grid.n_t = parse_usize(line, key, value)?;
                grid_line = line;
            }
            ("grid", "n_z") => {
                cfg.grid.n_z = parse_usize(line, key, value)?;
                grid_line = line;
            }
            ("grid", "n_inner") => {
                cfg.grid.n_inner = parse_usize(line, key, value)?;
                grid_line = line;
            }
            ("source", "n_bar_tw") => {
                cfg.source.n_bar_tw = parse_f64(line, key, value)?;
                source_line = line;
            }
            ("source", "mu") => {
                cfg.source.mu = parse_f64(line, key, value)?;
                source_line = line;
            }
            ("source", "kappa_tw") => {
                cfg.source.kappa_tw = parse_f64(line, key, value)?;
                source_line = line;
            }
            ("source", "squeezed_quadrature") => {
                cfg.source.squeezed_quadrature = match value.to_ascii_lowercase().as_str() {
                    "x" => Quadrature::X,
                    "y" => Quadrature::Y,
                    _ => return Err(at(line, format!("{key} expects x or y, got '{value}'"))),
                };
                source_line = line;
            }
            ("scenario", "name") => cfg.scenario.name = value.to_string(),
            ("scenario", "script") => cfg.scenario.script = Some(value.to_string()),
            ("oracle", "enabled") => cfg.oracle.enabled = parse_bool(line, key, value)?,
            ("oracle", "n_t") => {
                let n = parse_usize(line, key, value)?;
                if !(8..=2048).contains(&n) || n % 2 != 0 {
                    return Err(at(line, format!("{key} must be even and in [8, 2048]")));
                }
                cfg.oracle.n_t = n;
            }
            ("oracle", "n_z") => {
                let n = parse_usize(line, key, value)?;
                if !(8..=2048).contains(&n) || n % 2 != 0 {
                    return Err(at(line, format!("{key} must be even and in [8, 2048]")));
                }
                cfg.oracle.n_z = n;
            }
            ("oracle", "backward") => cfg.oracle.backward = parse_bool(line, key, value)?,
            ("output", "directory") => {
                if value.is_empty() {
                    return Err(at(line, "directory must not be empty"));
                }
                cfg.output.directory = value.to_string();
            }
            ("output", "formats") => {
                let mut formats = Vec::new();
                for word in value.split(',') {
                    match word.trim() {
                        "csv" => formats.push(OutputFormat::Csv),
                        "json" => formats.push(OutputFormat::Json),
                        other => {
                            return Err(at(
                                line,
                                format!("unknown format '{other}'; use csv and/or json"),
                            ))
                        }
                    }
                }
                if formats.is_empty() {
                    return Err(at(line, "formats must list csv and/or json"));
                }
                formats.dedup();
                cfg.output.formats = formats;
            }
            _ => return Err(at(line, format!("unknown key '{key}' in section [{section}]"))),
        }
    }

    // re-run the owning validators so file values obey the same constraints
    // as programmatic use
    cfg.grid.validate().map_err(|e| {
        at(grid_line.max(1), format!("grid constraints violated: {e}"))
    })?;
    let warnings = cfg.source.validate().map_err(|e| {
        at(source_line.max(1), format!("source constraints violated: {e}"))
    })?;
    cfg.resolve_script()?;
    Ok((cfg, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_the_worked_defaults() {
        let (cfg, warnings) = parse_config("").unwrap();
        assert_eq!(cfg.grid.t_w, 5.5);
        assert_eq!(cfg.grid.l, 10.0);
        assert_eq!(cfg.grid.n_t, 256);
        assert_eq!(cfg.source.mu, 0.1);
        assert_eq!(cfg.scenario.name, "S1");
        assert!(!cfg.oracle.enabled);
        assert!(cfg.oracle.backward);
        assert!(warnings.is_empty());
        assert_eq!(cfg.resolve_script().unwrap().name, "S1");
    }

    #[test]
    fn full_file_round_trips_every_section() {
        let text = "\
# reference run
[grid]
t_w = 4.0
l = 8     # inline comment
n_t = 128
n_z = 64
n_inner = 64

[source]
n_bar_tw = 500
mu = 0.2
kappa_tw = 100
squeezed_quadrature = y

[scenario]
name = S4

[oracle]
enabled = true
n_t = 128
n_z = 128
backward = false

[output]
directory = run_a
formats = json
";
        let (cfg, warnings) = parse_config(text).unwrap();
        assert_eq!(cfg.grid.t_w, 4.0);
        assert_eq!(cfg.grid.l, 8.0);
        assert_eq!(cfg.grid.n_z, 64);
        assert_eq!(cfg.source.n_bar_tw, 500.0);
        assert_eq!(cfg.source.squeezed_quadrature, Quadrature::Y);
        assert_eq!(cfg.scenario.name, "S4");
        assert!(cfg.oracle.enabled);
        assert!(!cfg.oracle.backward);
        assert_eq!(cfg.output.directory, "run_a");
        assert_eq!(cfg.output.formats, vec![OutputFormat::Json]);
        assert!(warnings.is_empty());
        assert_eq!(cfg.resolve_script().unwrap().writes.len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("[grid]\nt_w = -1\n", "line 2"),
            ("[grid]\nt_w = abc\n", "line 2"),
            ("\n[nope]\n", "line 2"),
            ("[grid]\nwavelength = 5\n", "line 2"),
            ("t_w = 5\n", "line 1"),
            ("[grid]\nbroken line\n", "line 2"),
            ("[oracle]\nn_t = 127\n", "line 2"),
            ("[source]\nmu = 0\n", "line 2"),
            ("[output]\nformats = png\n", "line 2"),
        ];
        for (text, needle) in cases {
            let err = parse_config(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn source_warnings_pass_through() {
        let (_, warnings) = parse_config("[source]\nmu = 0.7\nkappa_tw = 5\n").unwrap();
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn custom_scripts_parse_and_validate() {
        let text = "[scenario]\nname = custom\nscript = write 1 plus; write 2 minus; read omega1; read omega2; entangled\n";
        let (cfg, _) = parse_config(text).unwrap();
        let script = cfg.resolve_script().unwrap();
        assert_eq!(script.writes.len(), 2);
        assert_eq!(script.writes[0].pulse, 0);
        assert_eq!(script.writes[1].drive, DrivingConfig::SymmetricMinus);
        assert_eq!(script.reads.len(), 2);
        assert!(script.entangled_inputs);
    }

    #[test]
    fn script_rules() {
        assert!(parse_script("write 1 plus; read plus").is_ok());
        assert!(parse_script("write 3 plus").is_err());
        assert!(parse_script("write 1 sideways").is_err());
        assert!(parse_script("launch 1 plus").is_err());
        // structurally invalid programs are rejected during resolution
        let err = parse_config("[scenario]\nname = custom\nscript = write 1 plus; write 2 plus\n");
        assert!(err.is_err());
        // a script without custom name is rejected
        let err = parse_config("[scenario]\nname = S1\nscript = read plus\n");
        assert!(err.is_err());
        // unknown builtin
        let err = parse_config("[scenario]\nname = S9\n");
        assert!(err.is_err());
    }
}
