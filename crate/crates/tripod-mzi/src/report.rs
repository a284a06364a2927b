//! Deterministic result assembly: the JSON report bundle and the CSV dumps.
//!
//! Identical inputs must produce byte-identical files, so every float is
//! written as a fixed 17-significant-digit scientific literal (enough to
//! round-trip f64 exactly), struct fields serialize in declaration order,
//! and the timestamp honors SOURCE_DATE_EPOCH instead of the wall clock.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::config::RunConfig;
use crate::kernel::{FullCycleKernel, SchmidtBasis, WriteKernel};
use crate::oracle::{FieldState, OracleReport};
use crate::protocol::{ModeReport, ScenarioReport};
use crate::source::InputPulseSpec;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits: exact round-trip for every finite f64.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with the fixed float format.
struct EngFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for EngFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_float(value).as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serialize any report value with the deterministic float format.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = EngFormatter {
        inner: PrettyFormatter::new(),
    };
    let mut ser = Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Civil date from a day count since 1970-01-01 (proleptic Gregorian).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let y = yoe + era * 400 + i64::from(m <= 2);
    (y, m, d)
}

pub(crate) fn format_utc(secs: u64) -> String {
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (y, mo, d) = civil_from_days(days);
    format!(
        "{y:04}-{mo:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Reproducible timestamp: SOURCE_DATE_EPOCH when set, a fixed epoch string
/// otherwise. Never the wall clock.
pub fn generated_at() -> String {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .map(format_utc)
        .unwrap_or_else(|| "1970-01-01T00:00:00Z".into())
}

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtRow {
    pub i: usize,
    pub lambda: f64,
    pub mu: f64,
    pub phi0_sq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtTable {
    pub n_modes: usize,
    pub modes: Vec<SchmidtRow>,
}

pub fn schmidt_table(basis: &SchmidtBasis) -> SchmidtTable {
    let modes = (0..basis.n_modes())
        .map(|i| SchmidtRow {
            i: i + 1,
            lambda: basis.lambdas[i],
            mu: basis.mus[i],
            phi0_sq: basis.phi_zero_frequency(i).powi(2),
        })
        .collect();
    SchmidtTable {
        n_modes: basis.n_modes(),
        modes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceRow {
    pub i: usize,
    pub occupancy: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub var_x: f64,
    pub var_y: f64,
    pub vacuum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceTable {
    pub parseval_gap: f64,
    /// The laser model fixes only the squeezed quadrature; the other one is
    /// completed as a pure minimum-uncertainty state. Flagged here so the
    /// anti-squeezed numbers are not mistaken for measured physics.
    pub completion_note: String,
    pub modes: Vec<SourceRow>,
}

pub fn source_table(spec: &InputPulseSpec) -> SourceTable {
    let modes = spec
        .modes
        .iter()
        .map(|m| SourceRow {
            i: m.mode_index + 1,
            occupancy: m.occupancy,
            mean_x: m.mean_x,
            mean_y: m.mean_y,
            var_x: m.var_x,
            var_y: m.var_y,
            vacuum: m.vacuum,
        })
        .collect();
    SourceTable {
        parseval_gap: spec.parseval_gap,
        completion_note: "anti-squeezed variances use the pure-state completion \
                          var_anti = 1/(16 var_sq)"
            .into(),
        modes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DebugInfo {
    /// Largest ghost sine-part magnitude across the kernel grid; the
    /// convolution integrand is even, so this measures pure quadrature noise.
    pub max_kernel_odd_part: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub mode: usize,
    pub lambda: f64,
    pub phi0_sq: f64,
    pub occupancy: f64,
    pub var_x: f64,
    pub var_y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub tool_version: String,
    pub generated_at: String,
    pub config: RunConfig,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schmidt: Option<SchmidtTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub debug: Option<DebugInfo>,
}

impl ReportBundle {
    pub fn new(config: RunConfig, warnings: Vec<String>) -> Self {
        ReportBundle {
            tool_version: TOOL_VERSION.into(),
            generated_at: generated_at(),
            config,
            warnings,
            schmidt: None,
            source: None,
            scenario: None,
            oracle: None,
            sweep: None,
            debug: None,
        }
    }
}

pub fn kernel_csv(wk: &WriteKernel, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "t,z,g_ab")?;
    for (i, t) in wk.t_grid.nodes.iter().enumerate() {
        for (j, z) in wk.z_grid.nodes.iter().enumerate() {
            writeln!(
                w,
                "{},{},{}",
                fmt_float(*t),
                fmt_float(*z),
                fmt_float(wk.values[(i, j)])
            )?;
        }
    }
    Ok(())
}

pub fn full_cycle_csv(fck: &FullCycleKernel, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "t,t_prime,g")?;
    for (i, t) in fck.t_grid.nodes.iter().enumerate() {
        for (j, tp) in fck.t_grid.nodes.iter().enumerate() {
            writeln!(
                w,
                "{},{},{}",
                fmt_float(*t),
                fmt_float(*tp),
                fmt_float(fck.values[(i, j)])
            )?;
        }
    }
    Ok(())
}

pub fn schmidt_csv(table: &SchmidtTable, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "i,lambda,mu,phi0_sq")?;
    for row in &table.modes {
        writeln!(
            w,
            "{},{},{},{}",
            row.i,
            fmt_float(row.lambda),
            fmt_float(row.mu),
            fmt_float(row.phi0_sq)
        )?;
    }
    Ok(())
}

pub fn source_csv(table: &SourceTable, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "i,occupancy,mean_x,mean_y,var_x,var_y,vacuum")?;
    for row in &table.modes {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.i,
            fmt_float(row.occupancy),
            fmt_float(row.mean_x),
            fmt_float(row.mean_y),
            fmt_float(row.var_x),
            fmt_float(row.var_y),
            row.vacuum
        )?;
    }
    Ok(())
}

fn mode_rows(out: &mut Vec<(usize, String, f64)>, mode: &ModeReport) {
    let m = mode.mode;
    out.push((m, "lambda".into(), mode.lambda));
    if let Some(eff) = mode.write_efficiency {
        out.push((m, "write_efficiency".into(), eff));
    }
    for metrics in [&mode.inputs, &mode.outputs, &mode.spins] {
        for mm in metrics {
            let l = &mm.label;
            out.push((m, format!("{l}_photon_number"), mm.photon_number));
            out.push((m, format!("{l}_mean_x"), mm.mean_x));
            out.push((m, format!("{l}_mean_y"), mm.mean_y));
            out.push((m, format!("{l}_var_x"), mm.var_x));
            out.push((m, format!("{l}_var_y"), mm.var_y));
            out.push((m, format!("{l}_nord_var_x"), mm.nord_var_x));
            out.push((m, format!("{l}_nord_var_y"), mm.nord_var_y));
        }
    }
    for d in &mode.duan {
        out.push((m, format!("duan_{}_{}", d.mode_a, d.mode_b), d.value));
    }
    if let Some(c) = mode.output_cross_covariance {
        out.push((m, "output_cross_covariance".into(), c));
    }
    out.push((
        m,
        "min_symplectic_eigenvalue".into(),
        mode.min_symplectic_eigenvalue,
    ));
}

pub fn scenario_csv(report: &ScenarioReport, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "mode,metric,value")?;
    let mut rows = Vec::new();
    for mode in &report.modes {
        mode_rows(&mut rows, mode);
    }
    for (mode, metric, value) in rows {
        writeln!(w, "{},{},{}", mode, metric, fmt_float(value))?;
    }
    Ok(())
}

pub fn oracle_csv(report: &OracleReport, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "case,rel_l2_error,order")?;
    for case in &report.cases {
        writeln!(
            w,
            "{},{},{}",
            case.name,
            fmt_float(case.rel_l2_error),
            fmt_float(case.order)
        )?;
    }
    Ok(())
}

pub fn sweep_csv(rows: &[SweepRow], w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "param,value,mode,lambda,phi0_sq,occupancy,var_x,var_y")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.param,
            fmt_float(r.value),
            r.mode,
            fmt_float(r.lambda),
            fmt_float(r.phi0_sq),
            fmt_float(r.occupancy),
            fmt_float(r.var_x),
            fmt_float(r.var_y)
        )?;
    }
    Ok(())
}

/// Space-time field snapshot for plotting.
pub fn fields_csv(st: &FieldState, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "t,z,a,c,b1,b2")?;
    let (t, z) = (st.grid.t_nodes(), st.grid.z_nodes());
    for (i, ti) in t.iter().enumerate() {
        for (j, zj) in z.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_float(*ti),
                fmt_float(*zj),
                fmt_float(st.a[(i, j)]),
                fmt_float(st.c[(i, j)]),
                fmt_float(st.b1[(i, j)]),
                fmt_float(st.b2[(i, j)])
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn float_format_round_trips_exactly() {
        let values = [
            0.0,
            1.0,
            -1.0,
            0.1 + 0.2,
            std::f64::consts::PI,
            1.234_567_890_123_456_7e-12,
            f64::MIN_POSITIVE,
            -9.999_999_999_999_999e299,
        ];
        for v in values {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {s}");
        }
    }

    #[test]
    fn float_format_is_valid_json() {
        #[derive(Serialize)]
        struct Probe {
            a: f64,
            b: Vec<f64>,
        }
        let text = to_json(&Probe {
            a: 0.1 + 0.2,
            b: vec![-1.5, 0.0, 2e-300],
        });
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["a"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(value["b"][2].as_f64().unwrap(), 2e-300);
    }

    #[test]
    fn timestamps_are_reproducible() {
        assert_eq!(format_utc(0), "1970-01-01T00:00:00Z");
        assert_eq!(format_utc(86_399), "1970-01-01T23:59:59Z");
        assert_eq!(format_utc(86_400), "1970-01-02T00:00:00Z");
        assert_eq!(format_utc(951_825_661), "2000-02-29T12:01:01Z");
        assert_eq!(format_utc(1_700_000_000), "2023-11-14T22:13:20Z");
    }

    #[test]
    fn identical_bundles_serialize_identically() {
        let (cfg, warnings) = parse_config("[scenario]\nname = S3\n").unwrap();
        let a = to_json(&ReportBundle::new(cfg.clone(), warnings.clone()));
        let b = to_json(&ReportBundle::new(cfg, warnings));
        assert_eq!(a, b);
        assert!(a.contains("\"tool_version\""));
        assert!(a.contains("5.5000000000000000e0"));
    }

    /// Minimal structural validator for the shipped schema: types, required
    /// keys, enums, items, closed objects, and local $ref.
    fn check(root: &serde_json::Value, schema: &serde_json::Value, value: &serde_json::Value, path: &str) {
        use serde_json::Value;
        if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
            let target = r
                .strip_prefix("#/")
                .expect("local ref")
                .split('/')
                .fold(root, |v, seg| &v[seg]);
            return check(root, target, value, path);
        }
        if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
            assert!(allowed.contains(value), "{path}: {value} not in {allowed:?}");
            return;
        }
        let type_ok = |name: &str| match name {
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            "boolean" => value.is_boolean(),
            "array" => value.is_array(),
            "object" => value.is_object(),
            "null" => value.is_null(),
            other => panic!("unsupported type {other}"),
        };
        match schema.get("type") {
            Some(Value::String(t)) => assert!(type_ok(t), "{path}: expected {t}, got {value}"),
            Some(Value::Array(ts)) => assert!(
                ts.iter().any(|t| type_ok(t.as_str().unwrap())),
                "{path}: expected one of {ts:?}, got {value}"
            ),
            _ => {}
        }
        if let Some(obj) = value.as_object() {
            let props = schema.get("properties").and_then(Value::as_object);
            if let Some(req) = schema.get("required").and_then(Value::as_array) {
                for key in req {
                    let key = key.as_str().unwrap();
                    assert!(obj.contains_key(key), "{path}: missing required '{key}'");
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in obj.keys() {
                    assert!(
                        props.map(|p| p.contains_key(key)).unwrap_or(false),
                        "{path}: unexpected key '{key}'"
                    );
                }
            }
            if let Some(props) = props {
                for (key, sub) in props {
                    if let Some(v) = obj.get(key) {
                        check(root, sub, v, &format!("{path}.{key}"));
                    }
                }
            }
        }
        if let Some(arr) = value.as_array() {
            if let Some(items) = schema.get("items") {
                for (i, v) in arr.iter().enumerate() {
                    check(root, items, v, &format!("{path}[{i}]"));
                }
            }
        }
    }

    #[test]
    fn full_bundle_validates_against_the_shipped_schema() {
        use crate::kernel::{
            compute_full_cycle, compute_write_kernel_diag, schmidt_decompose, KernelConfig,
            DEFAULT_RANK_TOL,
        };
        use crate::oracle::compare_with_kernel;
        use crate::protocol::run_scenario;
        use crate::source::build_input_spec;

        let (mut cfg, warnings) =
            parse_config("[scenario]\nname = S2\n[source]\nmu = 0.6\n").unwrap();
        cfg.grid = KernelConfig {
            n_t: 64,
            n_z: 64,
            n_inner: 32,
            ..KernelConfig::default()
        };
        let (wk, max_odd) = compute_write_kernel_diag(&cfg.grid).unwrap();
        let fck = compute_full_cycle(&wk);
        let basis = schmidt_decompose(&fck, &wk, DEFAULT_RANK_TOL).unwrap();
        let spec = build_input_spec(&cfg.source, &basis).unwrap();
        let script = cfg.resolve_script().unwrap();
        let scenario = run_scenario(&script, &basis, &spec).unwrap();
        let oracle = compare_with_kernel(&basis, 32, 32, true).unwrap();

        let mut bundle = ReportBundle::new(cfg, warnings);
        bundle.schmidt = Some(schmidt_table(&basis));
        bundle.source = Some(source_table(&spec));
        bundle.scenario = Some(scenario);
        bundle.oracle = Some(oracle);
        bundle.sweep = Some(vec![SweepRow {
            param: "mu".into(),
            value: 0.6,
            mode: 1,
            lambda: basis.lambdas[0],
            phi0_sq: 0.5,
            occupancy: 400.0,
            var_x: 0.02,
            var_y: 3.0,
        }]);
        bundle.debug = Some(DebugInfo {
            max_kernel_odd_part: max_odd,
        });

        let text = to_json(&bundle);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let schema: serde_json::Value =
            serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
        check(&schema, &schema, &value, "$");

        // a single-read scenario leaves the pair statistics null, which the
        // schema must permit
        assert!(value["scenario"]["modes"][0]["output_cross_covariance"].is_null());
    }

    #[test]
    fn csv_writers_emit_headers_and_fixed_width_floats() {
        let rows = vec![SweepRow {
            param: "l".into(),
            value: 10.0,
            mode: 1,
            lambda: 0.5,
            phi0_sq: 0.25,
            occupancy: 300.0,
            var_x: 0.01,
            var_y: 6.25,
        }];
        let mut buf = Vec::new();
        sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "param,value,mode,lambda,phi0_sq,occupancy,var_x,var_y"
        );
        assert_eq!(
            lines.next().unwrap(),
            "l,1.0000000000000000e1,1,5.0000000000000000e-1,2.5000000000000000e-1,3.0000000000000000e2,1.0000000000000000e-2,6.2500000000000000e0"
        );
    }
}
