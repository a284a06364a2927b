//! Black-box checks of the installed binary: exit codes, file layout,
//! thread-count independence and the config surface, all through real
//! process spawns in throwaway working directories.

use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

/// Coarse grid that keeps every spawned run well under a second.
const SMALL_GRID: &str = "[grid]\nn_t = 48\nn_z = 48\nn_inner = 24\n";

struct Workdir {
    dir: TempDir,
}

impl Workdir {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("run.ini"), config).unwrap();
        Workdir { dir }
    }

    fn run(&self, args: &[&str]) -> Output {
        self.run_with(args, &[])
    }

    fn run_with(&self, args: &[&str], env: &[(&str, &str)]) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tripod-mzi"));
        cmd.args(["--config", "run.ini"])
            .args(args)
            .current_dir(self.dir.path())
            .env_remove("SOURCE_DATE_EPOCH")
            .env_remove("TRIPOD_MZI_THREADS");
        for (k, v) in env {
            cmd.env(k, v);
        }
        cmd.output().unwrap()
    }

    fn read(&self, rel: &str) -> String {
        let path = self.dir.path().join(rel);
        String::from_utf8(fs::read(&path).unwrap_or_else(|e| panic!("{rel}: {e}"))).unwrap()
    }

    fn exists(&self, rel: &str) -> bool {
        self.dir.path().join(rel).exists()
    }
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn kernel_emits_all_three_files_with_documented_headers() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run(&["kernel"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(w.read("out/kernel.csv").starts_with("t,z,g_ab\n"));
    assert!(w.read("out/full_cycle.csv").starts_with("t,t_prime,g\n"));
    let json = w.read("out/kernel.json");
    assert!(json.contains("\"tool_version\""));
    assert!(json.ends_with('\n'));
}

#[test]
fn schmidt_output_is_independent_of_the_thread_count() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run_with(&["schmidt"], &[("TRIPOD_MZI_THREADS", "1")]);
    assert!(out.status.success(), "{}", stderr(&out));
    let serial_json = w.read("out/schmidt.json");
    let serial_csv = w.read("out/schmidt.csv");

    let out = w.run_with(&["schmidt"], &[("TRIPOD_MZI_THREADS", "4")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(serial_json, w.read("out/schmidt.json"));
    assert_eq!(serial_csv, w.read("out/schmidt.csv"));
}

#[test]
fn invalid_thread_settings_warn_but_do_not_fail() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run_with(&["schmidt"], &[("TRIPOD_MZI_THREADS", "soup")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("TRIPOD_MZI_THREADS"));
}

#[test]
fn config_errors_name_the_offending_line() {
    let w = Workdir::new("[grid]\nbogus = 3\n");
    let out = w.run(&["kernel"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn a_missing_config_file_is_an_io_error() {
    let w = Workdir::new(SMALL_GRID);
    let out = Command::new(env!("CARGO_BIN_EXE_tripod-mzi"))
        .args(["--config", "no-such-file.ini", "kernel"])
        .current_dir(w.dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn unknown_subcommands_fail_with_usage_errors() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run(&["transmogrify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn the_debug_flag_reports_the_kernel_ghost_sine() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run(&["--debug", "kernel"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("ghost sine"), "{}", stderr(&out));
}

#[test]
fn sweep_rows_cover_every_requested_value() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run(&[
        "sweep", "--param", "mu", "--from", "0.05", "--to", "0.15", "--steps", "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = w.read("out/sweep.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("param,value,mode,lambda,phi0_sq,occupancy,var_x,var_y")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty() && rows.len() % 3 == 0, "{} rows", rows.len());
    assert!(rows.iter().all(|r| r.starts_with("mu,")));
    // three distinct sweep values, each covering the same mode set
    let values: std::collections::BTreeSet<&str> =
        rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(values.len(), 3);
}

#[test]
fn sweep_range_violations_exit_with_validation_errors() {
    let w = Workdir::new(SMALL_GRID);
    let out = w.run(&[
        "sweep", "--param", "mu", "--from", "0.1", "--to", "0.2", "--steps", "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let out = w.run(&[
        "sweep", "--param", "mu", "--from", "0.5", "--to", "1.5", "--steps", "3",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn custom_scenario_scripts_run_end_to_end() {
    let cfg = format!(
        "{SMALL_GRID}\n[scenario]\nname = custom\nscript = write 1 plus; read plus\n"
    );
    let w = Workdir::new(&cfg);
    let out = w.run(&["scenario"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = w.read("out/scenario.json");
    assert!(json.contains("\"scenario\": \"custom\""));
    assert!(w.read("out/scenario.csv").starts_with("mode,metric,value\n"));
}

#[test]
fn json_only_output_suppresses_the_csv_files() {
    let cfg = format!("{SMALL_GRID}\n[output]\nformats = json\n");
    let w = Workdir::new(&cfg);
    let out = w.run(&["kernel"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(w.exists("out/kernel.json"));
    assert!(!w.exists("out/kernel.csv"));
}

#[test]
fn scenarios_with_the_oracle_enabled_emit_the_comparison() {
    let cfg = format!(
        "{SMALL_GRID}\n[oracle]\nenabled = true\nn_t = 32\nn_z = 32\n"
    );
    let w = Workdir::new(&cfg);
    let out = w.run(&["scenario"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(w.read("out/oracle.csv").starts_with("case,rel_l2_error,order\n"));
    assert!(w.read("out/scenario.json").contains("\"oracle\""));
}

#[test]
fn oracle_debug_runs_dump_field_snapshots() {
    let cfg = format!("{SMALL_GRID}\n[oracle]\nn_t = 32\nn_z = 32\n");
    let w = Workdir::new(&cfg);
    let out = w.run(&["--debug", "oracle"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(w.read("out/fields.csv").starts_with("t,z,a,c,b1,b2\n"));
    assert!(w.read("out/oracle.json").contains("\"rel_l2_error\""));
}
