//! End-to-end checks of the command-line interface: exit codes, error
//! messages, report files, and byte-level determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn oseen() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oseen"));
    // Keep runs hermetic: tests that exercise the override set it back.
    cmd.env_remove("OSEEN_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    oseen().args(args).output().expect("spawn oseen")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn out_dir(dir: &TempDir) -> String {
    format!("output.dir={}", dir.path().display())
}

/// Default grid nodes: x_j = -20 + j * (40 / 256), the spacing exact in
/// binary so CSV fixtures can hit nodes to full precision.
fn default_nodes() -> Vec<f64> {
    (0..256).map(|j| -20.0 + j as f64 * 0.15625).collect()
}

fn csv_value(out: &Path, quantity: &str) -> f64 {
    let text = fs::read_to_string(out).expect("read wake csv");
    for line in text.lines() {
        let mut parts = line.split(',');
        if parts.next() == Some(quantity) {
            let _angle = parts.next();
            return parts.next().expect("value field").parse().expect("value");
        }
    }
    panic!("no {quantity} row in {}", out.display());
}

#[test]
fn config_show_prints_defaults_deterministically() {
    let a = run(&["config", "show"]);
    let b = run(&["config", "show"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("a2 = -1"), "defaults missing: {text}");
    assert!(text.contains("n = 256"), "defaults missing: {text}");
    assert!(text.contains("threads = 0"), "defaults missing: {text}");
}

#[test]
fn set_overrides_are_applied_and_bad_keys_rejected() {
    let ok = run(&["--set", "grid.n=128", "config", "show"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("n = 128"));

    let bad = run(&["--set", "grid.bogus=1", "config", "show"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("unknown key"), "{}", stderr(&bad));
}

#[test]
fn config_file_errors_carry_line_numbers() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(&path, "[params]\nbogus = 1\n").unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "config", "show"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("config error at line 2"), "{err}");
}

#[test]
fn solve_default_profile_passes_and_writes_reports() {
    let dir = TempDir::new().unwrap();
    let out = run(&["--set", &out_dir(&dir), "solve", "--binary"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("solve: PASS"), "{text}");
    assert!(dir.path().join("solve-fields.csv").is_file());
    assert!(dir.path().join("solve-fields.bin").is_file());
    let json = fs::read_to_string(dir.path().join("solve-residuals.json")).unwrap();
    assert!(json.contains("\"pass\": true"), "{json}");
}

#[test]
fn solve_zero_data_yields_zero_residuals() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "--set",
        &out_dir(&dir),
        "solve",
        "--b",
        "none",
        "--d",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("solve: PASS"));
}

#[test]
fn solve_reads_boundary_csv_matching_the_named_profile() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("b.csv");
    let mut text = String::from("x,value\n");
    for x in default_nodes() {
        text.push_str(&format!("{x:.17e},{:.17e}\n", (-x * x).exp()));
    }
    fs::write(&csv, text).unwrap();

    let from_csv = TempDir::new().unwrap();
    let out = run(&[
        "--set",
        &out_dir(&from_csv),
        "solve",
        "--b",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    // The samples equal the `gauss` profile's, so the fields must too.
    let from_name = TempDir::new().unwrap();
    let reference = run(&["--set", &out_dir(&from_name), "solve", "--b", "gauss"]);
    assert_eq!(reference.status.code(), Some(0));
    let a = fs::read(from_csv.path().join("solve-fields.csv")).unwrap();
    let b = fs::read(from_name.path().join("solve-fields.csv")).unwrap();
    assert_eq!(a, b, "CSV-fed solve differs from profile-fed solve");
}

#[test]
fn malformed_csv_is_rejected_with_its_line_number() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bad.csv");
    let nodes = default_nodes();
    let mut text = String::from("x,value\n");
    for x in &nodes[..3] {
        text.push_str(&format!("{x:.17e},0.0\n"));
    }
    text.push_str("not,1.0\n"); // line 5
    fs::write(&csv, text).unwrap();
    let out = run(&["solve", "--b", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("csv format error at line 5"), "{err}");
    assert!(err.contains("bad x value"), "{err}");
}

#[test]
fn short_csv_is_rejected_as_a_grid_mismatch() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("short.csv");
    let mut text = String::new();
    for x in &default_nodes()[..100] {
        text.push_str(&format!("{x:.17e},0.0\n"));
    }
    fs::write(&csv, text).unwrap();
    let out = run(&["solve", "--b", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("grid mismatch"), "{err}");
    assert!(err.contains("256"), "{err}");
}

#[test]
fn unknown_boundary_profile_is_a_usage_error() {
    let out = run(&["solve", "--b", "wiggle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("corpus profile"), "{}", stderr(&out));
}

#[test]
fn verify_asymptotics_passes_and_writes_its_table() {
    let dir = TempDir::new().unwrap();
    let out = run(&["--set", &out_dir(&dir), "verify", "asymptotics"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("asymptotics: PASS"));
    let table = fs::read_to_string(dir.path().join("asymptotics.csv")).unwrap();
    assert!(table.starts_with("label,regime,"), "{table}");
    assert_eq!(table.lines().count(), 4, "three rows plus header");
}

#[test]
fn verify_trace_refuses_wall_repelling_drift() {
    let out = run(&["--set", "params.a2=1.0", "verify", "trace"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("regime violation"), "{}", stderr(&out));
}

#[test]
fn wake_default_drift_is_strongly_anisotropic() {
    let dir = TempDir::new().unwrap();
    let out = run(&["--set", &out_dir(&dir), "wake"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("anisotropy"));
    let ratio = csv_value(&dir.path().join("wake.csv"), "anisotropy_ratio");
    assert!(ratio > 2.0, "anisotropy {ratio}");
    let transverse = csv_value(&dir.path().join("wake.csv"), "transverse_ratio");
    assert!((transverse - 1.0).abs() < 0.2, "transverse {transverse}");
}

#[test]
fn wake_halfplane_wall_drift_is_isotropic() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "--set",
        &out_dir(&dir),
        "wake",
        "--a1",
        "0",
        "--a2",
        "-1",
        "--domain",
        "halfplane",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let ratio = csv_value(&dir.path().join("wake.csv"), "anisotropy_ratio");
    assert!((ratio - 1.0).abs() < 1e-9, "anisotropy {ratio}");
}

#[test]
fn wake_without_a_decay_window_is_a_numerical_failure() {
    let out = run(&[
        "--set",
        "grid.half_width=1",
        "--set",
        "grid.n=16",
        "wake",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("insufficient decay window"), "{err}");
}

#[test]
fn solve_outputs_are_byte_identical_across_thread_counts() {
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let dir = TempDir::new().unwrap();
        let out = oseen()
            .args(["--set", &out_dir(&dir), "solve"])
            .env("OSEEN_THREADS", threads)
            .output()
            .expect("spawn oseen");
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        outputs.push((
            fs::read(dir.path().join("solve-fields.csv")).unwrap(),
            fs::read(dir.path().join("solve-residuals.json")).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1], "outputs depend on thread count");
}

#[test]
fn invalid_thread_override_is_a_usage_error() {
    let out = oseen()
        .args(["config", "show"])
        .env("OSEEN_THREADS", "banana")
        .output()
        .expect("spawn oseen");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("OSEEN_THREADS"), "{}", stderr(&out));
}
