//! End-to-end tests of the command-line binary: CSV contracts, exit codes,
//! determinism, and the verify subcommand's JSON report.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_flagcap"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

/// Parse a CSV body into (header columns, numeric rows).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().expect("numeric cell")).collect())
        .collect();
    (header, rows)
}

#[test]
fn depolarizing_csv_contract() {
    let out = run(&["depolarizing", "--d", "2", "--p-min", "0", "--p-max", "0.3", "--steps", "4"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(!text.contains('\r'), "LF line endings only");
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["p", "q1_lower", "q_fmin", "q_nocloning", "q_conv"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "0.00000000000,1.00000000000,1.00000000000,1.00000000000,1.00000000000"
    );
    for row in &rows {
        let (q1, fmin, ncl, conv) = (row[1], row[2], row[3], row[4]);
        assert!(conv <= fmin.min(ncl) + 1e-12, "hull below both upper bounds");
        assert!(q1 <= fmin + 1e-9 && q1 <= ncl + 1e-9 && q1 <= conv + 1e-9);
    }
}

#[test]
fn depolarizing_d4_zero_noise_row() {
    let out = run(&["depolarizing", "--d", "4", "--p-min", "0", "--p-max", "0.1", "--steps", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "0.00000000000,2.00000000000,2.00000000000,2.00000000000,2.00000000000"
    );
}

#[test]
fn csv_is_deterministic_and_file_output_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    let args = ["bb84", "--p-min", "0.05", "--p-max", "0.15", "--steps", "3"];
    let streamed = run(&args);
    assert!(streamed.status.success());
    for path in [&path_a, &path_b] {
        let out = bin().args(args).arg("--out").arg(path).output().unwrap();
        assert!(out.status.success());
        assert!(out.stdout.is_empty(), "file mode writes nothing to stdout");
    }
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert_eq!(a, b, "byte-identical across runs");
    assert_eq!(a, streamed.stdout, "file content equals streamed content");
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["depolarizing", "--p-min", "0.4", "--p-max", "0.2", "--steps", "5"],
        &["depolarizing", "--p-min", "0", "--p-max", "0.3", "--steps", "1"],
        &["depolarizing", "--d", "1", "--p-min", "0", "--p-max", "0.3", "--steps", "3"],
        &["depolarizing", "--p-min", "0", "--p-max", "1.2", "--steps", "3"],
        &["bb84", "--p-min", "0", "--p-max", "0.6", "--steps", "3"],
        &["gad", "1.5", "--y-min", "0", "--y-max", "0.5", "--steps", "3"],
        &["gad", "not-a-number", "--steps", "3"],
        &["no-such-subcommand"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn unwritable_output_exits_3() {
    let out = run(&[
        "depolarizing",
        "--p-min",
        "0",
        "--p-max",
        "0.1",
        "--steps",
        "2",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn bb84_rows_keep_reference_point_above_minimum() {
    let out = run(&["bb84", "--p-min", "0", "--p-max", "0.2", "--steps", "3"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["p", "q1_lower", "q_fmin", "q_at_110"]);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "0.00000000000,1.00000000000,1.00000000000,1.00000000000"
    );
    for row in &rows {
        assert!(row[2] <= row[3] + 1e-9, "family minimum at or below reference point");
        assert!(row[1] <= row[2] + 1e-9);
    }
}

#[test]
fn bb84_reference_point_is_nan_where_infeasible() {
    let out = run(&["bb84", "--p-min", "0.35", "--p-max", "0.4", "--steps", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",nan"), "reference point undefined past 1-1/sqrt(2): {line}");
    }
}

#[test]
fn gad_thermal_parameter_symmetry_and_column_identities() {
    let low = run(&["gad", "0.3", "--y-min", "0", "--y-max", "0.4", "--steps", "3"]);
    let high = run(&["gad", "0.7", "--y-min", "0", "--y-max", "0.4", "--steps", "3"]);
    assert!(low.status.success() && high.status.success());
    assert_eq!(low.stdout, high.stdout, "N and 1-N give identical curves");

    let half = run(&["gad", "0.5", "--y-min", "0", "--y-max", "0.4", "--steps", "3"]);
    let (header, rows) = parse_csv(&stdout_of(&half));
    assert_eq!(header, ["y", "q1_lower", "q_ad", "q_fmin_half", "q_conv"]);
    for row in &rows {
        assert_eq!(row[3], row[4], "N = 1/2 collapses q_conv onto q_fmin_half");
    }

    let zero = run(&["gad", "0", "--y-min", "0", "--y-max", "0.4", "--steps", "3"]);
    let (_, rows0) = parse_csv(&stdout_of(&zero));
    for row in &rows0 {
        assert_eq!(row[2], row[4], "N = 0 collapses q_conv onto q_ad");
    }
    assert!(
        stdout_of(&zero).lines().nth(1).unwrap().starts_with("0.00000000000,1.00000000000,")
    );
}

fn write_config(path: &Path, config: &serde_json::Value) {
    std::fs::write(path, serde_json::to_vec(config).unwrap()).unwrap();
}

fn complex(re: f64) -> serde_json::Value {
    serde_json::json!([re, 0.0])
}

fn identity_kraus() -> serde_json::Value {
    serde_json::json!([[complex(1.0), complex(0.0)], [complex(0.0), complex(1.0)]])
}

#[test]
fn verify_accepts_unitary_mixture_flags() {
    let u: f64 = 0.75;
    let rot = serde_json::json!([
        [complex(0.8), complex(-0.6)],
        [complex(0.6), complex(0.8)]
    ]);
    let config = serde_json::json!({
        "d": 2,
        "components": [
            {"weight": u, "kraus": [identity_kraus()]},
            {"weight": 1.0 - u, "kraus": [rot]},
        ],
        "flags": [
            [complex(((2.0 * u - 1.0) / u).sqrt()), complex(((1.0 - u) / u).sqrt())],
            [complex(1.0), complex(0.0)],
        ],
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.json");
    write_config(&path, &config);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["degrading_residual"].as_f64().unwrap() <= 1e-8);
    assert!(report["degcond_residual"].as_f64().unwrap() <= 1e-9);
    assert!(report["constraint_report"]["pass"].as_bool().unwrap());
    let q1 = report["q1_bound"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&q1));
}

#[test]
fn verify_accepts_orthogonal_flags_with_commuting_components() {
    // Orthogonal flags kill every cross-component term of the degradability
    // condition; per-component terms then only demand commuting Kraus sets,
    // as with dephasing plus a unitary.
    let q: f64 = 0.2;
    let dephasing = serde_json::json!([
        [
            [complex((1.0 - q).sqrt()), complex(0.0)],
            [complex(0.0), complex((1.0 - q).sqrt())]
        ],
        [[complex(q.sqrt()), complex(0.0)], [complex(0.0), complex(-(q.sqrt()))]],
    ]);
    let x = serde_json::json!([[complex(0.0), complex(1.0)], [complex(1.0), complex(0.0)]]);
    let config = serde_json::json!({
        "d": 2,
        "components": [
            {"weight": 0.4, "kraus": dephasing},
            {"weight": 0.6, "kraus": [x]},
        ],
        "flags": [
            [complex(1.0), complex(0.0)],
            [complex(0.0), complex(1.0)],
        ],
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ortho.json");
    write_config(&path, &config);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["degcond_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verify_rejects_flags_violating_the_condition() {
    let x = serde_json::json!([[complex(0.0), complex(1.0)], [complex(1.0), complex(0.0)]]);
    let config = serde_json::json!({
        "d": 2,
        "components": [
            {"weight": 0.5, "kraus": [identity_kraus()]},
            {"weight": 0.5, "kraus": [x]},
        ],
        "flags": [
            [complex(1.0), complex(0.0)],
            [complex(1.0), complex(0.0)],
        ],
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write_config(&path, &config);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report["degcond_residual"].as_f64().unwrap() > 1e-9, "residual is reported");
}

#[test]
fn verify_parse_error_names_the_offending_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"d": 2, "components": [{"weight": "heavy", "kraus": []}], "flags": []}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("components"), "path in message: {stderr}");
}

#[test]
fn verify_missing_file_exits_3() {
    let out = run(&["verify", "/nonexistent-dir/none.json"]);
    assert_eq!(out.status.code(), Some(3));
}
