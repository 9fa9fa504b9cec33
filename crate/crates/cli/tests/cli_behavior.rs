//! Exit codes, report shapes, and the documented example invocations.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubeapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn zero_function_yields_all_zero_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    let out = run(&[
        "approximate", "--fn", "zero", "--n", "2", "--m", "1", "--degrees", "8", "--grid", "21",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "degree,alpha,sup_error,max_sigma_bern_error"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3); // |α| ≤ 1 in two dimensions
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[0], "8");
        assert_eq!(cells[2], "0");
        assert_eq!(cells[3], "0");
    }
}

#[test]
fn order_cap_violation_is_a_usage_error() {
    let out = run(&[
        "approximate", "--fn", "exp-sum", "--n", "2", "--m", "4", "--degrees", "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let diag = stderr(&out);
    assert_eq!(diag.lines().count(), 1, "diagnostic must be one line: {diag}");
    assert!(diag.starts_with("error: usage:"), "{diag}");
}

#[test]
fn unknown_function_is_a_usage_error() {
    let out = run(&[
        "approximate", "--fn", "parabola", "--n", "1", "--m", "1", "--degrees", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown test function"));
}

#[test]
fn degree_above_cap_is_a_usage_error() {
    let out = run(&[
        "approximate", "--fn", "one", "--n", "1", "--m", "1", "--degrees", "65",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_identity_prints_residual() {
    let out = run(&["verify-identity", "--m", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("residual 0"), "{text}");
}

#[test]
fn poincare_named_function_example() {
    let out = run(&[
        "poincare", "--statement", "order-one", "--fn", "x1", "--p", "inf", "--n", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("lhs 1 rhs 1 holds true"), "{text}");
}

#[test]
fn poincare_unsatisfied_trace_is_a_numerical_error() {
    // u ≡ 1 violates the vanishing trace on {x₁ = 0}
    let out = run(&[
        "poincare", "--statement", "order-one", "--fn", "one", "--p", "inf", "--n", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: numerical:"));
}

#[test]
fn mollify_demo_error_column_is_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mollify.csv");
    let out = run(&[
        "mollify-demo", "--steps", "4,8,16", "--n", "1", "--m", "1", "--kernel-s", "2",
        "--grid", "81", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(path).unwrap();
    let errors: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|row| row.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    for w in errors.windows(2) {
        assert!(w[1] <= 1.1 * w[0], "{errors:?}");
    }
}

#[test]
fn config_file_provides_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{ "fn": "one", "n": 1, "m": 1, "degrees": [4], "grid": 11 }"#,
    )
    .unwrap();

    // config alone supplies everything
    let out = run(&["approximate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // an explicit flag overrides the config's function
    let path = dir.path().join("zero.csv");
    let out = run(&[
        "approximate", "--config", config.to_str().unwrap(), "--fn", "zero", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    for row in text.lines().skip(1) {
        assert!(row.ends_with(",0,0"), "zero function must give zero rows: {row}");
    }

    // unknown config keys are rejected
    std::fs::write(&config, r#"{ "fwn": "one" }"#).unwrap();
    let out = run(&["approximate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn poly_out_round_trips_through_the_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poly.json");
    let out = run(&[
        "approximate", "--fn", "xprod", "--n", "2", "--m", "1", "--degrees", "6", "--grid",
        "11", "--poly-out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(path).unwrap();
    let poly: cubeapprox::Polynomial = serde_json::from_str(&text).unwrap();
    assert_eq!(poly.dimension(), 2);
    // terms are sorted graded-lex descending in the file
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let degrees: Vec<u64> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            t["exp"]
                .as_array()
                .unwrap()
                .iter()
                .map(|e| e.as_u64().unwrap())
                .sum()
        })
        .collect();
    assert!(degrees.windows(2).all(|w| w[0] >= w[1]), "{degrees:?}");
}

#[test]
fn json_format_parses_and_matches_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("r.csv");
    let json_path = dir.path().join("r.json");
    let base = [
        "poincare", "--statement", "standard", "--n", "1", "--m", "1", "--cases", "4",
        "--seed", "3", "--grid", "41",
    ];
    let a = run(&[&base[..], &["--out", csv_path.to_str().unwrap()]].concat());
    let b = run(&[
        &base[..],
        &["--format", "json", "--out", json_path.to_str().unwrap()],
    ]
    .concat());
    assert!(a.status.success() && b.status.success());

    let csv = std::fs::read_to_string(csv_path).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    assert!(rows[0]["ratio"].is_number());
}
