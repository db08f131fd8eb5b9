use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(config: &str, args: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_matricial"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(config.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

const SEMICIRCLES: &str = r#"{"version": 1, "shape": "square", "order": 6,
  "distributions": {"1,1": {"semicircle": 1}, "1,2": {"semicircle": "1"},
                    "2,1": {"semicircle": 1}, "2,2": {"semicircle": 1}}}"#;

#[test]
fn semicircle_rows_give_free_moments_from_every_engine() {
    let out = run(SEMICIRCLES, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for engine in ["partition", "fock", "analytic"] {
        assert_eq!(
            strings(&report["moments"][engine]),
            ["1", "0", "2", "0", "8", "0", "40"]
        );
    }
    assert_eq!(report["engines_agree"], Value::Bool(true));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(SEMICIRCLES, &["--checks", "sum_inverse,uniqueness"]);
    let b = run(SEMICIRCLES, &["--checks", "sum_inverse,uniqueness"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn diagonal_array_matches_boolean_convolution() {
    use matricial::analytic::boolean_by_self_energy;
    use matricial::scalar::ratio;
    let config = r#"{"version": 1, "shape": "diagonal", "order": 7, "engines": ["partition", "analytic"],
      "distributions": {"1,1": {"cumulants": [1, "-2/3", 2]}, "2,2": {"cumulants": ["1/2", 3, 0, -1]}}}"#;
    let out = run(config, &[]);
    assert_eq!(out.status.code(), Some(0));
    let mu1 = [ratio(1, 1), ratio(-2, 3), ratio(2, 1)];
    let mu2 = [ratio(1, 2), ratio(3, 1), ratio(0, 1), ratio(-1, 1)];
    let oracle = boolean_by_self_energy(&mu1, &mu2, 7).unwrap();
    let want: Vec<String> = oracle.coeffs().iter().map(|c| c.to_string()).collect();
    let report = json(&out);
    assert_eq!(strings(&report["moments"]["partition"]), want);
    assert_eq!(strings(&report["moments"]["analytic"]), want);
    assert!(report["moments"].get("fock").is_none());
}

#[test]
fn residuals_of_a_custom_array_are_one_then_zeros() {
    let config = r#"{"version": 1, "shape": {"custom": ["1,1", "1,2", "2,1"]}, "order": 8,
      "distributions": {"1,1": {"cumulants": [2, -1, 3]}, "1,2": {"cumulants": [0, 1, -2, 1]},
                        "2,1": {"point_mass": "3/2"}}}"#;
    let out = run(
        config,
        &[
            "--checks",
            "sum_inverse,compressed_inverse",
            "--engines",
            "fock",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let ones = ["1", "0", "0", "0", "0", "0", "0", "0"];
    assert_eq!(strings(&report["checks"]["sum_inverse"]["residuals"]), ones);
    for cell in ["1,1", "1,2", "2,1"] {
        assert_eq!(
            strings(&report["checks"]["compressed_inverse"]["residuals"][cell]),
            ones
        );
    }
}

#[test]
fn all_checks_pass_in_float_mode() {
    let out = run(
        SEMICIRCLES,
        &[
            "--precision",
            "float",
            "--checks",
            "axioms,sum_inverse,compressed_inverse,uniqueness",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&out);
    for check in ["axioms", "sum_inverse", "compressed_inverse", "uniqueness"] {
        assert_eq!(
            report["checks"][check]["pass"],
            Value::Bool(true),
            "{check}"
        );
    }
    assert_eq!(report["moments"]["fock"][6].as_f64(), Some(40.0));
}

#[test]
fn strict_labelling_disagrees_and_exits_one() {
    let config = SEMICIRCLES.replace(
        "\"version\": 1,",
        "\"version\": 1, \"admissibility\": \"strict\",",
    );
    let out = run(&config, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disagree at order 6"));
    assert_eq!(json(&out)["ok"], Value::Bool(false));
}

#[test]
fn flags_override_config_fields() {
    let out = run(
        SEMICIRCLES,
        &["--order", "4", "--engines", "analytic", "--out", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "n,analytic\n0,1\n1,0\n2,2\n3,0\n4,8\n"
    );
}

#[test]
fn config_can_come_from_a_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("semicircles.json");
    std::fs::write(&path, SEMICIRCLES).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_matricial"))
        .args(["--config", path.to_str().unwrap(), "--order", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        strings(&json(&out)["moments"]["partition"]),
        ["1", "0", "2"]
    );
}

#[test]
fn fock_dump_lists_words() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("fock.txt");
    let out = run(
        SEMICIRCLES,
        &["--order", "2", "--fock-dump", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let dump = std::fs::read_to_string(&path).unwrap();
    assert!(dump.lines().any(|l| l == "(1,2)(2,2)"));
    assert!(dump.lines().any(|l| l == "Ω"));
}

#[test]
fn bad_requests_exit_two() {
    let cases = [
        ("not json", vec![]),
        (
            r#"{"version": 2, "shape": "square", "distributions": {}}"#,
            vec![],
        ),
        (
            r#"{"version": 1, "shape": "diagonal", "distributions": {"1,1": {"semicircle": 1}}}"#,
            vec![],
        ),
        (
            r#"{"version": 1, "shape": "diagonal", "distributions": {"1,1": {"semicircle": 1}, "2,2": {"semicircle": 1}, "1,2": {"point_mass": 1}}}"#,
            vec![],
        ),
        (
            r#"{"version": 1, "shape": "hexagonal", "distributions": {}}"#,
            vec![],
        ),
        (
            r#"{"version": 1, "shape": "diagonal", "distributions": {"1,1": {"semicircle": "x"}, "2,2": {"semicircle": 1}}}"#,
            vec![],
        ),
        (SEMICIRCLES, vec!["--order", "13"]),
        (SEMICIRCLES, vec!["--engines", "monte_carlo"]),
        (SEMICIRCLES, vec!["--precision", "decimal"]),
    ];
    for (config, args) in cases {
        let out = run(config, &args);
        assert_eq!(out.status.code(), Some(2), "{config} {args:?}");
        assert!(out.stdout.is_empty());
    }
}

fn meixner(b: &str, precision: &str) -> String {
    format!(
        r#"{{"version": 1, "shape": "square", "precision": "{precision}",
  "distributions": {{"1,1": {{"semicircle": 1}}, "2,2": {{"semicircle": 1}},
                    "1,2": {{"point_mass": {b}}}, "2,1": {{"point_mass": {b}}}}},
  "density": {{"grid_min": -4, "grid_max": 4, "points": 161, "eps": 1e-9}}}}"#
    )
}

#[test]
fn density_in_rational_mode_exits_two() {
    assert_eq!(run(&meixner("0", "rational"), &[]).status.code(), Some(2));
}

#[test]
fn zero_point_masses_give_a_symmetric_arcsine_without_atoms() {
    let out = run(&meixner("0", "float"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let samples = report["density"]["samples"].as_array().unwrap();
    let ys: Vec<f64> = samples.iter().map(|p| p[1].as_f64().unwrap()).collect();
    for k in 0..ys.len() {
        assert!((ys[k] - ys[ys.len() - 1 - k]).abs() < 1e-9);
    }
    assert!(report["density"]["atoms"].as_array().unwrap().is_empty());
    // G = 1/(z - 2 g) with g the standard semicircle transform, i.e. 1/sqrt(z^2 - 4)
    for (p, y) in samples.iter().zip(&ys) {
        let x = p[0].as_f64().unwrap();
        if x.abs() < 1.9 {
            let arcsine = 1.0 / (std::f64::consts::PI * (4.0 - x * x).sqrt());
            assert!((y - arcsine).abs() < 1e-6, "{x}: {y} vs {arcsine}");
        }
    }
}

#[test]
fn density_support_sits_on_the_shifted_interval() {
    let out = run(
        &meixner("\"1/2\"", "float"),
        &["--out", "csv", "--density-eps", "1e-10"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut sections = text.split("\n\n");
    sections.next();
    let density: Vec<(f64, f64)> = sections
        .next()
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    let positive: Vec<f64> = density.iter().filter(|p| p.1 > 1e-6).map(|p| p.0).collect();
    let (lo, hi) = (positive[0], *positive.last().unwrap());
    // grid step is 0.05; support is [b - 2, b + 2]
    assert!(
        (lo - -1.5).abs() <= 0.05 && (hi - 2.5).abs() <= 0.05,
        "{lo} {hi}"
    );
    let atoms: Vec<&str> = sections.next().unwrap().lines().skip(1).collect();
    assert_eq!(atoms.len(), 1);
    let location: f64 = atoms[0].split(',').next().unwrap().parse().unwrap();
    assert!((location - (0.5 - 4.25f64.sqrt())).abs() < 1e-9);
}
