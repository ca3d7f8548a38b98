//! End-to-end runs of the `fermicorr` binary.

use std::process::{Command, Output};

fn fermicorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermicorr"))
        .args(args)
        .env_remove("FERMICORR_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing from\n{text}"))
        .to_string()
}

#[test]
fn sweep_writes_expected_rows() {
    let o = fermicorr(&["sweep", "--x-min", "0", "--x-max", "4", "--n-points", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x,C_s1s2,E_s1s2,C_S1S2,E_S1S2,C_nn,E_nn,C_N1N2,E_N1N2,cf_C_S1S2,cf_E_nn,cf_C_N1N2,err_max"
    );
    assert_eq!(lines.len(), 18);
    let rows: Vec<Vec<f64>> = lines[1..]
        .iter()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][7] + 0.5).abs() < 1e-12);
    assert!(rows[0][6].abs() < 1e-10);
    assert_eq!(rows[4][0], 1.0);
    assert!((rows[4][3] + 0.853_553_4).abs() < 1e-7);
    for r in &rows {
        assert!((r[1] + 1.0).abs() < 1e-10);
        assert!(r[12] <= 1e-8);
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = fermicorr(&[
            "sweep",
            "--scale",
            "log",
            "--x-min",
            "0.01",
            "--x-max",
            "1e4",
            "--n-points",
            "25",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 25);
    assert_eq!(doc["maxima"][2]["value"].as_f64().unwrap(), 0.25);
}

#[test]
fn seed_flag_beats_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_fermicorr"))
        .args([
            "sweep",
            "--n-points",
            "3",
            "--format",
            "json",
            "--seed",
            "5",
        ])
        .env("FERMICORR_SEED", "9")
        .output()
        .unwrap();
    let flag_only = fermicorr(&[
        "sweep",
        "--n-points",
        "3",
        "--format",
        "json",
        "--seed",
        "5",
    ]);
    assert_eq!(with_env.stdout, flag_only.stdout);
    assert!(stdout(&flag_only).contains("\"seed\": 5"));

    let env_only = Command::new(env!("CARGO_BIN_EXE_fermicorr"))
        .args(["sweep", "--n-points", "3", "--format", "json"])
        .env("FERMICORR_SEED", "9")
        .output()
        .unwrap();
    assert!(String::from_utf8(env_only.stdout)
        .unwrap()
        .contains("\"seed\": 9"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["sweep", "--x-min", "-1"],
        vec!["sweep", "--x-min", "3", "--x-max", "1"],
        vec!["sweep", "--scale", "log"],
        vec!["sweep", "--format", "xml"],
        vec!["epr", "--n-cells", "1"],
        vec!["maximize", "--pair", "v"],
        vec!["slater", "--x", "-2"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = fermicorr(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(fermicorr(&["--help"]).status.code(), Some(0));
}

#[test]
fn slater_reports_both_sides() {
    let o = fermicorr(&["slater", "--x", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert_eq!(field(&t, "slater_rank"), "1");
    assert_eq!(field(&t, "C_s1s2"), "-1");
    assert!(field(&t, "pfaffian_residual").parse::<f64>().unwrap() <= 1e-12);

    let t = stdout(&fermicorr(&["slater", "--x", "1"]));
    assert_eq!(field(&t, "slater_rank"), "2");

    let t = stdout(&fermicorr(&["slater", "--x", "1000"]));
    assert_eq!(field(&t, "slater_rank"), "2");
    assert!(field(&t, "C_N1N2").parse::<f64>().unwrap().abs() < 1e-6);
}

#[test]
fn epr_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("epr.csv");
    let o = fermicorr(&["epr", "--n-cells", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,k_prime,numerator,denominator,conditional");
    assert_eq!(lines.len(), 1 + 16 * 15);
    for l in &lines[1..] {
        let c: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!((c + 1.0).abs() <= 1e-10);
    }
}

#[test]
fn maximize_pairs() {
    for (pair, expected) in [("i", "1"), ("ii", "1"), ("iii", "0.25"), ("iv", "1")] {
        let o = fermicorr(&[
            "maximize",
            "--pair",
            pair,
            "--restarts",
            "16",
            "--oracle-samples",
            "20000",
        ]);
        assert_eq!(o.status.code(), Some(0), "pair {pair}");
        let t = stdout(&o);
        let got: f64 = field(&t, "max_abs_C").parse().unwrap();
        assert!((got - expected.parse::<f64>().unwrap()).abs() <= 1e-6);
        assert_eq!(field(&t, "converged"), "true");
    }
}

#[test]
fn verify_passes() {
    let o = fermicorr(&["verify"]);
    let t = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{t}");
    assert!(t.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    assert!(!t.contains("FAIL "));
}
