use std::path::PathBuf;
use std::process::{Command, Output};

use bellkit::families::CATALOG_NAMES;
use serde_json::Value;

fn bellkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bellkit"))
        .args(args)
        .env_remove("BELLKIT_SEED")
        .output()
        .expect("run bellkit")
}

fn stdout(args: &[&str]) -> String {
    let out = bellkit(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

/// Rows of a CSV table, checked against its header width.
fn csv(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(args);
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect::<Vec<_>>())
        .collect();
    for r in &rows {
        assert_eq!(r.len(), header.len(), "{args:?}");
    }
    (header, rows)
}

fn column(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bellkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bound_by_name() {
    assert_eq!(
        stdout(&["bound", "--name", "AS6"]).trim(),
        r#"{"bound":12,"name":"AS6"}"#
    );
}

#[test]
fn catalog_round_trips_through_files() {
    for name in CATALOG_NAMES {
        let path = scratch(&format!("{name}.json"));
        let p = path.to_str().unwrap();
        stdout(&["catalog", "--name", name, "--output", p]);
        let stored: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let again = json(&["bound", "--file", p]);
        assert_eq!(again["bound"], stored["bound"], "{name}");
    }
}

#[test]
fn generated_inequalities_round_trip() {
    let path = scratch("d6.json");
    let p = path.to_str().unwrap();
    stdout(&[
        "gen",
        "--family",
        "d",
        "--row",
        "4,2,2,1,3,6",
        "--output",
        p,
    ]);
    assert_eq!(json(&["bound", "--file", p])["bound"], 42);

    let as40 = json(&["gen", "--family", "as", "--n", "40"]);
    assert_eq!(as40["bound"], 420);
    assert_eq!(as40["conjectured"], true);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "qvalue",
        "--name",
        "D6_2",
        "--dim",
        "3",
        "--seed",
        "5",
        "--verbose",
    ];
    assert_eq!(bellkit(&args).stdout, bellkit(&args).stdout);
    let csv_args = ["plot", "--kind", "visibility_vs_n", "--n", "2,4,6"];
    assert_eq!(bellkit(&csv_args).stdout, bellkit(&csv_args).stdout);
}

#[test]
fn seed_from_environment() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_bellkit"));
        cmd.args([
            "qvalue",
            "--name",
            "S3x4",
            "--dim",
            "3",
            "--restarts",
            "2",
            "--precision",
            "15",
        ]);
        match seed {
            Some(s) => cmd.env("BELLKIT_SEED", s),
            None => cmd.env_remove("BELLKIT_SEED"),
        };
        cmd.output().unwrap()
    };
    let by_env = run(Some("3"));
    assert!(by_env.status.success());
    let by_flag = bellkit(&[
        "qvalue",
        "--name",
        "S3x4",
        "--dim",
        "3",
        "--restarts",
        "2",
        "--precision",
        "15",
        "--seed",
        "3",
    ]);
    assert_eq!(by_env.stdout, by_flag.stdout);
    assert_eq!(run(Some("not-a-number")).status.code(), Some(1));
}

#[test]
fn visibility_rows() {
    let (header, rows) = csv(&[
        "visibility",
        "--family",
        "as",
        "--n",
        "2,4,10",
        "--dim",
        "2",
        "--seed",
        "0",
    ]);
    assert_eq!(
        header,
        [
            "n",
            "visibility",
            "quantum_value",
            "local_bound",
            "conjectured"
        ]
    );
    let v = column(&rows, 1);
    for (got, want, tol) in [
        (v[0], std::f64::consts::FRAC_1_SQRT_2, 1e-4),
        (v[1], 0.7348, 5e-4),
        (v[2], 0.7469, 5e-4),
    ] {
        assert!((got - want).abs() < tol, "{got} vs {want}");
    }
    let (_, rows) = csv(&["visibility", "--family", "as", "--n", "32"]);
    assert_eq!(rows[0][4], "true");
}

#[test]
fn detection_output() {
    let d = json(&[
        "detection",
        "--name",
        "CHSH",
        "--theta",
        "max",
        "--symmetric",
    ]);
    assert!((d["eta_star"].as_f64().unwrap() - 0.82843).abs() < 1e-4);
    let one = json(&["detection", "--name", "CHSH", "--eta-b", "1"]);
    let eta = one["eta_star"].as_f64().unwrap();
    assert!(eta > 0.5 && eta < 0.8284);
}

#[test]
fn plot_tables() {
    let (_, rows) = csv(&["plot", "--kind", "visibility_vs_n", "--n", "2,4,6,8,10"]);
    let v = column(&rows, 1);
    assert!(
        v.windows(2).all(|w| w[1] > w[0]) && v.iter().all(|&x| x < 0.7501),
        "{v:?}"
    );

    let (header, rows) = csv(&["plot", "--kind", "detection_vs_theta"]);
    assert_eq!(header, ["theta", "eta_star"]);
    let eta = column(&rows, 1);
    assert!((eta[0] - 0.8284).abs() < 1e-4);
    assert!(eta.windows(2).all(|w| w[1] < w[0]), "{eta:?}");

    let (_, rows) = csv(&[
        "plot",
        "--kind",
        "bellvalue_vs_eta",
        "--eta",
        "1,0.9,0.8284,0.7",
    ]);
    for (eta, value) in column(&rows, 0).into_iter().zip(column(&rows, 1)) {
        let closed = eta * eta * 8f64.sqrt() + (1.0 - eta) * (1.0 - eta) * 2.0;
        assert!(
            (value - closed).abs() < 1e-5,
            "η={eta}: {value} vs {closed}"
        );
    }
}

#[test]
fn facet_and_shb_json() {
    let r = json(&["facet", "--name", "CHSH"]);
    assert_eq!(r["is_facet"], true);
    assert_eq!(r["affine_rank"], 7);
    assert_eq!(r["polytope_dim"], 8);
    assert_eq!(r["space"], "full");
    let r = json(&["facet", "--name", "S3x4", "--space", "correlation"]);
    assert_eq!(r["is_facet"], false);
    assert_eq!(r["space"], "correlation");

    let s = json(&["shb", "--n", "3", "--m", "3", "--oracle"]);
    assert_eq!(s["oracle"], 9);
    assert_eq!(s["formula"], 6);
    let s = json(&["shb", "--n", "2", "--m", "4"]);
    assert_eq!(s["quantum_score"], 4.0);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bellkit(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&[]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["bound", "--bogus"]), Some(1));
    assert_eq!(code(&["bound", "--name", "NOPE"]), Some(1));
    assert_eq!(
        code(&["bound", "--precision", "16", "--name", "CHSH"]),
        Some(1)
    );
    assert_eq!(code(&["gen", "--family", "as", "--n", "7"]), Some(1));
    assert_eq!(
        code(&["detection", "--name", "CHSH", "--theta", "2"]),
        Some(1)
    );
    assert_eq!(code(&["shb", "--n", "9", "--m", "3", "--oracle"]), Some(2));
    assert_eq!(
        code(&["detection", "--name", "S3x4", "--theta", "0.01"]),
        Some(2)
    );
    assert_eq!(code(&["bound", "--file", "/nonexistent/x.json"]), Some(2));
    let out = bellkit(&["frobnicate"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn precision_flag() {
    let short = json(&["qvalue", "--name", "CHSH", "--dim", "2", "--precision", "3"]);
    assert_eq!(short["value"], 2.83);
    let long = json(&[
        "qvalue",
        "--name",
        "CHSH",
        "--dim",
        "2",
        "--precision",
        "12",
    ]);
    assert!((long["value"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-11);
}
