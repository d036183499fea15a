//! Every subcommand against a checked-in CSV, through the library and the binary.

use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use varexp::cli::{run, RunConfig};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// (golden name, expected exit status)
const CASES: [(&str, i32); 10] = [
    ("norm", 0),
    ("volume", 0),
    ("volume_ball", 0),
    ("decay", 0),
    ("energy", 0),
    ("alpha_beta", 0),
    ("certify", 0),
    ("certify_gamma1", 2),
    ("lemmas", 0),
    ("liouville", 0),
];

/// Optimization level changes the last bits of libm and `powi` results, so
/// checked-in files are matched per field; reruns of one binary must still
/// agree byte for byte.
fn assert_csv_close(got: &str, want: &str, name: &str) {
    let (g, w): (Vec<_>, Vec<_>) = (got.lines().collect(), want.lines().collect());
    assert_eq!(g.len(), w.len(), "{name}: row count");
    assert_eq!(g[0], w[0], "{name}: header");
    for (gl, wl) in g.iter().zip(&w).skip(1) {
        let (gf, wf): (Vec<_>, Vec<_>) = (gl.split(',').collect(), wl.split(',').collect());
        assert_eq!(gf.len(), wf.len(), "{name}: {gl}");
        for (a, b) in gf.iter().zip(&wf) {
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => {
                    assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())), "{name}: {a} vs {b} in {gl}")
                }
                _ => assert_eq!(a, b, "{name}: {gl}"),
            }
        }
    }
}

fn load(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(golden_dir().join(format!("{name}.config.json"))).unwrap();
    RunConfig::from_json(&text).unwrap()
}

#[test]
fn library_matches_golden_csv() {
    for (name, code) in CASES {
        let config = load(name);
        let out = run(&config).unwrap_or_else(|e| panic!("{name}: {e}"));
        let want = std::fs::read_to_string(golden_dir().join(format!("{name}.csv"))).unwrap();
        assert_csv_close(&out.csv, &want, name);
        assert_eq!(i32::from(out.exit_code()), code, "{name}: {}", out.verdict);
    }
}

fn invoke(args: &[&str]) -> (i32, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_varexp")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr))
}

#[test]
fn binary_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, code) in [("certify_gamma1", 2), ("energy", 0), ("liouville", 0), ("decay", 0)] {
        let config = golden_dir().join(format!("{name}.config.json"));
        let command = load(name).command.to_string();
        let mut csvs = Vec::new();
        for k in 0..2 {
            let dir = tmp.path().join(format!("{name}{k}"));
            let (status, text) =
                invoke(&[&command, "--config", config.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
            assert_eq!(status, code, "{name}: {text}");
            assert_eq!(text.lines().count(), 1, "one verdict line: {text}");
            csvs.push(std::fs::read(dir.join(format!("{command}.csv"))).unwrap());
            assert!(dir.join(format!("{command}.json")).exists());
        }
        assert_eq!(csvs[0], csvs[1], "{name}");
        let want = std::fs::read_to_string(golden_dir().join(format!("{name}.csv"))).unwrap();
        assert_csv_close(&String::from_utf8(csvs[0].clone()).unwrap(), &want, name);
    }
}

#[test]
fn certify_reports_the_cusp_threshold() {
    let (_, text) = invoke(&["certify", "--config", golden_dir().join("certify_gamma1.config.json").to_str().unwrap(), "--out", tempfile::tempdir().unwrap().path().to_str().unwrap()]);
    assert!(text.contains("p_in < 9/2 = 4.5"), "{text}");
}

#[test]
fn usage_errors_exit_one_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"exponent": {"kind": "t2", "gamma": 0.5, "p_in": 7, "p_out": 4}, "field": {"name": "zero"}, "r_grid": {"start": 8, "factor": 2, "count": 4}}"#).unwrap();
    let (status, text) = invoke(&["liouville", "--config", bad.to_str().unwrap()]);
    assert_eq!(status, 1);
    assert!(text.contains("`exponent`") && text.contains("(6γ+3)/(2γ) = 6"), "{text}");

    let (status, text) = invoke(&["decay", "--config", golden_dir().join("decay.config.json").to_str().unwrap(), "--r-count", "3"]);
    assert_eq!(status, 1);
    assert!(text.contains("r_grid.count"), "{text}");

    let (status, text) = invoke(&["norm", "--quad", "mc"]);
    assert_eq!(status, 1);
    assert!(text.contains("--seed"), "{text}");

    let (status, _) = invoke(&["energy", "--config", golden_dir().join("decay.config.json").to_str().unwrap()]);
    assert_eq!(status, 1, "config for another command");

    let (status, _) = invoke(&["frobnicate"]);
    assert_eq!(status, 1);
}

#[test]
fn help_documents_columns() {
    let (status, text) = invoke(&["--help"]);
    assert_eq!(status, 0);
    assert!(text.contains("R,alpha,beta1,beta2,beta,lap_norm,grad_norm,errors"), "{text}");
}

#[test]
fn flag_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let (status, text) = invoke(&[
        "energy", "--config", golden_dir().join("energy.config.json").to_str().unwrap(),
        "--radius", "8", "--quad", "strat", "--seed", "4", "--samples", "400000", "--out", tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(status, 0, "{text}");
    let csv = std::fs::read_to_string(tmp.path().join("energy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("energy.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["quadrature"]["scheme"], "stratified");
    assert_eq!(report["config"]["quadrature"]["seed"], 4);
}
