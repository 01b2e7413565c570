//! End-to-end tests of the qjac binary: output shape, determinism and
//! the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qjac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qjac"))
        .args(args)
        .env_remove("QJAC_DEFAULT_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn expand_theta_json() {
    let out = qjac(&[
        "expand", "--series", "THETA", "--u-prec", "8", "--q-prec", "5", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["u_min"], 1);
    let u3q0 = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["u"] == 3 && e["q"] == 0)
        .expect("u^3 q^0 present");
    assert_eq!(u3q0["v"], "-1/24");
}

#[test]
fn expand_is_deterministic() {
    let args = ["expand", "--series", "G", "--u-prec", "8", "--q-prec", "6", "--format", "csv"];
    let a = qjac(&args);
    let b = qjac(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn env_var_sets_default_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_qjac"))
        .args(["expand", "--series", "THETA", "--format", "pretty"])
        .env("QJAC_DEFAULT_PREC", "6")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(stdout(&out).contains("precision: u^6, q^7"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir();
    let cfg = dir.join("qjac_e2e.cfg");
    std::fs::write(&cfg, "u_prec = 4\nq_prec = 3\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let out = qjac(&["expand", "--series", "THETA", "--config", cfg_s, "--format", "pretty"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("precision: u^4, q^3"));
    let out = qjac(&[
        "expand", "--series", "THETA", "--config", cfg_s, "--u-prec", "6", "--format", "pretty",
    ]);
    assert!(stdout(&out).contains("precision: u^6, q^3"));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn verify_suite_passes_and_unknown_suite_is_usage_error() {
    let out = qjac(&["verify", "ycoords", "--u-prec", "10", "--q-prec", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
    let bad = qjac(&["verify", "nonsense"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn unknown_series_is_usage_error() {
    let out = qjac(&["expand", "--series", "NOPE"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bps_table_json() {
    let out = qjac(&[
        "bps", "--series", "UTUT", "--index", "1", "--u-prec", "10", "--q-prec", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["index"], 1);
    assert_eq!(v["rows"]["0"]["0"], "1");
    // the fitted rows are symmetric under y -> 1/y
    assert_eq!(v["rows"]["1"]["2"], v["rows"]["1"]["-2"]);
}

#[test]
fn certify_exit_codes() {
    let dir = std::env::temp_dir();
    let write = |name: &str, series: &str| -> PathBuf {
        let out = qjac(&[
            "expand", "--series", series, "--u-prec", "10", "--q-prec", "14", "--format", "json",
        ]);
        assert!(out.status.success());
        let path = dir.join(name);
        std::fs::write(&path, out.stdout).unwrap();
        path
    };
    let a = write("qjac_e2e_a.json", "UTUT");
    let b = write("qjac_e2e_b.json", "UTUT");
    let g = write("qjac_e2e_g.json", "G");
    let same = qjac(&[
        "certify", "--lhs", a.to_str().unwrap(), "--rhs", b.to_str().unwrap(),
        "--sigma", "0", "--strong",
    ]);
    assert_eq!(same.status.code(), Some(0));
    assert!(stdout(&same).contains("CertifiedZero"));
    let diff = qjac(&[
        "certify", "--lhs", a.to_str().unwrap(), "--rhs", g.to_str().unwrap(),
        "--sigma", "0", "--strong",
    ]);
    assert_eq!(diff.status.code(), Some(1));
    let missing = qjac(&[
        "certify", "--lhs", "/nonexistent.json", "--rhs", a.to_str().unwrap(), "--sigma", "0",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    for p in [a, b, g] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn table_csv_and_integers_only() {
    let out = qjac(&[
        "table", "--invariant", "N", "--m", "0", "--n", "1", "--g", "0", "--h", "0..3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,n,g,h,value");
    assert_eq!(lines[1], "0,1,0,0,1");
    assert_eq!(lines[2], "0,1,0,1,24");
    assert_eq!(lines[3], "0,1,0,2,324");

    let bps = qjac(&["table", "--invariant", "bps-k3e", "--h", "0..2", "--integers-only"]);
    assert_eq!(bps.status.code(), Some(0));
    assert!(stdout(&bps).lines().any(|l| l == "0,0,24"));

    // Theta^2 starts at u^-2 with coefficient 1, so this stays integral
    let frac = qjac(&[
        "table", "--invariant", "abelian", "--g", "0", "--d", "0", "--integers-only",
    ]);
    assert_eq!(frac.status.code(), Some(0));

    let bad = qjac(&["table", "--invariant", "nonsense", "--h", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    let missing_range = qjac(&["table", "--invariant", "N", "--m", "0"]);
    assert_eq!(missing_range.status.code(), Some(2));
}
