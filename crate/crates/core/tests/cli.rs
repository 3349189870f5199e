use std::path::Path;
use std::process::{Command, Output};

use hermitia::cli::{run, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn bin(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hermitia"));
    cmd.args(args);
    match seed {
        Some(s) => cmd.env("HERMITIA_SEED", s),
        None => cmd.env_remove("HERMITIA_SEED"),
    };
    cmd.output().unwrap()
}

fn results(stdout: &str) -> Value {
    let v: Value = serde_json::from_str(stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    v["results"].clone()
}

#[test]
fn validate_fixtures() {
    let out = run(["hermitia", "validate", &fixture("abelian.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(results(&out.stdout)["ok"], true);

    let out = run(["hermitia", "validate", &fixture("iwasawa.json")]);
    assert_eq!(out.code, EXIT_OK);
    let r = results(&out.stdout);
    assert_eq!(r["jacobi_residuals"]["I1"], 0);
    assert_eq!(r["kahler"], false);
    assert_eq!(r["balanced"], true);

    let out = run(["hermitia", "validate", &fixture("invalid.json")]);
    assert_eq!(out.code, EXIT_FAILURE);
    assert_eq!(results(&out.stdout)["ok"], false);

    let out = run(["hermitia", "validate", &fixture("missing_n.json")]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("missing field `n`"), "{}", out.stderr);
}

#[test]
fn curvature_tables() {
    let out = run(["hermitia", "curvature", &fixture("iwasawa.json"), "--connection", "chern"]);
    assert_eq!(out.code, EXIT_OK);
    let r = results(&out.stdout);
    let comps = r["components"].as_array().unwrap();
    assert_eq!(comps.len(), 81);
    assert!(comps.iter().all(|c| c["R"]["re"] == 0 && c["R"]["im"] == 0));

    let out = run(["hermitia", "curvature", &fixture("iwasawa.json"), "--connection", "bismut"]);
    let r = results(&out.stdout);
    let hit = r["components"].as_array().unwrap().iter().find(|c| c["index"] == serde_json::json!([2, 2, 1, 1])).unwrap();
    assert_eq!(hit["R"]["re"], 1);

    let out = run(["hermitia", "curvature", &fixture("kodaira_thurston.json"), "--connection", "lc", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "i,j,k,l,re,im,hat_re,hat_im");
    assert_eq!(lines.len(), 17);
}

#[test]
fn curvature_errors() {
    let iw = fixture("iwasawa.json");
    let out = run(["hermitia", "curvature", &iw, "--connection", "general", "--r", "2", "--s", "1"]);
    assert_eq!(out.code, EXIT_FAILURE);
    assert!(out.stderr.contains("admissible domain"));
    assert_eq!(run(["hermitia", "curvature", &iw, "--connection", "general", "--r", "2"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "curvature", &iw, "--connection", "chern", "--r", "2", "--s", "0"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "curvature", &iw, "--connection", "nope"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "curvature", &fixture("invalid.json"), "--connection", "chern"]).code, EXIT_FAILURE);
}

#[test]
fn scan_reports() {
    let out = run(["hermitia", "scan", &fixture("abelian.json")]);
    let r = results(&out.stdout);
    assert_eq!(r["row_count"], r["constant_count"]);
    assert_eq!(r["row_count"], 81 * 61 - 80 + 2);

    let out = run(["hermitia", "scan", &fixture("iwasawa.json")]);
    assert_eq!(results(&out.stdout)["constant_points"], serde_json::json!([[1, 0]]));

    let out = run(["hermitia", "scan", &fixture("kodaira_thurston.json"), "--format", "csv", "--step", "1"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.lines().skip(1).all(|l| l.split(',').nth(4) == Some("false")));

    assert_eq!(run(["hermitia", "scan", &fixture("abelian.json"), "--step", "0"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "scan", &fixture("abelian.json"), "--r-min", "1", "--r-max", "-1"]).code, EXIT_INPUT);
}

#[test]
fn hopf_commands() {
    let out = run(["hermitia", "hopf", "--n", "2", "--z", "1,0", "--r", "-1", "--s", "0", "--report"]);
    assert_eq!(out.code, EXIT_OK);
    let r = results(&out.stdout);
    assert_eq!(r["constant"], true);
    assert_eq!(r["on_chen_nie"], true);
    assert_eq!(r["c"], 0);

    let out = run(["hermitia", "hopf", "--n", "2", "--flat-params"]);
    let r = results(&out.stdout);
    assert_eq!(r["flat_params"].as_array().unwrap().len(), 3);
    assert_eq!(r["flat_params"][2]["r"].as_f64().unwrap(), 0.333333333333);

    assert_eq!(run(["hermitia", "hopf", "--n", "1", "--flat-params"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "hopf", "--n", "2", "--z", "0,0", "--r", "0", "--s", "0", "--report"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "hopf", "--n", "3", "--z", "1,0", "--r", "0", "--s", "0", "--report"]).code, EXIT_INPUT);
    assert_eq!(run(["hermitia", "hopf", "--n", "2", "--r", "2", "--s", "1", "--report"]).code, EXIT_FAILURE);
}

#[test]
fn btp3_commands() {
    let out = run(["hermitia", "btp3", "--case", "rank3", "--r", "1", "--s", "0"]);
    assert_eq!(results(&out.stdout)["outcome"], serde_json::json!({"status": "consistent", "c": 0}));
    let out = run(["hermitia", "btp3", "--case", "wallach", "--r", "0", "--s", "0"]);
    let r = results(&out.stdout);
    assert_eq!(r["outcome"]["status"], "infeasible");
    assert!(r["outcome"]["violated"]["residual"].as_f64().unwrap().abs() > 1e-6);
    let out = run(["hermitia", "btp3", "--case", "middle", "--r", "-1", "--s", "0"]);
    assert_eq!(results(&out.stdout)["outcome"]["violated"]["predicted"], 1);
    assert_eq!(run(["hermitia", "btp3", "--case", "middle", "--r", "0", "--s", "0", "--lambda", "0"]).code, EXIT_INPUT);
}

#[test]
fn identities_and_catalog() {
    let out = run(["hermitia", "identities", &fixture("kodaira_thurston.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(results(&out.stdout)["identities"].as_array().unwrap().len(), 11);
    let out = run(["hermitia", "catalog", "iwasawa"]);
    assert_eq!(out.stdout, std::fs::read_to_string(fixture("iwasawa.json")).unwrap());
    assert_eq!(run(["hermitia", "catalog", "nonexistent"]).code, EXIT_INPUT);
}

#[test]
fn binary_is_deterministic_and_honours_the_seed() {
    let args = ["hopf", "--n", "3", "--r", "0.2", "--s", "0.4", "--report"];
    let a = bin(&args, Some("11"));
    let b = bin(&args, Some("11"));
    let c = bin(&args, Some("12"));
    let d = bin(&args, None);
    let e = bin(&args, Some("0"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(d.stdout, e.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(bin(&args, Some("abc")).status.code(), Some(2));

    let gen = ["generate", "--n", "4", "--m", "2"];
    assert_eq!(bin(&gen, Some("5")).stdout, bin(&["generate", "--n", "4", "--m", "2", "--seed", "5"], None).stdout);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(bin(&["validate", &fixture("abelian.json")], None).status.code(), Some(0));
    assert_eq!(bin(&["validate", &fixture("invalid.json")], None).status.code(), Some(1));
    assert_eq!(bin(&["validate", &fixture("missing_n.json")], None).status.code(), Some(2));
    assert_eq!(bin(&["bogus"], None).status.code(), Some(2));
    let out = bin(&["--version"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("hermitia "));
}
