use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use spherekit::algebra::{MatF, Rational};
use spherekit::textfmt::parse_matrix_list;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherekit")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (v, out.status.code().unwrap())
}

fn records(v: &Value) -> &Vec<Value> {
    v["records"].as_array().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_default_run_passes() {
    let (v, code) = json(&["verify-paper", "--samples", "10"]);
    assert_eq!(code, 0);
    let recs = records(&v);
    assert!(recs.len() >= 60, "{} records", recs.len());
    let passed = recs.iter().filter(|r| r["verdict"] == "pass").count();
    assert_eq!(v["summary"]["total"], recs.len());
    assert_eq!(v["summary"]["passed"], passed);
    assert!(recs.iter().all(|r| r["paper_anchor"].as_str().is_some_and(|s| !s.is_empty())));
    let suites: Vec<&str> = recs.iter().map(|r| r["suite"].as_str().unwrap()).collect();
    let first = |s: &str| suites.iter().position(|x| *x == s).unwrap();
    assert!(first("clifford") < first("identities"));
    assert!(first("identities") < first("killing"));
    assert!(first("killing") < first("firey"));
    assert!(first("firey") < first("table2"));
}

#[test]
fn verify_filters_and_exact_mode() {
    let (v, code) = json(&["verify-paper", "--family", "spin9", "--only", "identities"]);
    assert_eq!(code, 0);
    let recs = records(&v);
    assert!(recs.iter().all(|r| r["suite"] == "identities" && r["family"] == "spin9"));
    for name in ["norm of X1", "X1 plus an h-vector is simple", "double bracket in spin(9)", "norms of Y and Z"] {
        assert!(recs.iter().any(|r| r["check"] == name), "{name}");
    }

    let (v, code) = json(&["verify-paper", "--mode", "exact", "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["mode"], "exact");
    for r in records(&v).iter().filter(|r| r["suite"] == "killing" && r["check"].as_str().unwrap().contains("vectors")) {
        assert_eq!(r["lhs"], "0.00e0", "{r}");
    }
}

#[test]
fn seeded_runs_are_identical() {
    let a = run(&["verify-paper", "--only", "killing", "--samples", "5", "--seed", "9"]);
    let b = run(&["verify-paper", "--only", "killing", "--samples", "5", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}

#[test]
fn exports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("theta.txt");
    assert!(run(&["export", "theta-basis", "--out", out.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let items: Vec<(String, MatF<Rational>)> = parse_matrix_list(&text).unwrap();
    assert_eq!(items.len(), 36);
    assert!(items.iter().all(|(_, m)| m.n() == 16 && m.is_skew_hermitian(0.0)));
    assert_eq!(spherekit::textfmt::format_matrix_list(&items), text);

    let dump = run(&["spin9", "dump-theta"]);
    assert_eq!(String::from_utf8(dump.stdout).unwrap(), text);

    let dec = run(&["export", "decomposition", "--family", "spin9"]);
    let items: Vec<(String, MatF<Rational>)> = parse_matrix_list(&String::from_utf8(dec.stdout).unwrap()).unwrap();
    let count = |p: &str| items.iter().filter(|(n, _)| n.split(' ').next() == Some(p)).count();
    assert_eq!((count("h"), count("p2"), count("p1")), (21, 7, 8));

    let oct = String::from_utf8(run(&["export", "octonion-table"]).stdout).unwrap();
    let rows: Vec<Vec<i32>> =
        oct.lines().map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[1][2], 4); // i·j = k
    assert!(rows.iter().all(|r| r.len() == 8));

    let bad = run(&["export", "octonion-table", "--out", "/nonexistent/dir/x.txt"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn construct_killing_records() {
    let dir = tempfile::tempdir().unwrap();
    let v = write(dir.path(), "v.txt", "0+12i, 3, 4i, 0");
    let (out, code) = json(&["construct-killing", "--family", "u", "--n", "3", "--vector", &v, "--mode", "exact"]);
    assert_eq!(code, 0);
    assert_eq!(records(&out)[0]["lhs"], "C² = 169");

    let bad = write(dir.path(), "w.txt", "0+3i, 4, 12i, 0");
    let r = run(&["construct-killing", "--family", "u", "--n", "3", "--vector", &bad, "--mode", "exact"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("numeric mode"));
    let (_, code) = json(&["construct-killing", "--family", "u", "--n", "3", "--vector", &bad]);
    assert_eq!(code, 0);

    let su = write(dir.path(), "su.txt", "0+1i, 1, 1");
    let (out, code) = json(&["construct-killing", "--family", "su", "--n", "2", "--vector", &su]);
    assert_eq!(code, 0);
    assert_eq!(records(&out)[0]["check"], "su delta field");

    let s9 = write(dir.path(), "s9.txt", "0, 1, 0, 2, 0, 0, 0, 0, 1/2, 0, 0, 0, 0, 0, 0, 3");
    let (out, code) = json(&["spin9", "field", "--vector", &s9, "--mode", "exact"]);
    assert_eq!(code, 0);
    assert_eq!(records(&out)[0]["lhs"], "119 of 119 equations");
}

#[test]
fn delta_check_and_table2() {
    let (v, code) = json(&["delta-check", "--family", "su", "--n", "2", "--t", "1/2"]);
    assert_eq!(code, 1);
    let fail = records(&v).iter().find(|r| r["verdict"] == "fail").unwrap();
    assert!(fail["detail"].as_str().unwrap().contains("t ≥ 3/4"));
    let (_, code) = json(&["delta-check", "--family", "su", "--n", "2", "--t", "3/4", "--mode", "exact"]);
    assert_eq!(code, 0);

    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "C: 1i, 0, 0; 0, 2i, 0; 0, 0, 0");
    let (v, code) = json(&["delta-check", "--family", "u", "--n", "2", "--t", "1", "--matrix", &w, "--samples", "300"]);
    assert_eq!(code, 1);
    assert_eq!(records(&v).last().unwrap()["check"], "sampled delta test");

    let (v, code) = json(&["table2", "--family", "u", "--n", "2"]);
    assert_eq!(code, 0);
    let at = records(&v).iter().find(|r| r["t"] == "26/25").unwrap();
    assert_eq!(at["verdict"], "fail");
    let (v, code) = json(&["delta-check", "--family", "u", "--n", "2", "--t", "1.05"]);
    assert_eq!(code, 1);
    assert_eq!(records(&v)[0]["check"], "prop22[u]");
    let (_, code) = json(&["table2", "--family", "sp-split", "--n", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn firey_commands() {
    let (v, code) = json(&["firey", "combine", "--family", "sp-split", "--x", "1/2,1/4", "--y", "1,1", "--theta", "2/3"]);
    assert_eq!(code, 0);
    let r = &records(&v)[0];
    assert_eq!((r["t"].as_str(), r["s"].as_str()), (Some("3/4"), Some("1/2")));

    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.txt", "2, 0; 0, 1");
    let b = write(dir.path(), "b.txt", "1, 0; 0, 3");
    let (v, code) = json(&["firey", "ellipsoid", "--a", &a, "--b", &b, "--theta", "0.5"]);
    assert_eq!(code, 0);
    assert!(records(&v)[0]["lhs"].as_str().unwrap().contains("1.5"));
}

#[test]
fn bad_arguments_are_rejected() {
    assert_eq!(run(&["verify-paper", "--mode", "fast"]).status.code(), Some(2));
    assert_eq!(run(&["table2", "--family", "g2"]).status.code(), Some(2));
    assert_eq!(run(&["delta-check", "--family", "u", "--t", "1", "--s", "1"]).status.code(), Some(2));
}
