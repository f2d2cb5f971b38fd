use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const P3: &str = "x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)";

fn fptlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fptlab"))
        .args(args)
        .env("FPTLAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "fptlab/1");
    v
}

#[test]
fn digits_json() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fptlab(&dir.path().join("c"), &["digits", "--t", "2/45", "-q", "3", "--n-max", "5"]));
    let digits: Vec<u64> = v["result"]["digits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["digit"].as_u64().unwrap())
        .collect();
    assert_eq!(digits, vec![0, 0, 1, 0, 1]);
    assert_eq!(v["result"]["stabilize_base"], 4);
    assert_eq!(v["result"]["in_z_inv_q"], false);
}

#[test]
fn fpt_of_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let v = json(&fptlab(&cache, &["fpt", "--p", "3", "--poly", P3]));
    assert_eq!(v["result"]["value"]["value"], "2/9");
    assert_eq!(v["result"]["level"], 2);
    assert!(v["result"].get("nu_table").is_none());

    let v = json(&fptlab(&cache, &["fpt", "--p", "3", "--poly", P3, "--emit-table"]));
    assert_eq!(v["result"]["nu_table"][1]["nu"], 1);

    let fifth = format!("({P3})^5");
    let v = json(&fptlab(&cache, &["fpt", "--p", "3", "--poly", &fifth]));
    assert_eq!(v["result"]["value"]["value"], "2/45");
    assert_eq!(v["result"]["method"], "power-scaling");

    let out = fptlab(
        &cache,
        &["fpt", "--p", "2", "--poly", "x*y*(x^4+x^2*y+y^2)", "--weights", "1,2", "--format", "tsv"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("polynomial\tp\tfpt\tmethod"));
    assert!(lines.next().unwrap().contains("\t3/8\t"));

    let out = fptlab(&cache, &["fpt", "--p", "3", "--poly", P3, "--emit-table", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("e\tnu\ttruncation\n1\t0\t0/1\n2\t1\t1/9\n"), "{text}");
}

#[test]
fn extension_field_input() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fptlab(
        &dir.path().join("c"),
        &["fpt", "--p", "5", "--modulus", "z^2+2", "--poly", "x*y*(x+y)*(x+(u+3)*y)"],
    ));
    assert_eq!(v["result"]["value"]["value"], "2/5");
}

#[test]
fn nu_output_is_identical_with_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("nested").join("cache.tsv");
    let args = ["nu", "--p", "3", "--poly", P3, "--e-max", "4"];
    let cold = fptlab(&cache, &args);
    assert!(cold.status.success());
    assert!(cache.exists());
    let warm = fptlab(&cache, &args);
    assert_eq!(cold.stdout, warm.stdout);
    let v = json(&warm);
    let nus: Vec<u64> = v["result"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["nu"].as_u64().unwrap())
        .collect();
    assert_eq!(nus, vec![0, 1, 5, 17]);

    let stat = json(&fptlab(&cache, &["cache", "stat"]));
    assert_eq!(stat["result"]["entries"], 4);

    // A damaged cache is rebuilt and the answer does not change.
    std::fs::write(&cache, "fptlab-nu-cache 1\n3\tab\t1\t99\t0,0\nsha256\t00\n").unwrap();
    let again = fptlab(&cache, &args);
    assert_eq!(cold.stdout, again.stdout);

    let cleared = json(&fptlab(&cache, &["cache", "clear"]));
    assert_eq!(cleared["result"]["entries"], 0);
    assert!(!cache.exists());
}

#[test]
fn counterexample_five() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&fptlab(&dir.path().join("c"), &["counterexample", "--p", "5"]));
    let r = &v["result"];
    assert_eq!(r["h"], serde_json::json!([1, 4, 1]));
    assert_eq!(r["t_p"], "2/15");
    assert_eq!(r["multiplier"], 3);
    assert_eq!(r["in_t1"], false);
    assert_eq!(r["root"]["degree"], 2);
}

#[test]
fn accumulate_tsv_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let fifth = format!("({P3})^5");
    let out = fptlab(
        &dir.path().join("c"),
        &["accumulate", "--p", "3", "--poly", &fifth, "--levels", "2,3,4", "--probe", "5", "--format", "tsv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("e\tdigit\tnu_before\tnu_after"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn probe_vertical_pretty() {
    let dir = tempfile::tempdir().unwrap();
    let out = fptlab(
        &dir.path().join("c"),
        &["probe-vertical", "--p", "7", "--poly", "x^2+y^3", "--n-max", "5", "-e", "2", "--format", "pretty"],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("n = 5: 40/49"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    assert_eq!(fptlab(&cache, &["nu", "--p", "3", "--poly", "1+x"]).status.code(), Some(1));
    assert_eq!(fptlab(&cache, &["nu", "--p", "4", "--poly", "x"]).status.code(), Some(1));
    assert_eq!(fptlab(&cache, &["nu", "--p", "3", "--poly", "x+*y"]).status.code(), Some(1));
    assert_eq!(fptlab(&cache, &["frobnicate"]).status.code(), Some(1));
    let budget = fptlab(&cache, &["nu", "--p", "3", "--poly", "x+y", "--e-max", "8", "--max-terms", "10", "--no-cache"]);
    assert_eq!(budget.status.code(), Some(2));
    assert_eq!(fptlab(&cache, &["--help"]).status.code(), Some(0));
}
