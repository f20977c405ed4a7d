use std::process::{Command, Output};

use serde_json::Value;

fn taf15(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taf15")).args(args).output().expect("spawn taf15")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn passing_groups_exit_zero() {
    for group in ["cm-table", "units", "one-form", "f-derivation"] {
        let out = taf15(&["verify", group]);
        assert_eq!(out.status.code(), Some(0), "verify {group}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn claim_failure_exits_one() {
    let out = taf15(&["verify", "identities", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let rep = stdout_json(&out);
    let claims = rep["claims"].as_array().unwrap();
    assert!(claims.iter().any(|c| c["id"] == "five-h" && c["status"] == "fail"));
    assert!(claims.iter().any(|c| c["id"] == "five-h-doubled-ladder" && c["status"] == "pass"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(taf15(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(taf15(&["verify", "domain", "--digits", "5"]).status.code(), Some(2));
    assert_eq!(taf15(&["ss", "run", "--window", "8"]).status.code(), Some(2));
    assert_eq!(taf15(&["ss", "run", "--window", "9:2"]).status.code(), Some(2));
    assert_eq!(taf15(&["ss", "chart", "--variant", "loc-a5"]).status.code(), Some(2));
}

#[test]
fn chart_json_schema() {
    let out = taf15(&["ss", "chart", "--variant", "plain", "--format", "json", "--window", "-4:16", "--fil-cap", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let stems = stdout_json(&out);
    let stems = stems.as_array().unwrap();
    assert_eq!(stems.len(), 21);
    let monomial = regex_lite(r"z^", &["a1^", "a3^", "a6^"]);
    for st in stems {
        assert!(st["stem"].is_i64());
        for c in st["classes"].as_array().unwrap() {
            assert!(c["s"].is_u64() && c["t"].is_i64());
            let m = c["monomial"].as_str().unwrap();
            assert!(m.split(" + ").all(&monomial), "{m}");
            let order = c["order"].as_str().unwrap();
            assert!(order == "Z2-free" || order.starts_with("2^"), "{order}");
        }
    }
    let stem1 = &stems[5]["classes"];
    assert_eq!(stem1[0]["monomial"], "z^1 a1^1 a3^0 a6^0");
}

/// Checks that a monomial has the shape "z^k a1^i a3^j a6^e".
fn regex_lite(head: &'static str, rest: &'static [&'static str]) -> impl Fn(&str) -> bool {
    move |m: &str| {
        let parts: Vec<&str> = m.split(' ').collect();
        parts.len() == 1 + rest.len()
            && std::iter::once(head)
                .chain(rest.iter().copied())
                .zip(&parts)
                .all(|(p, w)| w.strip_prefix(p).is_some_and(|n| n.parse::<i64>().is_ok()))
    }
}

#[test]
fn output_is_deterministic_and_out_file_works() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out =
            taf15(&["ss", "run", "--window", "-4:12", "--fil-cap", "12", "--json", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let run: Value = serde_json::from_slice(&a).unwrap();
    let pages: Vec<u64> = run["pages"].as_array().unwrap().iter().map(|p| p["r"].as_u64().unwrap()).collect();
    assert_eq!(pages, [2, 4, 8]);
}

#[test]
fn every_variant_charts() {
    for v in ["plain", "w15", "tau", "loc-a1", "loc-a3"] {
        for f in ["json", "ascii"] {
            let out = taf15(&["ss", "chart", "--variant", v, "--format", f, "--window", "-4:8", "--fil-cap", "10"]);
            assert_eq!(out.status.code(), Some(0), "{v} {f}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
}

#[test]
fn intersections_json() {
    let out = taf15(&["intersections", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let pairs = stdout_json(&out);
    let pairs = pairs.as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    let rows: usize = pairs.iter().map(|p| p["rows"].as_array().unwrap().len()).sum();
    assert_eq!(rows, 10);
    assert!(pairs.iter().all(|p| p["verdict"].is_null()));
}

#[test]
fn forms_and_cohomology() {
    let out = taf15(&["forms", "basis", "--weight", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let basis = stdout_json(&out);
    assert_eq!(basis.as_array().unwrap().len(), 4);

    let out = taf15(&["cohomology", "--s", "0", "--t", "0", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["free_rank"], 1);
    let out = taf15(&["cohomology", "--s", "1", "--t", "-3", "--action", "w15"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn characters_table() {
    let out = taf15(&["characters", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["sigma"], row["expected"]);
    }
}
