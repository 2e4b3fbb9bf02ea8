use std::path::Path;
use std::process::{Command, Output};

use crmorse_core::geometry::heisenberg_spec;
use serde_json::Value;
use tempfile::TempDir;

fn crmorse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crmorse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr not empty");
    serde_json::from_str(line).expect("error object is JSON")
}

fn diag_doc(m: &[f64], l: &[f64]) -> String {
    let mat = |d: &[f64]| -> Vec<Vec<[f64; 2]>> {
        (0..d.len())
            .map(|j| {
                (0..d.len())
                    .map(|t| [if j == t { d[j] } else { 0.0 }, 0.0])
                    .collect()
            })
            .collect()
    };
    serde_json::json!({ "version": "1", "dim": m.len(), "M": mat(m), "L": mat(l) }).to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn point_fixture_report() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", &diag_doc(&[1.0, 1.0], &[1.0, -1.0]));
    let out = crmorse(&["analyze-point", "--input", &input, "--q", "0", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let res = &r["results"];
    assert_eq!(res["status"], "ok");
    let iv = res["intervals"][0].as_array().unwrap();
    assert!((iv[0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((iv[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((res["integral"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
    assert_eq!(res["y_status"], true);
    assert!(r["input_digest"].as_str().unwrap().starts_with("sha256:"));
    let cmps = r["oracle_comparisons"].as_array().unwrap();
    assert_eq!(cmps.len(), 2);
    assert!(cmps.iter().all(|c| c["passed"] == true));
    assert!(r["tolerances"]["grid_relative"]["value"].as_f64().is_some());
}

#[test]
fn point_equal_weights_is_empty() {
    let dir = TempDir::new().unwrap();
    let lambda = [-1.0, 2.0, 1.0];
    let input = write(&dir, "p.json", &diag_doc(&lambda, &lambda));
    let out = crmorse(&["analyze-point", "--input", &input, "--q", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let res = &stdout_json(&out)["results"];
    assert_eq!(res["status"], "empty set");
    assert_eq!(res["integral"].as_f64(), Some(0.0));
}

#[test]
fn point_unbounded_q_exits_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", &diag_doc(&[1.0, 1.0], &[1.0, -1.0]));
    let out = crmorse(&["analyze-point", "--input", &input, "--q", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "UnboundedSignatureSet");
}

#[test]
fn point_parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        "{\n \"version\": \"1\",\n \"dim\": 2,\n \"M\": [\n}",
    );
    let out = crmorse(&["analyze-point", "--input", &bad, "--q", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "ParseError");
    assert_eq!(e["line"], 5);

    let mut doc: Value = serde_json::from_str(&diag_doc(&[1.0, 1.0], &[1.0, -1.0])).unwrap();
    doc["M"][0][1] = serde_json::json!([0.5, 0.0]);
    let asym = write(&dir, "asym.json", &doc.to_string());
    let out = crmorse(&["analyze-point", "--input", &asym, "--q", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["field"], "M[0][1]");

    let missing = dir.path().join("missing.json");
    let out = crmorse(&[
        "analyze-point",
        "--input",
        missing.to_str().unwrap(),
        "--q",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "IoError");
}

#[test]
fn point_output_file_and_wrong_n() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", &diag_doc(&[1.0, 1.0], &[1.0, -1.0]));
    let report = dir.path().join("r.json");
    let out = crmorse(&[
        "analyze-point",
        "--input",
        &input,
        "--q",
        "0",
        "--n",
        "3",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["results"]["local_density"].as_f64().unwrap() > 0.0);
    let out = crmorse(&["analyze-point", "--input", &input, "--q", "0", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heisenberg_manifold_reports() {
    let out = crmorse(&[
        "analyze-manifold",
        "--spec",
        "heisenberg",
        "--lambda",
        "-1,1",
        "--mu",
        "1,1",
        "--q-all",
        "--k",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let coeff = &r["results"]["morse"]["per_q_weak_coeff"];
    assert!(coeff["0"].as_f64().unwrap() > 0.0);
    assert_eq!(coeff["1"], "excluded");
    let bound = &r["results"]["bound_at_k"];
    let ratio = bound["0"].as_f64().unwrap() / coeff["0"].as_f64().unwrap();
    assert!((ratio - 1e6).abs() < 1e-6);
    assert_eq!(bound["1"], "excluded");

    let out = crmorse(&[
        "analyze-manifold",
        "--spec",
        "heisenberg",
        "--lambda",
        "-1,1",
        "--mu",
        "-1,1",
        "--q-all",
    ]);
    let r = stdout_json(&out);
    for (q, v) in r["results"]["morse"]["per_q_integral"].as_object().unwrap() {
        if q != "1" {
            assert_eq!(v.as_f64(), Some(0.0), "q = {q}");
        }
    }
}

#[test]
fn grauert_manifold_has_refinement_and_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let out = crmorse(&[
        "analyze-manifold",
        "--spec",
        "grauert-tube",
        "--lambda",
        "-1,1",
        "--mu",
        "1,1",
        "--q-all",
        "--samples",
        "4096",
        "--mc-draws",
        "500",
        "--seed",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    let refinement = &r["results"]["refinement"];
    assert_eq!(refinement["fine_per_axis"], 8);
    assert_eq!(refinement["coarse_per_axis"], 4);
    assert!(refinement["per_q"]["0"]["relative_change"]
        .as_f64()
        .is_some());
    assert!(r["provenance"]["metric"].as_str().is_some());
    let mc = r["oracle_comparisons"].as_array().unwrap();
    assert!(!mc.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("id,dm_weight,coords,weighted_integral_q0"));
    assert_eq!(text.lines().count(), 4097);
}

#[test]
fn manifold_reports_repeat_exactly() {
    let args = [
        "analyze-manifold",
        "--spec",
        "grauert-tube",
        "--lambda",
        "-2,1",
        "--mu",
        "1,3",
        "--q-all",
        "--samples",
        "256",
    ];
    let strip = |o: Output| {
        let mut v = stdout_json(&o);
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v.to_string()
    };
    assert_eq!(strip(crmorse(&args)), strip(crmorse(&args)));
}

#[test]
fn mixed_signature_file_exits_4() {
    let dir = TempDir::new().unwrap();
    let mut spec = heisenberg_spec(&[-1, 1, 1], &[1, 1, 1], 2).unwrap();
    let other = heisenberg_spec(&[-1, -1, 1], &[1, 1, 1], 1).unwrap();
    spec.samples.push(other.samples[0].clone());
    let file = write(&dir, "m.json", &serde_json::to_string(&spec).unwrap());
    let out = crmorse(&[
        "analyze-manifold",
        "--spec",
        "file",
        "--file",
        &file,
        "--q-all",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"], "MixedSignature");
}

#[test]
fn spec_file_matches_generated() {
    let dir = TempDir::new().unwrap();
    let spec = heisenberg_spec(&[-1, 1], &[1, 2], 16).unwrap();
    let file = write(&dir, "h.json", &serde_json::to_string(&spec).unwrap());
    let a = stdout_json(&crmorse(&[
        "analyze-manifold",
        "--spec",
        "file",
        "--file",
        &file,
        "--q",
        "0,2",
    ]));
    let b = stdout_json(&crmorse(&[
        "analyze-manifold",
        "--spec",
        "heisenberg",
        "--lambda",
        "-1,1",
        "--mu",
        "1,2",
        "--samples",
        "16",
        "--q",
        "0,2",
    ]));
    assert_eq!(
        a["results"]["morse"]["per_q_integral"],
        b["results"]["morse"]["per_q_integral"]
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--suite", "nonsense"],
        vec![
            "analyze-manifold",
            "--spec",
            "heisenberg",
            "--lambda",
            "-1,1",
            "--mu",
            "1,1",
        ],
        vec![
            "analyze-manifold",
            "--spec",
            "heisenberg",
            "--lambda",
            "1,-1",
            "--mu",
            "1,1,1",
            "--q-all",
        ],
        vec![
            "analyze-manifold",
            "--spec",
            "grauert-tube",
            "--lambda",
            "1,-1",
            "--mu",
            "1,1",
            "--q-all",
        ],
    ] {
        let out = crmorse(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = crmorse(&["verify", "--suite", "nonsense"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("possible values"));
}

#[test]
fn bad_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_crmorse"))
        .env("CRMORSE_THREADS", "zero")
        .args(["verify", "--suite", "geometry"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_model_suite_passes() {
    let out = crmorse(&["verify", "--suite", "model", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("change of variables eta -> s"));
    assert!(text
        .lines()
        .any(|l| l.contains(" 100 ") && l.contains("PASS")));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_pencil_suite_passes() {
    let out = crmorse(&["verify", "--suite", "pencil", "--seed", "7"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn help_exits_0() {
    assert_eq!(crmorse(&["--help"]).status.code(), Some(0));
    assert!(Path::new(env!("CARGO_BIN_EXE_crmorse")).exists());
}
