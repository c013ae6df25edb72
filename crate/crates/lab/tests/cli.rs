use std::{
    fs,
    path::{Path, PathBuf},
    process::{Command, Output},
};

use serde_json::Value;

fn mixedq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixedq")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn json_report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn rows(report: &Value) -> &Vec<Value> {
    report["rows"].as_array().unwrap()
}

#[test]
fn dqc1k_verify_emits_one_passing_row_per_trial() {
    let out = mixedq(&["dqc1k-verify", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_report(&out);
    let rows = rows(&report);
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r["check"] == "spectrum_flat" && r["passed"] == true));
    assert_eq!(report["summary"]["passes"], 50);
    assert_eq!(report["config"]["seed"], 7);
}

#[test]
fn cluster_scan_on_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "path4.json", r#"{"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3]]}"#);
    let out = mixedq(&["cluster-scan", "--input", g.to_str().unwrap(), "--betas", "0,0.5,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_report(&out);
    let rows = rows(&report);
    assert_eq!(rows.len(), 4);
    for (r, beta) in rows.iter().zip([0.0f64, 0.5, 1.0, 2.0]) {
        let expected = 4.0 * (1.0 + (-2.0 * beta).exp()).log2();
        assert!((r["value"].as_f64().unwrap() - expected).abs() < 1e-8);
        assert!((r["bound"].as_f64().unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn empty_planted_problem_is_not_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "planted.json", r#"{"n": 6, "solutions": []}"#);
    let out = mixedq(&["classical-solve", "--input", p.to_str().unwrap(), "--trials", "20", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "case,seed,check,inputs,value,bound,relation,tolerance,passed,t,found,attempts_used");
    assert_eq!(lines.len(), 1 + 20 + 1);
    for line in &lines[1..21] {
        // Not found: empty `found` column, all t attempts used.
        let cols: Vec<&str> = line.split(',').collect();
        let n = cols.len();
        assert_eq!(cols[n - 2], "");
        assert_eq!(cols[n - 1], cols[n - 3]);
    }
}

#[test]
fn planted_problem_is_solved() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "planted.json", r#"{"n": 8, "solutions": [3, 17, 200, 201, 64, 99, 100, 101]}"#);
    let out = mixedq(&["classical-solve", "--input", p.to_str().unwrap(), "--trials", "100", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_report(&out);
    let solutions = [3u64, 17, 200, 201, 64, 99, 100, 101];
    for r in rows(&report).iter().filter(|r| r.get("search").is_some()) {
        if let Some(found) = r["search"]["found"].as_u64() {
            assert!(solutions.contains(&found));
        }
    }
}

#[test]
fn violated_bound_exits_with_one() {
    // A negative slack turns every equality check into a violation.
    let out = mixedq(&["dqc1k-verify", "--trials", "3", "--tolerance", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_report(&out);
    assert_eq!(report["summary"]["failures"], 3);
    assert_eq!(report["config"]["tolerance"], -1.0);
}

#[test]
fn unsatisfiable_solution_bound_exits_with_one() {
    // |00> read out deterministically: success 1 against the bound 1 * 1 * 2^1.
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "mbqc.json",
        r#"{
  "state": {"qubits": 2, "re": [1,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0], "im": [0,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0]},
  "partition": {"total_qubits": 2, "output_qubits": [1]},
  "povm": [
    {"qubits": 1, "re": [1,0,0,0], "im": [0,0,0,0]},
    {"qubits": 1, "re": [0,0,0,1], "im": [0,0,0,0]}
  ],
  "solution_family": [[0], [0]]
}"#,
    );
    let ok = mixedq(&["mbqc-verify", "--input", inst.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let report = json_report(&ok);
    let r = &rows(&report)[0];
    assert_eq!(r["value"], 1.0);
    assert_eq!(r["bound"], 2.0);
    let bad = mixedq(&["mbqc-verify", "--input", inst.to_str().unwrap(), "--tolerance", "-1.5"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_with_two_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\n  \"vertices\": 3,\n  \"edges\": [[0, 1], [1]]\n}\n");
    let out = mixedq(&["cluster-scan", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("bad.json"), "{err}");
}

#[test]
fn schema_violations_exit_with_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"vertices": 3, "edges": [], "weights": []}"#);
    let out = mixedq(&["cluster-scan", "--input", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("weights"));

    let not_density = write(dir.path(), "m.json", r#"{"qubits": 1, "re": [2, 0, 0, 0], "im": [0, 0, 0, 0]}"#);
    let out = mixedq(&["entropy", "--input", not_density.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("density matrix"));
}

#[test]
fn missing_file_and_bad_flags_exit_with_two() {
    assert_eq!(mixedq(&["entropy", "--input", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(mixedq(&["entropy", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(mixedq(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mixedq(&["thermal", "--betas", "1,-2"]).status.code(), Some(2));
    assert_eq!(mixedq(&["full-suite", "--input", "x.json"]).status.code(), Some(2));
}

#[test]
fn qubit_cap_rejects_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3]]}"#);
    let out = mixedq(&["cluster-scan", "--input", g.to_str().unwrap(), "--qubit-cap", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_file_command_accepts_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let h = 0.5f64.sqrt();
    let hadamard = format!(r#"{{"qubits": 1, "re": [{h}, {h}, {h}, {}], "im": [0, 0, 0, 0]}}"#, -h);
    let identity = r#"{"qubits": 1, "re": [1, 0, 0, 1], "im": [0, 0, 0, 0]}"#;
    let mixed = r#"{"qubits": 1, "re": [0.75, 0, 0, 0.25], "im": [0, 0, 0, 0]}"#;
    let cases = [
        ("entropy", mixed.to_string()),
        ("thermal", r#"{"qubits": 2, "terms": [{"coeff": -1, "paulis": "XZ"}, {"coeff": -1, "paulis": "ZX"}]}"#.into()),
        ("dqc1k-run", r#"{"n": 2, "k": 2, "gates": [{"name": "H", "qubits": [0]}, {"name": "CRZ", "qubits": [0, 2], "params": [0.7]}]}"#.into()),
        ("dqc1k-verify", r#"{"n": 1, "k": 2, "unitary": {"qubits": 2, "re": [1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1], "im": [0,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0]}}"#.into()),
        ("mutual-info", format!(r#"{{"probs": [0.5, 0.5], "unitaries": [{identity}, {hadamard}], "bob_state": {mixed}}}"#)),
    ];
    for (command, text) in cases {
        let path = write(dir.path(), &format!("{command}.json"), &text);
        let out = mixedq(&[command, "--input", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{command}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!rows(&json_report(&out)).is_empty());
    }
}

#[test]
fn dqc1k_run_reports_the_outcome_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"n": 1, "k": 1, "gates": [{"name": "H", "qubits": [0]}, {"name": "CZ", "qubits": [0, 1]}, {"name": "H", "qubits": [0]}]}"#,
    );
    let out = mixedq(&["dqc1k-run", "--input", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_report(&out);
    let dist = &rows(&report)[0]["detail"];
    assert!((dist["0"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!((dist["1"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn reruns_are_byte_identical_and_ignore_the_output_path() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for p in [&a, &b] {
            let out = mixedq(&[
                "mutual-info",
                "--trials",
                "20",
                "--seed",
                "11",
                "--format",
                format,
                "--out",
                p.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
            assert!(out.stdout.is_empty());
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}

#[test]
fn unwritable_output_names_the_path() {
    let out = mixedq(&["entropy", "--trials", "1", "--out", "/no/such/dir/report.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("/no/such/dir/report.json"));
}
