use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mostar"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn compute_json_and_csv() {
    let out = run(&["compute"], "Ch\nE???\n");
    // The second line is an edgeless graph on six vertices.
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let first: serde_json::Value = serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
    assert_eq!(first["graph6"], "Ch");
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));

    let out = run(&["compute", "--format", "csv"], "Bw\n");
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "graph6,edge_mostar,u,v,mu,mv,eq,psi");
    assert_eq!(stdout.lines().count(), 1 + 3);
}

#[test]
fn parse_errors_and_bad_flags() {
    assert_eq!(run(&["compute"], "!!\n").status.code(), Some(2));
    assert_eq!(run(&["verify-theorem1", "--range", "x"], "").status.code(), Some(2));
    assert_eq!(run(&["verify-theorem1", "--size", "13"], "").status.code(), Some(2));
    assert_eq!(run(&["verify-theorem2", "--range", "3..6"], "").status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], "").status.code(), Some(2));
}

#[test]
fn theorem_runs_write_reports_and_sidecars() {
    let dir = std::env::temp_dir().join(format!("mostar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sidecar = dir.join("max.g6");
    let out = run(
        &[
            "verify-theorem1",
            "--range",
            "7..9",
            "--threads",
            "2",
            "--maximizers",
            sidecar.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["rows"][0]["observed_max"], 12);
    assert_eq!(report["rows"][2]["status"], "PASS");
    let lines = std::fs::read_to_string(&sidecar).unwrap();
    assert_eq!(lines.lines().count(), 2 + 3 + 8);
    let recomputed = run(&["compute"], &lines);
    assert_eq!(recomputed.status.code(), Some(0));

    let out = run(&["verify-theorem2", "--size", "9"], "");
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["rows"][0]["observed_maximizer_count"], 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn atlas_reports_partial_resolution() {
    let dir = std::env::temp_dir().join(format!("mostar-atlas-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("families.json");
    let out = run(&["atlas", "--output", path.to_str().unwrap(), "--threads", "2"], "");
    assert_eq!(out.status.code(), Some(3));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.trim_end(), include_str!("../data/families.json").trim_end());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["discovery"]["unresolved"][0], "H4");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lemma_report_is_deterministic() {
    let a = run(&["lemmas", "--probes", "20", "--seed", "7"], "");
    let b = run(&["lemmas", "--probes", "20", "--seed", "7"], "");
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["summaries"].as_array().unwrap().len(), 20);
    let code = a.status.code().unwrap();
    let discrepant = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["status"] == "DISCREPANT");
    assert_eq!(code, if discrepant { 1 } else { 0 });
}
