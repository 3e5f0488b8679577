use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sgflow::corpus::{g_family, g_family_circular_witness, signed_petersen};
use sgflow::flowfile::format_flow_file;
use sgflow::solve::{find_nz_k_flow, find_nz_zk_flow};
use sgflow::SignedGraph;
use tempfile::TempDir;

const SIGNED_K4: &str = "p 4 6\ne 1 2 -\ne 1 3 +\ne 1 4 +\ne 2 3 +\ne 2 4 +\ne 3 4 -\n";

fn sgflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgflow"))
        .args(args)
        .env_remove("SG_RESOURCE_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let pet = write(dir.path(), "pet.graph", &signed_petersen().to_text());
    let r = stdout_json(&sgflow(&["analyze", s(&pet)]));
    assert_eq!(r["admissible"], true);
    assert_eq!(r["long_barbell"], Value::Null);
    assert_eq!(r["bridges"], serde_json::json!([]));
    assert_eq!(r["negative_edges"], 5);

    let lp = write(dir.path(), "loop.graph", "p 1 1\ne 1 1 -\n");
    let r = stdout_json(&sgflow(&["analyze", s(&lp)]));
    assert_eq!(r["admissible"], false);
    assert_eq!(r["admissibility_reason"], "exactly one negative edge after switching");

    let tree = write(dir.path(), "tree.graph", "p 3 2\ne 1 2 +\ne 2 3 +\n");
    let r = stdout_json(&sgflow(&["analyze", s(&tree)]));
    assert_eq!(r["admissible"], false);
    assert_eq!(r["bridges"], serde_json::json!([0, 1]));
}

#[test]
fn flow_certificates_verify_and_detect_tampering() {
    let dir = TempDir::new().unwrap();
    let pet = write(dir.path(), "pet.graph", &signed_petersen().to_text());
    let out = dir.path().join("out");

    let o = sgflow(&["flow", s(&pet), "--k", "5"]);
    assert_eq!(code(&o), 0);
    let c = stdout_json(&o);
    assert_eq!(c["claim"]["kind"], "nonexistence");
    assert_eq!(c["verdict"]["holds"], true);

    let o = sgflow(&["--out", s(&out), "flow", s(&pet), "--k", "6"]);
    assert_eq!(code(&o), 0);
    let cert = out.join("flow.json");
    let index: Value = serde_json::from_str(&std::fs::read_to_string(out.join("index.json")).unwrap()).unwrap();
    assert_eq!(index["artifacts"][0]["path"], "flow.json");
    assert_eq!(code(&sgflow(&["check", s(&cert)])), 0);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["claim"]["witness"]["values"][0] = Value::from("7");
    let bad = write(dir.path(), "bad.json", &v.to_string());
    assert_eq!(code(&sgflow(&["check", s(&bad)])), 5);
}

#[test]
fn circular_flow_of_g1() {
    let dir = TempDir::new().unwrap();
    let g1 = write(dir.path(), "g1.graph", &g_family(1).unwrap().to_text());
    let c = stdout_json(&sgflow(&["flow", s(&g1), "--circular"]));
    assert_eq!(c["claim"]["kind"], "circular-flow-number");
    assert_eq!(c["claim"]["value"], "3");
}

#[test]
fn convert_and_its_preconditions() {
    let dir = TempDir::new().unwrap();
    let g = SignedGraph::parse(SIGNED_K4).unwrap();
    let gp = write(dir.path(), "k4.graph", SIGNED_K4);
    let z = find_nz_zk_flow(&g, 5).unwrap().unwrap();
    let fp = write(dir.path(), "z5.flow", &format_flow_file(&g, &z).unwrap());
    let o = sgflow(&["convert", s(&gp), s(&fp), "--k", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = stdout_json(&o);
    assert_eq!(c["claim"]["kind"], "conversion");
    assert_eq!(c["verdict"]["holds"], true);

    assert_eq!(code(&sgflow(&["convert", s(&gp), s(&fp), "--k", "4"])), 2);

    // G1 has a long barbell
    let g1 = g_family(1).unwrap();
    let g1p = write(dir.path(), "g1.graph", &g1.to_text());
    let z = find_nz_zk_flow(&g1, 5).unwrap().unwrap();
    let fp = write(dir.path(), "g1.flow", &format_flow_file(&g1, &z).unwrap());
    assert_eq!(code(&sgflow(&["convert", s(&g1p), s(&fp), "--k", "5"])), 2);
}

#[test]
fn decompositions() {
    let dir = TempDir::new().unwrap();
    let g = signed_petersen();
    let gp = write(dir.path(), "pet.graph", &g.to_text());
    let f = find_nz_k_flow(&g, 6).unwrap().unwrap();
    let fp = write(dir.path(), "six.flow", &format_flow_file(&g, &f).unwrap());
    let o = sgflow(&["decompose", s(&gp), s(&fp), "--k", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let c = stdout_json(&o);
    assert_eq!(c["claim"]["parts"].as_array().unwrap().len(), 5);

    let loops = write(dir.path(), "loops.graph", "p 1 2\ne 1 1 -\ne 1 1 -\n");
    let c = stdout_json(&sgflow(&["decompose", s(&loops), "--eulerian"]));
    assert_eq!(c["claim"]["members"][0]["kind"], "short-barbell");
    assert_eq!(code(&sgflow(&["decompose", s(&gp), "--eulerian"])), 2);
}

#[test]
fn normalize_g1_keeps_loops() {
    let dir = TempDir::new().unwrap();
    let g = g_family(1).unwrap();
    let gp = write(dir.path(), "g1.graph", &g.to_text());
    let w = g_family_circular_witness(1).unwrap();
    let fp = write(dir.path(), "w.flow", &format_flow_file(&g, &w).unwrap());
    let c = stdout_json(&sgflow(&["normalize", s(&gp), s(&fp), "--p", "2", "--q", "1"]));
    assert_eq!(c["claim"]["off_grid"], serde_json::json!([0, 1]));
    assert_eq!(c["verdict"]["holds"], true);
}

#[test]
fn generate_is_deterministic() {
    let a = sgflow(&["--seed", "7", "generate", "random", "--v", "5", "--e", "7"]);
    let b = sgflow(&["--seed", "7", "generate", "random", "--v", "5", "--e", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c");
    assert_eq!(code(&sgflow(&["--out", s(&out), "generate", "enumerate", "--max-v", "1", "--max-e", "1"])), 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["count"], 2);
    assert_eq!(m["spec"]["family"], "enumerate");
}

#[test]
fn verify_summary_is_independent_of_threads() {
    let args = |t: &'static str| ["verify", "two-flow-sum", "--max-v", "3", "--max-e", "5", "--threads", t];
    let one = sgflow(&args("1"));
    let two = sgflow(&args("2"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(stdout_json(&one)["failures"], serde_json::json!([]));
    assert_eq!(code(&sgflow(&["verify", "no-such-suite"])), 2);
}

#[test]
fn exit_codes_for_caps_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    let pet = write(dir.path(), "pet.graph", &signed_petersen().to_text());
    let o = Command::new(env!("CARGO_BIN_EXE_sgflow"))
        .args(["flow", s(&pet), "--k", "5"])
        .env("SG_RESOURCE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);

    let bad = write(dir.path(), "bad.graph", "p 2 1\ne 1 3 +\n");
    let o = sgflow(&["analyze", s(&bad)]);
    assert_eq!(code(&o), 5);
    assert_eq!(code(&sgflow(&["analyze", "/nonexistent/file"])), 5);
}
