use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use nonloose_core::certify::{self, Side, TensionQuery};
use nonloose_core::calculus::ClassicalPair;
use nonloose_core::surgery::dual_diagram;

fn nonloose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonloose"))
        .args(args)
        .env("XDG_CONFIG_HOME", "/nonexistent")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = nonloose(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn unknot_front() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "unknot.front", "l 1 ; r 1\n");
    assert_eq!(json_ok(&["front-invariants", &f]), json!({"tb": -1, "rot": 0}));
}

#[test]
fn trefoil_front_and_stabilization() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "t.front", "l 1 ; l 3 ; x 2 ; x 2 ; x 2 ; r 3 ; r 1");
    assert_eq!(json_ok(&["front-invariants", &f]), json!({"tb": 1, "rot": 0}));

    let s = json_ok(&["front-stabilize", &f, "--sign", "-", "--count", "2"]);
    assert_eq!((s["tb"].as_i64(), s["rot"].as_i64()), (Some(-1), Some(-2)));

    let g = write(&dir, "s.front", s["word"].as_str().unwrap());
    let d = json_ok(&["front-destab", &g]);
    assert_eq!(d["found"], json!(true));
    assert_eq!((d["tb"].as_i64(), d["rot"].as_i64()), (Some(0), Some(-1)));

    assert_eq!(json_ok(&["front-destab", &f]), json!({"found": false}));
}

#[test]
fn front_from_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_nonloose"))
        .args(["front-invariants", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"l 1 ; r 1").unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tb"], json!(-1));
}

#[test]
fn dual_invariants_example() {
    let v = json_ok(&["dual-invariants", "--tb", "-15", "--rot", "-2", "--chi", "-7", "--stab", "+1"]);
    assert_eq!(v["tb_q"], json!("1/14"));
    assert_eq!(v["rot_q"], json!("8/7"));
    assert_eq!(v["r"], json!(14));
}

#[test]
fn surgery_file_matches_dual_invariants() {
    let dir = TempDir::new().unwrap();
    let diagram = dual_diagram(-15, -2, 1, 0);
    let f = write(&dir, "d.json", &serde_json::to_string(&diagram.to_file()).unwrap());
    let from_file = json_ok(&["surgery-invariants", &f, "--chi", "-7"]);
    let closed = json_ok(&["dual-invariants", "--tb", "-15", "--rot", "-2", "--chi", "-7", "--pos", "1"]);
    assert_eq!(from_file, closed);

    let rev = json_ok(&["surgery-invariants", &f, "--chi", "-7", "--reverse"]);
    assert_eq!(rev["rot_q"], json!("-8/7"));
}

#[test]
fn surgery_file_rejects_bad_coefficient() {
    let dir = TempDir::new().unwrap();
    let body = r#"{"components":[{"id":"k","tb":-2,"rot":1,"coeff":"+2"}],"lk":[],"distinguished":"k"}"#;
    let f = write(&dir, "bad.json", body);
    let out = nonloose(&["surgery-invariants", &f]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("surgery"));
}

#[test]
fn search_examples_certifies_tension_below_depth() {
    let v = json_ok(&["search-examples", "--p-max", "5"]);
    let certs = v.as_array().unwrap();
    assert!(!certs.is_empty());
    let knots: Vec<(i64, i64)> = certs
        .iter()
        .map(|c| (c["witness"]["knot"]["p"].as_i64().unwrap(), c["witness"]["knot"]["q"].as_i64().unwrap()))
        .collect();
    assert!(knots.contains(&(-5, 2)) && knots.contains(&(-5, 3)), "{knots:?}");
    for c in certs {
        assert_eq!(c["verdict"]["kind"], json!("tension_below_depth"));
        assert_eq!(c["bounds"]["t"], json!(1));
        assert_eq!(c["bounds"]["d"], json!(">=2"));
    }
}

#[test]
fn certify_dual_from_torus_record() {
    let v = json_ok(&["certify-dual", "--torus", "-5", "3"]);
    assert_eq!(v["tension"]["bounds"]["t"], json!(1));
    assert_eq!(v["depth"]["bounds"]["d"], json!(">=2"));
    assert_eq!(v["combined"]["verdict"]["kind"], json!("tension_below_depth"));

    let manual = json_ok(&["certify-dual", "--tb", "-2", "--rot", "1", "--chi", "-1"]);
    assert_eq!(manual["tension"]["verdict"]["kind"], json!("inconclusive"));
    assert_eq!(manual["depth"], Value::Null);
}

#[test]
fn tension_matches_library() {
    let v = json_ok(&["certify-tension", "--tb", "1", "--rot", "0", "--chi", "-1", "--side", "positive"]);
    let p = ClassicalPair::new(1, 0).with_chi(-1).unwrap();
    let lib = certify::tension_certificate(&TensionQuery::Classical(p), 64, Side::Positive).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());

    let l23 = json_ok(&["certify-tension", "--tb", "3", "--rot", "0", "--chi", "-1", "--max-n", "10"]);
    assert_eq!(l23["witness"], json!({"a": 3, "b": 0, "bound": 3}));
}

#[test]
fn rational_and_transverse_bennequin() {
    let v = json_ok(&["certify-bennequin", "--tb", "1/14", "--rot", "8/7", "--r", "14", "--chi", "-7"]);
    assert_eq!(v["verdict"]["kind"], json!("loose_certified"));
    let t = json_ok(&["certify-bennequin", "--sl", "-3/2", "--chi", "-1", "--r", "2"]);
    assert_eq!(t["subject"], json!("transverse"));
}

#[test]
fn unknot_classification() {
    assert_eq!(json_ok(&["certify-unknot", "--tb", "0", "--rot", "1"])["verdict"]["kind"], json!("loose_certified"));
    assert_eq!(json_ok(&["certify-unknot", "--tb", "3", "--rot", "2"])["verdict"]["kind"], json!("no_obstruction"));
}

#[test]
fn records_file_and_lookups() {
    let dir = TempDir::new().unwrap();
    let mut rec = serde_json::to_value(nonloose_core::knotdata::torus_record(-5, 3).unwrap()).unwrap();
    rec["name"] = json!("mine");
    let f = write(&dir, "records.json", &json!([rec]).to_string());
    let v = json_ok(&["--records", &f, "knot-record", "--name", "mine"]);
    assert_eq!(v["max_tb"], rec["max_tb"]);
    let d = json_ok(&["--records", &f, "certify-dual", "--record", "mine"]);
    assert_eq!(d["combined"]["verdict"]["kind"], json!("tension_below_depth"));

    assert_eq!(json_ok(&["knot-record", "--unknot"])["max_tb"], json!(-1));
    assert!(json_ok(&["knot-record", "--unknot-table", "3"]).as_array().unwrap().len() > 1);
    assert_eq!(json_ok(&["knot-record", "--example", "LOSS(2)"])["chi"], json!(-1));
}

#[test]
fn records_from_config_dir() {
    let dir = TempDir::new().unwrap();
    fs::create_dir(dir.path().join("nonloose")).unwrap();
    let mut rec = serde_json::to_value(nonloose_core::knotdata::unknot_record()).unwrap();
    rec["name"] = json!("u");
    fs::write(Path::new(&dir.path().join("nonloose/records.json")), json!([rec]).to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nonloose"))
        .args(["knot-record", "--name", "u"])
        .env("XDG_CONFIG_HOME", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    let missing = nonloose(&["front-invariants", "/no/such/file"]);
    assert_eq!(missing.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&missing.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("io"));

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "two.front", "l 1 ; l 2 ; x 2 ; x 2 ; x 2 ; r 2 ; r 1");
    let two = nonloose(&["front-invariants", &f]);
    assert_eq!(two.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&two.stdout).unwrap();
    assert_eq!(v["error"]["kind"], json!("front"));

    assert_eq!(nonloose(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(nonloose(&["dual-invariants", "--tb", "x"]).status.code(), Some(2));
    assert_eq!(nonloose(&["certify-tension", "--tb", "2", "--rot", "0"]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["search-examples", "--p-max", "7"];
    assert_eq!(nonloose(&args).stdout, nonloose(&args).stdout);
}

#[test]
fn text_format() {
    let out = nonloose(&["--format", "text", "dual-invariants", "--tb", "-15", "--rot", "-2", "--pos", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tb_q: 1/14"), "{text}");
}
