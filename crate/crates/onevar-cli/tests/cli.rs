//! End-to-end tests of the `onevar` binary: outputs and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onevar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn corpus(file: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../onevar/tests/data/checker").join(file).to_string_lossy().into_owned()
}

#[test]
fn translates_both_ways() {
    let o = run(&["translate", "--star", "forall x P0(x)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "[]p0\n"));
    let o = run(&["translate", "--circle", "[]p0 * <>p1"]);
    assert_eq!(stdout(&o), "forall x P0(x) * exists x P1(x)\n");
    assert_eq!(code(&run(&["translate", "--star", "--circle", "p0"])), 3);
    assert_eq!(code(&run(&["translate", "--star", "P0(y1) &"])), 3);
}

#[test]
fn emitted_proofs_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let p = proof.to_str().unwrap();
    let o = run(&["prove", "forall x P0(x) |- exists x P0(x)", "--calculus", "fle", "--emit", p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("proved forall x P0(x) |- exists x P0(x)\n"));
    let o = run(&["check", p, "--calculus", "fle"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["modalize", p]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("certificate []p0 |- <>p0\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["prove", "forall x (P0(x) -> forall x P1(x)) |- exists x P0(x) -> forall x P1(x)", "--format", "json"][..],
        &["alg", "hunt", "dia-mul", "--format", "json"],
        &["sem", "hunt", "exists x P0(x) * exists x P1(x) <= exists x (P0(x) * P1(x))"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn prove_exit_codes() {
    assert_eq!(code(&run(&["prove", "P0(x) |- P0(x) * P0(x)", "--calculus", "fle"])), 1);
    assert_eq!(code(&run(&["prove", "P0(x) |- P0(x) * P0(x)", "--calculus", "flec"])), 0);
    assert_eq!(code(&run(&["prove", "P0(x) |- P1(x)", "--budget", "0"])), 2);
    assert_eq!(code(&run(&["prove", "P0(x) |- P0(x)", "--calculus", "lk"])), 3);
    assert_eq!(code(&run(&["prove", "P0(x) P1(x)"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
}

#[test]
fn checker_reports_codes() {
    let o = run(&["check", &corpus("mutant-eigenvariable-right.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("E-EIGENVAR"));
    let o = run(&["check", &corpus("contraction.json"), "--calculus", "flec", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(code(&run(&["check", &corpus("contraction.json"), "--calculus", "fle"])), 1);
    assert_eq!(code(&run(&["check", "/nonexistent/proof.json"])), 3);
}

#[test]
fn interpolation_on_a_proof_file() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("p.json");
    let p = proof.to_str().unwrap();
    let d = serde_json::json!({
        "rule": "=>exists",
        "conclusion": "P0(y1) |- exists x P0(x)",
        "params": {"u": "y1"},
        "premises": [{"rule": "id", "conclusion": "P0(y1) |- P0(y1)"}]
    });
    fs::write(&proof, d.to_string()).unwrap();
    let o = run(&["interp", p, "--gamma", "0", "--y", "y1", "--z", "y2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "chi: e -> exists x P0(x)\nd1: P0(y1) |- e -> exists x P0(x)\nd2: e -> exists x P0(x) |- exists x P0(x)\n");
    let o = run(&["interp", p, "--gamma", "", "--y", "y1", "--z", "y2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("E-PARTITION"));
}

#[test]
fn algebra_commands() {
    let o = run(&["alg", "eval", "l3m.json", "<>v0 * <>v0 ~ <>(v0*v0)", "--all"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "countermodel v0=½: 1 vs 0\n"));
    let o = run(&["alg", "eval", "l3m", "[]v0 <= v0"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "holds on all 3 assignments in l3m\n"));
    assert_eq!(code(&run(&["alg", "eval", "godel3", "[]v0 <= v0"])), 3);
    let o = run(&["alg", "subalgebras", "l3m"]);
    assert_eq!(stdout(&o), "{0, 1}\n{0, ½, 1}\n");
    assert_eq!(code(&run(&["alg", "expand", "diamond", "--sub", "a"])), 1);
    let o = run(&["alg", "expand", "l3m", "--sub", "0,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["box"], serde_json::json!([0, 0, 2]));
    let o = run(&["alg", "power", "2-chain", "--w", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(code(&run(&["alg", "hunt", "L2-box"])), 0);
    assert_eq!(code(&run(&["alg", "hunt", "dia-mul", "--scope", "bogus"])), 3);
}

#[test]
fn validation_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let bad = serde_json::json!({
        "signature": [{"name": "and", "arity": 2}, {"name": "or", "arity": 2}],
        "size": 2,
        "tables": {"and": [[0, 0], [0, 1]], "or": [[0, 0], [0, 1]]}
    });
    fs::write(&file, bad.to_string()).unwrap();
    let o = run(&["alg", "validate", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(code(&run(&["alg", "validate", "l3m", "--profile", "M-FLE"])), 0);
    fs::write(&file, "{").unwrap();
    assert_eq!(code(&run(&["alg", "validate", file.to_str().unwrap()])), 3);
}

#[test]
fn structure_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("st.json");
    fs::write(&file, r#"{"algebra": "godel3", "S": 2, "I": {"P0": ["½", 2]}}"#).unwrap();
    let st = file.to_str().unwrap();
    let o = run(&["sem", "eval", st, "P0(x) -> forall x P0(x)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "[1, ½]\n"));
    assert_eq!(code(&run(&["sem", "eval", st, "P1(x)"])), 3);
    let o = run(&["sem", "hunt", "exists x P0(x) * exists x P1(x) <= exists x (P0(x) * P1(x))", "--maxS", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("lhs [1, 1] vs rhs [0, 0]"));
    let o = run(&["sem", "hunt", "forall x (P0(x) & P1(x)) ~ forall x P0(x) & forall x P1(x)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["sem", "hunt", "exists x P0(x) <= forall x P0(x)", "--assume", "P0(x) ~ e"])), 0);
}
