use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lieconf::construct::{self, Rank1Case};
use lieconf::io::save_structure;
use lieconf::Structure;
use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_lieconf");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn save(dir: &TempDir, name: &str, s: &Structure) -> PathBuf {
    let p = dir.path().join(name);
    save_structure(s, &p).unwrap();
    p
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const CUR_G: &str = r#"{
  "kind": "LieSuper",
  "rank": 1,
  "generators": [{"name": "e1", "parity": "even"}, {"name": "e2", "parity": "even"}],
  "tables": {"bracket": [{"left": "e1", "right": "e2", "value": "e2"}, {"left": "e2", "right": "e1", "value": "-e2"}]}
}"#;

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let vir = save(&dir, "virasoro.json", &construct::virasoro(1).unwrap());
    let vir = vir.to_str().unwrap();

    let out = run(dir.path(), &["check", vir, "--suite", "lie-conformal"]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["command"], "check");
    assert!(rep["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert!(rep.get("timing_ms").is_none());

    let out = run(dir.path(), &["check", vir, "--suite", "novikov-poisson"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["status"], "error");

    let broken = write(
        &dir,
        "broken.json",
        r#"{"kind": "LieConformal", "rank": 1, "generators": [{"name": "L", "parity": "even"}],
            "tables": {"bracket": [{"left": "L", "right": "L", "value": "(T1 + l1)*L"}]}}"#,
    );
    let out = run(dir.path(), &["check", broken.to_str().unwrap(), "--suite", "skew"]);
    assert_eq!(code(&out), 1);
    let rep = json(&out);
    assert_eq!(rep["status"], "fail");
    assert!(!rep["findings"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = save(&dir, "ham.json", &construct::hamiltonian(2).unwrap());
    let p = p.to_str().unwrap();
    for format in ["json", "text"] {
        let a = run(dir.path(), &["check", p, "--format", format]);
        let b = run(dir.path(), &["check", p, "--format", format]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
    let timed = run(dir.path(), &["check", p, "--timing"]);
    assert!(json(&timed).get("timing_ms").is_some());
}

#[test]
fn bad_files_exit_two() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{\n  \"kind\": \"LieConformal\",\n  \"rank\": 1,,\n}");
    let out = run(dir.path(), &["check", p.to_str().unwrap(), "--format", "text"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("line 3"));
    let out = run(dir.path(), &["check", "missing.json"]);
    assert_eq!(code(&out), 2);
    let out = run(dir.path(), &["check"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bracket_command() {
    let dir = TempDir::new().unwrap();
    let vir = save(&dir, "virasoro.json", &construct::virasoro(1).unwrap());
    let out = run(
        dir.path(),
        &["bracket", vir.to_str().unwrap(), "--left", "L", "--m", "2", "--right", "L", "--n", "3"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"][0], "-1*L[4]");

    let lie = write(&dir, "g.json", CUR_G);
    let cur = dir.path().join("cur_g.json");
    let out = run(
        dir.path(),
        &["build", "--construction", "current", lie.to_str().unwrap(), "-o", cur.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = run(
        dir.path(),
        &["bracket", cur.to_str().unwrap(), "--left", "e1", "--m", "0", "--right", "e2", "--n", "0", "--format", "text"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\n  1*e2[0]\n"), "{}", stdout(&out));

    let out = run(
        dir.path(),
        &["bracket", vir.to_str().unwrap(), "--left", "L", "--m", "1,2", "--right", "L", "--n", "0"],
    );
    assert_eq!(code(&out), 2);
    let out = run(
        dir.path(),
        &["bracket", vir.to_str().unwrap(), "--left", "L", "--m", "x", "--right", "L", "--n", "0"],
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn build_commands() {
    let dir = TempDir::new().unwrap();
    let va = save(&dir, "v_a.json", &construct::rank1_novikov(Rank1Case::Va).unwrap());
    let gd_va = save(&dir, "gd_va.json", &construct::novikov_gd_pair(&construct::rank1_novikov(Rank1Case::Va).unwrap(), false).unwrap());

    // stdout build is the structure itself
    let out = run(dir.path(), &["build", "--construction", "extend-ilinear", "--i", "2", gd_va.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let file = json(&out);
    assert_eq!(file["ilinear"], 2);
    assert_eq!(file["tables"]["bracket"][0]["value"], "(T1*l2 - T2*l1 + T2*a + 2*l2*a + T1 + 2*l1)*x");

    let lie = dir.path().join("lie.json");
    let out = run(
        dir.path(),
        &["build", "--construction", "novikov-to-lie", va.to_str().unwrap(), "-o", lie.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &["check", lie.to_str().unwrap(), "--suite", "lie-conformal"]);
    assert_eq!(code(&out), 0);

    let pair = dir.path().join("pair.json");
    let out = run(
        dir.path(),
        &["build", "--construction", "novikov-to-lie", "--pair", va.to_str().unwrap(), "-o", pair.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&pair).unwrap(), std::fs::read(&gd_va).unwrap());

    let ham = save(&dir, "hamiltonian2.json", &construct::hamiltonian(2).unwrap());
    let out = run(dir.path(), &["build", "--construction", "decompose-ilinear", "--i", "2", ham.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["kind"], "GDConformal");

    for args in [
        vec!["build", "--construction", "virasoro", "--r", "2"],
        vec!["build", "--construction", "hamiltonian", "--r", "4"],
        vec!["build", "--construction", "rank1", "--case", "assoc"],
        vec!["build", "--construction", "convert-chirality", va.to_str().unwrap()],
    ] {
        let out = run(dir.path(), &args);
        assert_eq!(code(&out), 0, "{args:?}");
    }
}

#[test]
fn failed_preconditions_exit_one_without_writing() {
    let dir = TempDir::new().unwrap();
    let ex1 = save(&dir, "ex1.json", &construct::ex1_super_novikov().unwrap());
    let target = dir.path().join("out.json");
    let out = run(
        dir.path(),
        &["build", "--construction", "novikov-to-lie", ex1.to_str().unwrap(), "-o", target.to_str().unwrap()],
    );
    assert_eq!(code(&out), 1);
    let rep = json(&out);
    assert_eq!(rep["status"], "fail");
    assert_eq!(rep["suites"][0], "novikov-left");
    assert!(!target.exists());

    let out = run(
        dir.path(),
        &["build", "--construction", "novikov-to-lie", "--force", ex1.to_str().unwrap(), "-o", target.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    assert!(target.exists());

    let out = run(dir.path(), &["build", "--construction", "extend-ilinear", ex1.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "missing --i and wrong kind");
    let out = run(dir.path(), &["build", "--construction", "novikov-to-lie"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn loop_command() {
    let dir = TempDir::new().unwrap();
    let gd_va = save(&dir, "gd_va.json", &construct::novikov_gd_pair(&construct::rank1_novikov(Rank1Case::Va).unwrap(), false).unwrap());
    let out = run(dir.path(), &["loop", gd_va.to_str().unwrap(), "--window", "-4..4", "--suite", "gd-bialgebra"]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    assert_eq!(rep["status"], "pass");
    assert!(rep["skipped"].as_u64().unwrap() > 0);
    assert!(rep.get("result").is_none());

    let vir = save(&dir, "vir.json", &construct::virasoro(1).unwrap());
    let out = run(dir.path(), &["loop", vir.to_str().unwrap(), "--window", "0..1", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("  L\t0\tL\t1\t-1*L[0]\n"));
    let out = run(dir.path(), &["loop", vir.to_str().unwrap(), "--window", "0-1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn constraints_and_families() {
    let dir = TempDir::new().unwrap();
    let unknown = save(&dir, "unknown.json", &construct::gd2dim_unknown().unwrap());
    let out = run(
        dir.path(),
        &["constraints", unknown.to_str().unwrap(), "--unknown", "circ", "--suite", "gd-compat", "--format", "text"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result:\n  c111 - c212\n  c121 + c211\n  c211 - c222\n  c221\n"));

    let fam = save(&dir, "family.json", &construct::gd2dim_family().unwrap());
    let out = run(dir.path(), &["constraints", fam.to_str().unwrap(), "--unknown", "circ", "--suite", "novikov-super"]);
    assert_eq!(code(&out), 0);
    let rep = json(&out);
    let list: Vec<&str> = rep["result"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(list.contains(&"b*d") && list.contains(&"c*d"), "{list:?}");

    let zero = write(
        &dir,
        "zero.json",
        r#"{"kind": "GDBialgebra", "rank": 1, "generators": [{"name": "e1", "parity": "even"}], "parameters": ["c"], "tables": {}}"#,
    );
    let out = run(dir.path(), &["constraints", zero.to_str().unwrap(), "--unknown", "circ", "--suite", "gd-compat"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out).get("result").is_none());

    let lie = write(&dir, "g.json", CUR_G);
    let out = run(dir.path(), &["constraints", lie.to_str().unwrap(), "--unknown", "bracket", "--suite", "gd-compat"]);
    assert_eq!(code(&out), 2);

    let f = fam.to_str().unwrap();
    let base = ["verify-family", f, "--unknown", "circ", "--suite", "novikov-super"];
    let out = run(dir.path(), &[&base[..], &["--case", "d=0:d=0"]].concat());
    assert_eq!(code(&out), 0);
    let out = run(dir.path(), &[&base[..], &["--case", "d=0:d=0", "--case", "b=c=0:b=0,c=0"]].concat());
    assert_eq!(code(&out), 1);
    let rep = json(&out);
    assert_eq!(rep["result"][1], "b=c=0: fail");
    assert_eq!(rep["findings"][0]["tuple"][0], "b=c=0");
    let out = run(dir.path(), &[&base[..], &["--case", "q=0:q=0"]].concat());
    assert_eq!(code(&out), 2);
}

#[test]
fn out_and_quiet() {
    let dir = TempDir::new().unwrap();
    let vir = save(&dir, "vir.json", &construct::virasoro(2).unwrap());
    let rep = dir.path().join("report.json");
    let out = run(dir.path(), &["check", vir.to_str().unwrap(), "--out", rep.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let saved: Value = serde_json::from_slice(&std::fs::read(&rep).unwrap()).unwrap();
    assert_eq!(saved["status"], "pass");
    let out = run(dir.path(), &["check", vir.to_str().unwrap(), "--suite", "skew", "-q"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}
