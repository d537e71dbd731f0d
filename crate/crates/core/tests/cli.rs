use std::io::Write;
use std::process::{Command, Output, Stdio};

use mckay_core::mckay::McKayReport;

fn mckay(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mckay"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn corpus(name: &str) -> String {
    let out = mckay(&["corpus", name], "");
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn betti_from_piped_corpus() {
    let out = mckay(&["betti"], &corpus("binary_dihedral(2)"));
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("{4: 1, 2: 4}"));
}

#[test]
fn group_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a3.json");
    std::fs::write(&path, corpus("cyclic(4)")).unwrap();
    let out = mckay(&["classes", "--group", path.to_str().unwrap()], "");
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(mckay(&["classes"], "{").status.code(), Some(2));
    assert_eq!(mckay(&["corpus", "nonsense"], "").status.code(), Some(2));
    let not_sl = r#"{"cyclotomic_order": 3, "dim": 2, "generators": [[[[[0, 1], [1, 1]], 0], [0, 1]]]}"#;
    let out = mckay(&["check"], not_sl);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let s4 = corpus("symmetric_pairs(4)");
    assert_eq!(mckay(&["--cap", "5", "classes"], &s4).status.code(), Some(4));
}

#[test]
fn valuation_command() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("f.txt");
    std::fs::write(&poly, "x1 * x2").unwrap();
    let spec = corpus("cyclic(3)");
    let mut values = vec![];
    for i in 0..3 {
        let out = mckay(&["valuation", "--element", &i.to_string(), "--poly", poly.to_str().unwrap()], &spec);
        assert!(out.status.success());
        values.push(stdout(&out).trim().parse::<i64>().unwrap());
    }
    values.sort();
    // x1 x2 is invariant: value 0 at the identity, r = 3 otherwise
    assert_eq!(values, vec![0, 3, 3]);
    let out = mckay(&["valuation", "--element", "7", "--poly", poly.to_str().unwrap()], &spec);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = mckay(&["report", "--json", path.to_str().unwrap()], &corpus("mu4_counterexample"));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("conjectural"));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: McKayReport = serde_json::from_str(&text).unwrap();
    assert!(report.group.sl && !report.group.symplectic);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
    let ramified = report.classes.iter().find(|c| c.order == 2).unwrap();
    assert_eq!(ramified.rg.as_ref().unwrap().rg, Some(4));
}
