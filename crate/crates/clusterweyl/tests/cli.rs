use clusterweyl::interface::cli::run;
use clusterweyl::quiver::WeightedQuiver;
use serde_json::Value;

fn p(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn build_mutate_export() {
    let dir = tempfile::tempdir().unwrap();
    let q = p(&dir, "q.json");
    assert_eq!(run(["cw", "build", "qm", "--type", "A", "--n", "2", "--m", "3", "--out", &q]), 0);
    let m = p(&dir, "m.json");
    assert_eq!(run(["cw", "mutate", "--in", &q, "--at", "v:1:2", "--at", "v:1:2", "--out", &m]), 0);
    assert_eq!(std::fs::read(&q).unwrap(), std::fs::read(&m).unwrap());
    let d = p(&dir, "q.dot");
    assert_eq!(run(["cw", "export", "--in", &q, "--dot", "--out", &d]), 0);
    assert!(std::fs::read_to_string(&d).unwrap().starts_with("digraph"));
}

#[test]
fn build_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["coxeter", "--type", "C", "--n", "3", "--orientation", "2:1,3:2"],
        vec!["word", "--type", "A", "--n", "3", "--word", "123121"],
        vec!["word", "--type", "A", "--n", "3", "--flavor", "iD"],
        vec!["tilde", "--type", "B", "--n", "3", "--k", "1"],
        vec!["d", "--type", "A", "--n", "3", "--cycle"],
    ];
    for (i, c) in cases.iter().enumerate() {
        let out = p(&dir, &format!("{i}.json"));
        let mut args = vec!["cw", "build"];
        args.extend(c.iter().copied());
        args.extend(["--out", &out]);
        assert_eq!(run(args), 0, "{c:?}");
        WeightedQuiver::from_json_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(["cw", "build", "qm", "--type", "A", "--n", "2", "--m", "1"]), 2);
    assert_eq!(run(["cw", "build", "qm", "--type", "Z", "--n", "2", "--m", "3"]), 2);
    assert_eq!(run(["cw", "frobnicate"]), 2);
    assert_eq!(run(["cw", "mutate", "--in", "/nonexistent/q.json", "--at", "v:1:1"]), 2);
    assert_eq!(run(["cw", "--help"]), 0);
}

#[test]
fn verify_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(&dir, "braid.json");
    assert_eq!(run(["cw", "verify", "braid", "--type", "C", "--n", "2", "--m", "2", "--out", &out]), 0);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(cert["check"], "braid");
    assert_eq!(run(["cw", "verify", "quiver", "--type", "A", "--n", "2", "--m", "1", "--out", &out]), 2);
}

#[test]
fn verify_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(&dir, "dt.json");
    // a reduced word that is not the longest element
    assert_eq!(run(["cw", "verify", "green-dt", "--type", "A", "--n", "2", "--m", "2", "--word", "12", "--out", &out]), 1);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "fail");
}

#[test]
fn run_named_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let q = p(&dir, "q.json");
    assert_eq!(run(["cw", "build", "qm", "--type", "C", "--n", "3", "--m", "3", "--out", &q]), 0);
    let out = p(&dir, "seed.json");
    assert_eq!(run(["cw", "run", "--in", &q, "--name", "R", "--params", r#"{"s":1,"i":1,"m":3}"#, "--track", "a,x", "--out", &out]), 0);
    let dump: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(dump.is_object());
    assert_eq!(run(["cw", "run", "--in", &q, "--seq", r#"[{"mut":"v:1:1"}]"#, "--out", &out]), 0);
}
