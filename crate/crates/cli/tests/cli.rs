use std::process::{Command, Output};

fn peano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peano")).args(args).output().expect("run peano")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn models_dir() -> String {
    format!("{}/../core/models", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn reproduce_is_byte_identical() {
    let a = peano(&["reproduce", "--seed", "7"]);
    let b = peano(&["reproduce", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 11, "{text}");
}

#[test]
fn oracle_example() {
    let o = peano(&["oracle", "--n", "10", "--count", "500", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("500/500 agree\n"));
}

#[test]
fn principles_for_m1() {
    let o = peano(&["principles", "m1-omega-plus-omega", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["table"]["statuses"]["CI"]["verdict"], "Holds");
    assert_eq!(v["table"]["statuses"]["RI"]["verdict"], "Fails");
}

#[test]
fn dsl_file_matches_builtin_table() {
    let file = format!("{}/m6.model", models_dir());
    let parsed = peano(&["parse", &file]);
    assert_eq!(parsed.status.code(), Some(0), "{}", stdout(&parsed));
    let from_file = peano(&["principles", &file, "--format", "json"]);
    let builtin = peano(&["principles", "m6-braid", "--format", "json"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, builtin.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(peano(&["list"]).status.code(), Some(0));
    assert_eq!(peano(&["--help"]).status.code(), Some(0));
    assert_eq!(peano(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(peano(&["list", "--bogus-flag"]).status.code(), Some(1));
    assert_eq!(peano(&["principles", "m9"]).status.code(), Some(1));
    assert_eq!(peano(&["oracle", "--n", "17"]).status.code(), Some(1));
    assert_eq!(peano(&["axioms", "m5", "--regime", "pre", "--budget", "8"]).status.code(), Some(2));
    assert_eq!(peano(&["axioms", "m5"]).status.code(), Some(0));

    let dir = std::env::temp_dir().join(format!("peano-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.model");
    std::fs::write(&bad, "model x {\n  sort A(n: nat)\n}\n").unwrap();
    let o = peano(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero declaration required"));
    let inconsistent = dir.join("inconsistent.model");
    // Named like a builtin, so the builtin's evidence is checked against it.
    std::fs::write(&inconsistent, "model m2_omega_incomparable {\n  sort A(n: nat)\n  sort B(n: nat)\n  zero A(0)\n  succ A(n) -> A(n + 1)\n  succ B(n) -> B(n + 1)\n  less A(m) < A(n) iff m < n\n  less B(m) < B(n) iff m < n\n  less A(m) < B(n) iff true\n}\n").unwrap();
    assert_eq!(peano(&["principles", inconsistent.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_is_written_only_on_request() {
    let dir = std::env::temp_dir().join(format!("peano-dot-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pre.dot");
    let o = peano(&["implications", "--regime", "pre", "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph implications {"));
    assert!(dot.contains("CI -> SI [style=dashed]"));
    assert!(!stdout(&o).contains("digraph"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn list_json() {
    let o = peano(&["list", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["models"].as_array().unwrap().len(), 9);
}
