//! The `phl` binary end to end: exit codes, formats and the golden facts of
//! the bundled scenarios.

use std::io::Write;
use std::process::{Command, Output};

fn phl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scenario_file(text: &str) -> tempfile_lite::File {
    tempfile_lite::File::with(text)
}

/// A scratch file removed on drop.
mod tempfile_lite {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    static NEXT: AtomicUsize = AtomicUsize::new(0);

    pub struct File(pub std::path::PathBuf);

    impl File {
        pub fn with(text: &str) -> File {
            let n = NEXT.fetch_add(1, Ordering::SeqCst);
            let path = std::env::temp_dir().join(format!("phl-cli-test-{}-{n}.phl", std::process::id()));
            std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
            File(path)
        }
        pub fn path(&self) -> &str {
            self.0.to_str().unwrap()
        }
    }

    impl Drop for File {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.0);
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(phl(&["validate", "E1-F2"]).status.code(), Some(0));
    assert_eq!(phl(&["milnor", "E2"]).status.code(), Some(3));
    assert_eq!(phl(&["derived", "E2"]).status.code(), Some(3));
    assert_eq!(phl(&["counterexample"]).status.code(), Some(0));
    assert_eq!(phl(&["frobnicate", "E2"]).status.code(), Some(1));
    assert_eq!(phl(&["milnor"]).status.code(), Some(1));
    assert_eq!(phl(&["milnor", "/no/such/file.phl"]).status.code(), Some(1));
    assert_eq!(phl(&["milnor", "E1-F2", "--dim-bound", "x"]).status.code(), Some(1));
    assert_eq!(phl(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let f = scenario_file("field Q\nalgebra A {\n  basis 1\n  unit [1 2]\n}\n");
    let o = phl(&["validate", f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("4:8:"), "{}", stderr(&o));
    // (a a) b = b b = 0 but a (a b) = a a = b
    let f = scenario_file(
        "field Q\nalgebra B {\n  basis 1 a b\n  unit [1 0 0]\n  product 1 1 1 1\n  product 1 a a 1\n  product a 1 a 1\n  product 1 b b 1\n  product b 1 b 1\n  product a a b 1\n  product a b a 1\n}\n",
    );
    let o = phl(&["validate", f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("2:9:") && stderr(&o).contains("associativity"), "{}", stderr(&o));
}

#[test]
fn exhausted_budgets_fail_and_missing_diagrams_are_input_errors() {
    let text = cli_source("E1-F2").replace("check milnor dim-bound=6", "check milnor dim-bound=6 ceiling=2");
    let f = scenario_file(&text);
    let o = phl(&["milnor", f.path()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("failed: search budget exhausted"));
    let f = scenario_file("field Q\nalgebra k {\n  basis 1\n  unit [1]\n  product 1 1 1 1\n}\n");
    assert_eq!(phl(&["validate", f.path()]).status.code(), Some(0));
    assert_eq!(phl(&["pullback", f.path()]).status.code(), Some(1));
}

fn cli_source(name: &str) -> String {
    phl::cli::bundled::source(name).unwrap().to_string()
}

#[test]
fn golden_facts_of_the_bundled_scenarios() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["pullback", "E1-Q"], &["dim R1, R2, R': 2, 1, 1", "rank [pi1, -pi2]: 1", "dim R: 2", "pi1 surjective: yes"]),
        (&["pullback", "E2"], &["dim R1, R2, R': 1, 1, 2", "dim R: 1", "pi1 surjective: no"]),
        (&["pullback", "E3"], &["dim R: 2", "radical of R: dim 0"]),
        (&["gamma", "E1-Q"], &["dim R'*: 1", "dim Gamma: 4", "dim Gamma': 7", "dim T: 5"]),
        (&["tilting", "E1-F101"], &["dim End(T)^op: 7", "dim R + 2 dim R1 + dim ker pi1: 7", "dim Ext^1(T, T): 0", "pd T <= 1: yes"]),
        (&["milnor", "E1-F2", "--dim-bound", "4"], &["projective classes: 3", "gluing triple classes: 3", "bijection: yes", "gluing maps: enumerated"]),
        (&["milnor", "E3", "--dim-bound", "2"], &["projective classes: 6", "gluing triple classes: 6"]),
        (&["counterexample", "E2"], &["twist by 1 + t: gluing: yes, dim Pb = 0", "counit invertible: no"]),
    ];
    for (args, facts) in cases {
        let o = phl(args);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{out}");
        for f in *facts {
            assert!(out.contains(f), "{args:?}: missing `{f}` in\n{out}");
        }
    }
}

#[test]
fn json_matches_text() {
    let o = phl(&["milnor", "E1-F2", "--format", "json", "--dim-bound", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["status"], "pass");
    let facts = v["sections"][0]["facts"].as_array().unwrap();
    assert!(facts.iter().any(|f| f["key"] == "bijection" && f["value"] == "yes"));
    assert!(v["sections"][0].get("witnesses").is_none());
    let o = phl(&["milnor", "E1-F2", "--format", "json", "--dim-bound", "4", "--verbose"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sections"][0]["witnesses"][1]["matrix"], "[1]");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [&["selftest"][..], &["derived", "E1-Q", "--seed", "9", "--samples", "2", "--recheck"][..]] {
        let a = phl(args);
        let b = phl(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn recheck_is_reported() {
    let o = phl(&["derived", "E3", "--recheck", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("note: certificates rechecked"));
    let o = phl(&["milnor", "E1-Q", "--recheck", "--dim-bound", "2"]);
    assert!(stdout(&o).contains("note: preimage certificates rechecked"));
}
