use std::io::Write;
use std::process::{Command, Output, Stdio};

fn quadcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadcut"))
        .args(args)
        .env_remove("QUADCUT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

#[test]
fn doubling_is_sqrt_slope_composed_with_itself() {
    let o = quadcut(&[
        "decide",
        "--lang",
        "m",
        "A x. A y. ((0<x & 0<y) -> ((E z.(0<z & P2(x,z) & P2(z,y))) <-> y < 2*x))",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn cut_sup_is_irrational() {
    let o = quadcut(&["cut-sup", "P2(3/1, y)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("json");
    assert_eq!(v["sup"]["a"], "0");
    assert_eq!(v["sup"]["b"], "3");
    assert_eq!(v["rational"], false);
    assert_eq!(v["schema"], "quadcut.cut-sup.v1");
}

#[test]
fn rationals_are_not_open_in_the_pair() {
    let o = quadcut(&["open-core", "--lang", "pair", "P(x)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotOpen"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(quadcut(&["parse", "x <"]).status.code(), Some(1));
    assert_eq!(
        quadcut(&["--d", "4", "decide", "0 < 1"]).status.code(),
        Some(1)
    );
    assert_eq!(quadcut(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        quadcut(&["cut-sup", "--lang", "pair", "P(y)"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        quadcut(&["cut-sup", "y < 3 | 4 < y"]).status.code(),
        Some(2)
    );
    assert_eq!(
        quadcut(&["cells", "--dim-limit", "1", "x < y"])
            .status
            .code(),
        Some(2)
    );
    let o = quadcut(&[
        "qe",
        "--branch-limit",
        "2",
        "E y. ((x < y & y < 1) | (2 < y & y < x) | P2(x, y))",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("ResourceLimit"));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quadcut"))
        .args(["decide", "--lang", "pair", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .expect("stdin")
        .write_all(b"A x. A y. (x < y -> E z. (P(z) & x < z & z < y))")
        .expect("write");
    let o = child.wait_with_output().expect("finishes");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn json_carries_schema() {
    for args in [
        &["parse", "--format", "json", "x < 1"][..],
        &["qe", "--format", "json", "E y. x < y"],
        &["cells", "--format", "json", "0 < x & x < 1"],
        &["trace", "--format", "json", "E y. (P(y) & x < y)"],
        &["check-axioms", "--format", "json", "--samples", "5"],
    ] {
        let o = quadcut(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("json");
        assert!(
            v["schema"]
                .as_str()
                .is_some_and(|s| s.starts_with("quadcut.")),
            "{args:?}"
        );
    }
}

#[test]
fn seeded_output_is_reproducible() {
    let args = [
        "pair-check",
        "--seed",
        "7",
        "--samples",
        "10",
        "--format",
        "json",
    ];
    let a = quadcut(&args);
    let b = quadcut(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let seeded = Command::new(env!("CARGO_BIN_EXE_quadcut"))
        .args(["pair-check", "--samples", "10", "--format", "json"])
        .env("QUADCUT_SEED", "7")
        .output()
        .expect("binary runs");
    assert_eq!(seeded.stdout, a.stdout);
}

#[test]
fn cells_hull_and_fiber() {
    let set = "0 < x & x < y & P2(1, y)";
    let o = quadcut(&["cells", set]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = quadcut(&["fiber", "--cell", "0", "--at", "1/2", set]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[-x1 + 1/2 < 0] & [x1 - rt < 0]");
    assert_eq!(
        quadcut(&["hull", "--cell", "3", set]).status.code(),
        Some(1)
    );
}
