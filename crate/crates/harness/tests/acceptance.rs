//! One line per acceptance criterion, written past the test harness's
//! output capture so they show in a plain `cargo test` run.

use std::io::Write;

use quadcut::Context;
use quadcut_harness::run_all;

#[test]
fn acceptance() {
    let ctx = Context::default();
    let seed = std::env::var("QUADCUT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let mut out = std::io::stdout();
    let outcomes = run_all(&ctx, seed, |o| {
        let _ = writeln!(out, "{}", o.line());
        for f in &o.failures {
            let _ = writeln!(out, "      {f}");
        }
    });
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
