//! Runs selected criteria: `cargo run --release --example criterion -- 2 7`.
//! The seed comes from `QUADCUT_SEED` (default 1).

use quadcut::Context;
use quadcut_harness::CRITERIA;

fn main() {
    let ctx = Context::default();
    let seed = std::env::var("QUADCUT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    for a in std::env::args().skip(1) {
        let i: usize = a.parse().expect("criterion number");
        let o = CRITERIA[i - 1](&ctx, seed);
        println!("{}", o.line());
        for f in &o.failures {
            println!("      {f}");
        }
    }
}
