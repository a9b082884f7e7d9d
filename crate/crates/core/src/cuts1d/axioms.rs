//! Seeded instance checks of the axioms of T in the standard model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{cut_sup, straddle};
use crate::arith::cf::convergents;
use crate::arith::{Quad, Rat};
use crate::context::Context;
use crate::formula::{eval_qf, parse, Lang, Structure, StructureKind};
use crate::qe::decide;
use crate::report::{Check, Report};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=12)).expect("positive denominator")
}

fn sentence(check: &mut Check, text: &str, ctx: &Context) {
    let outcome = parse(text, Lang::L).and_then(|f| decide(&f, StructureKind::M, ctx));
    check.record(
        outcome == Ok(true),
        || json!({ "sentence": text, "outcome": format!("{outcome:?}") }),
    );
}

fn holds(text: &str, ctx: &Context) -> bool {
    let s = Structure::m(&ctx.config);
    parse(text, Lang::L)
        .and_then(|f| eval_qf(&f, &s, &Default::default()))
        .unwrap_or(false)
}

fn axiom1(ctx: &Context) -> Check {
    let mut c = Check::new("1", "ordered Q-vector space axioms");
    for s in [
        "0 < 1",
        "A x. ~(x < x)",
        "A x, y, z. (x < y & y < z) -> x < z",
        "A x, y. x < y | x = y | y < x",
        "A x, y, z. x < y -> x + z < y + z",
        "A x. 0 < x -> 0 < 1/3*x",
        "A x. 0 < x -> -x < 0",
        "A x, y. 2*(x + y) = 2*x + 2*y",
        "A x. 1/3*(3*x) = x",
        "A x. E y. 2*y = x",
        "A x. (E y. x < y) & (E z. z < x)",
        "A x, y. x < y -> E z. (x < z & z < y)",
    ] {
        sentence(&mut c, s, ctx);
    }
    c
}

fn axiom2(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new("2", "P2 is closed under addition");
    sentence(
        &mut c,
        "A x1, y1, x2, y2. (P2(x1, y1) & P2(x2, y2)) -> P2(x1 + x2, y1 + y2)",
        ctx,
    );
    let mut rng = rng_for(seed, 2);
    for _ in 0..samples {
        let [x1, y1, x2, y2] = [0; 4].map(|_| random_rat(&mut rng));
        let text = format!("(P2({x1}, {y1}) & P2({x2}, {y2})) -> P2({x1} + {x2}, {y1} + {y2})");
        c.record(holds(&text, ctx), || json!({ "x1": x1.to_string(), "y1": y1.to_string(), "x2": x2.to_string(), "y2": y2.to_string() }));
    }
    c
}

fn axiom3(ctx: &Context) -> Check {
    let mut c = Check::new("3", "P2 picks the positive square root");
    sentence(&mut c, "E x, y. P2(x, y) & x > 0 & y > 0", ctx);
    c.record(
        holds("P2(1, 1) & 1 > 0", ctx),
        || json!({ "witness": ["1", "1"] }),
    );
    c
}

fn axiom4(ctx: &Context) -> Check {
    let mut c = Check::new("4", "rational slopes below and above sqrt(d)");
    let cfg = &ctx.config;
    let cs = convergents(&Quad::sqrt_d(), cfg, 20);
    let (mut below, mut above) = (0, 0);
    for r in cs {
        let is_below = Quad::rational(r.clone()).lt(&Quad::sqrt_d(), cfg);
        if is_below && below < 10 {
            below += 1;
            sentence(&mut c, &format!("A x. x > 0 -> P2(x, {r}*x)"), ctx);
        } else if !is_below && above < 10 {
            above += 1;
            sentence(&mut c, &format!("A x. x > 0 -> ~P2(x, {r}*x)"), ctx);
        }
    }
    c
}

fn axiom5(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new(
        "5",
        "cuts {y : P2(x, y)} are open, without supremum, with gaps tending to 0",
    );
    let ub = |v: &str| format!("(A y. P2(x, y) -> y <= {v})");
    sentence(
        &mut c,
        "A x. ~x = 0 -> A y, z. ((P2(x, y) & z < y) -> P2(x, z))",
        ctx,
    );
    sentence(
        &mut c,
        &format!(
            "A x. ~x = 0 -> ~E s. ({} & A t. ({} -> s <= t))",
            ub("s"),
            ub("t")
        ),
        ctx,
    );
    sentence(
        &mut c,
        "A x. ~x = 0 -> A e. e > 0 -> E y1, y2. (P2(x, y1) & ~P2(x, y2) & y2 - y1 < e)",
        ctx,
    );
    let mut rng = rng_for(seed, 5);
    let epsilons = [
        Rat::one(),
        Rat::new(1, 10).expect("ok"),
        Rat::new(1, 1000).expect("ok"),
    ];
    for _ in 0..samples {
        let mut x = random_rat(&mut rng);
        if x.is_zero() {
            x = Rat::one();
        }
        let text = format!("P2({x}, y)");
        let f = parse(&text, Lang::L).expect("well formed");
        let sup = cut_sup(&f, ctx);
        let ok = matches!(&sup, Ok(s) if !s.rational);
        c.record(
            ok,
            || json!({ "x": x.to_string(), "cut_sup": format!("{sup:?}") }),
        );
        let Ok(sup) = sup else { continue };
        for eps in &epsilons {
            let (q1, q2) = straddle(&sup.sup, eps, &ctx.config);
            let inside = holds(&format!("P2({x}, {q1})"), ctx);
            let outside = !holds(&format!("P2({x}, {q2})"), ctx);
            let gap = &q2 - &q1;
            c.record(inside && outside && &gap < eps, || {
                json!({ "x": x.to_string(), "eps": eps.to_string(), "q1": q1.to_string(), "q2": q2.to_string() })
            });
        }
    }
    c
}

fn axiom6(ctx: &Context) -> Check {
    let mut c = Check::new("6", "composing x -> sqrt(d)x with itself gives x -> dx");
    let d = ctx.config.d();
    sentence(
        &mut c,
        &format!(
            "A x. A y. ((0 < x & 0 < y) -> ((E z. (0 < z & P2(x, z) & P2(z, y))) <-> y < {d}*x))"
        ),
        ctx,
    );
    c
}

/// Checks axioms (1)-(6) of T in the standard model: the universally
/// quantified forms are decided, and random instances are evaluated.
/// Axiom (7), the quantifier-free theory, holds in the standard model by
/// construction and is not listed.
pub fn check_axioms(seed: u64, samples: usize, ctx: &Context) -> Report {
    let checks = vec![
        axiom1(ctx),
        axiom2(ctx, seed, samples),
        axiom3(ctx),
        axiom4(ctx),
        axiom5(ctx, seed, samples),
        axiom6(ctx),
    ];
    Report::new(
        "quadcut.axioms.v1",
        "T",
        ctx.config.d(),
        seed,
        samples,
        checks,
    )
}
