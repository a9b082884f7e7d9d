//! Seeded checks of the theory of the tight pair in `(V, Q)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{decide_pair, interpret, trace};
use crate::arith::{Quad, Rat};
use crate::context::Context;
use crate::cuts1d::{cut_sup, decompose1};
use crate::error::{Error, Result};
use crate::formula::{eval_qf, parse, Formula, Lang, Structure, StructureKind};
use crate::report::{Check, Report};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=12)).expect("positive denominator")
}

fn random_quad(rng: &mut ChaCha8Rng) -> Quad {
    Quad::new(random_rat(rng), random_rat(rng))
}

fn sentence(check: &mut Check, text: &str, lang: Lang, ctx: &Context) {
    let outcome = parse(text, lang).and_then(|f| decide_pair(&f, ctx));
    check.record(
        outcome == Ok(true),
        || json!({ "sentence": text, "outcome": format!("{outcome:?}") }),
    );
}

fn axiom1(ctx: &Context) -> Check {
    let mut c = Check::new(
        "1",
        "P is a model of T and the whole structure a model of T*",
    );
    for s in [
        "A x, y, z. (x < y & y < z) -> x < z",
        "A x, y. x < y -> E z. (x < z & z < y)",
        "A x, y, z. x < y -> x + z < y + z",
        "A x. E y. 2*y = x",
        "A x1, y1, x2, y2. (P2(x1, y1) & P2(x2, y2)) -> P2(x1 + x2, y1 + y2)",
        "A x. ~x = 0 -> ~E s. ((A y. P2(x, y) -> y <= s) & A t. (A y. P2(x, y) -> y <= t) -> s <= t)",
    ] {
        let f = parse(s, Lang::L).expect("well formed").relativize_to_p(&[]);
        let outcome = decide_pair(&f, ctx);
        c.record(outcome == Ok(true), || json!({ "sentence": f.to_string(), "outcome": format!("{outcome:?}") }));
    }
    for s in [
        "A x, y, z. (x < y & y < z) -> x < z",
        "A x, y. x < y | x = y | y < x",
        "A x. 0 < x -> x < rt*x",
        "A x. E y. rt*y = x",
        "A x, y. P2(x, y) <-> y < rt*x",
        "A x, y. x < y -> E z. (x < z & z < y)",
    ] {
        sentence(&mut c, s, Lang::LP, ctx);
    }
    c
}

fn axiom2(ctx: &Context) -> Check {
    let mut c = Check::new("2", "P is dense");
    sentence(
        &mut c,
        "A a, b. a < b -> E p. (P(p) & a < p & p < b)",
        Lang::LP,
        ctx,
    );
    sentence(&mut c, "A v. E p. (P(p) & p < v)", Lang::LP, ctx);
    sentence(&mut c, "E v. (~P(v) & 0 < v & v < 1)", Lang::LP, ctx);
    c
}

/// A random cut of `M` in `y`, with its text.
fn random_cut(rng: &mut ChaCha8Rng) -> String {
    let (a, b, c) = (random_rat(rng), random_rat(rng), random_rat(rng));
    match rng.gen_range(0..3) {
        0 => format!("P2({a}, y - ({b}))"),
        1 => format!("y < {c}"),
        _ => format!("P2({a}, y - ({b})) & y < {c}"),
    }
}

fn axiom3(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new("3", "definable cuts of P have a supremum");
    sentence(
        &mut c,
        "A x, z. (P(x) & P(z)) -> E s. A y. P(y) -> (P2(x, y - z) <-> y < s)",
        Lang::LP,
        ctx,
    );
    let mut rng = rng_for(seed, 3);
    for _ in 0..samples {
        let cut = random_cut(&mut rng);
        let f = parse(&cut, Lang::L).expect("well formed");
        let sup = cut_sup(&f, ctx);
        let Ok(sup) = sup else {
            c.record(
                false,
                || json!({ "cut": cut, "cut_sup": format!("{sup:?}") }),
            );
            continue;
        };
        let s = &sup.sup;
        let named = format!("A y. P(y) -> (({cut}) <-> y < {s})");
        sentence(&mut c, &named, Lang::LP, ctx);
        sentence(
            &mut c,
            &format!("E s. A y. P(y) -> (({cut}) <-> y < s)"),
            Lang::LP,
            ctx,
        );
    }
    c
}

fn axiom4(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new("4", "every element realizes a definable cut of P");
    sentence(
        &mut c,
        "A v. E x1, x2. (P(x1) & P(x2) & A y. P(y) -> (y < v <-> P2(x2, y - x1)))",
        Lang::LP,
        ctx,
    );
    let mut rng = rng_for(seed, 4);
    for _ in 0..samples {
        let v = random_quad(&mut rng);
        let (a, b) = (&v.a, &v.b);
        sentence(
            &mut c,
            &format!("A y. P(y) -> (y < {v} <-> P2({b}, y - ({a})))"),
            Lang::LP,
            ctx,
        );
    }
    c
}

/// The infimum in `F` of a nonempty set of one variable that is bounded
/// below, found from the trace of its set of strict lower bounds.
pub fn infimum(f: &Formula, ctx: &Context) -> Result<Quad> {
    let vars: Vec<_> = f.free_vars().into_iter().collect();
    let [v] = vars.as_slice() else {
        return Err(Error::IllFormed(format!(
            "expected one free variable, found {}",
            vars.len()
        )));
    };
    let mut avoid = f.all_vars();
    avoid.insert("y".into());
    let y = crate::formula::fresh_name("y", &avoid);
    let below = Formula::forall(
        v,
        Formula::implies(
            f.clone(),
            Formula::lt(crate::formula::Term::var(&y), crate::formula::Term::var(v)),
        ),
    );
    let dec = decompose1(&trace(&below, ctx)?, StructureKind::M, ctx)?;
    match dec.pieces.as_slice() {
        [] => Err(Error::UnboundedCut),
        [p] if p.lo.finite().is_none() => p.hi.finite().cloned().ok_or(Error::EmptyCut),
        _ => Err(Error::NotDownwardClosed),
    }
}

fn random_bounded(rng: &mut ChaCha8Rng) -> String {
    let c = random_quad(rng);
    let lower = if rng.gen_bool(0.5) {
        format!("{c} < v")
    } else {
        format!("{c} <= v")
    };
    let top = &c + &Quad::rational(Rat::from(rng.gen_range(1i64..=5)));
    let extra = match rng.gen_range(0..5) {
        0 => "P(v)".to_string(),
        1 => "~P(v)".to_string(),
        2 => format!("v < {top}"),
        3 => "E p. (P(p) & p < v)".to_string(),
        _ => "true".to_string(),
    };
    format!("{lower} & {extra}")
}

fn completeness(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new("dc", "bounded below definable sets have an infimum");
    sentence(
        &mut c,
        "A c. E s. (A v. (c < v & P(v)) -> s <= v) & A t. s < t -> E v. (c < v & P(v) & v < t)",
        Lang::LP,
        ctx,
    );
    let mut rng = rng_for(seed, 6);
    let mut sets = vec!["v > rt".to_string()];
    sets.extend((0..samples).map(|_| random_bounded(&mut rng)));
    for set in sets {
        let f = parse(&set, Lang::LP).expect("well formed");
        let inf = infimum(&f, ctx);
        let Ok(s) = inf else {
            c.record(
                false,
                || json!({ "set": set, "infimum": format!("{inf:?}") }),
            );
            continue;
        };
        sentence(&mut c, &format!("A v. ({set}) -> {s} <= v"), Lang::LP, ctx);
        sentence(
            &mut c,
            &format!("A t. {s} < t -> E v. ({set}) & v < t"),
            Lang::LP,
            ctx,
        );
    }
    c
}

fn translation(ctx: &Context, seed: u64, samples: usize) -> Check {
    let mut c = Check::new("psq", "the interpretation of P2 agrees in sign");
    let cfg = &ctx.config;
    let f = parse("P2(v, w)", Lang::LP).expect("well formed");
    let cf = interpret(&f, cfg).expect("interpretable");
    let (pair, m) = (Structure::pair(cfg), Structure::m(cfg));
    let mut rng = rng_for(seed, 7);
    for _ in 0..samples.max(1) {
        let env = [("v", random_quad(&mut rng)), ("w", random_quad(&mut rng))]
            .into_iter()
            .map(|(k, x)| (k.to_string(), x))
            .collect();
        let direct = eval_qf(&f, &pair, &env);
        let coords = cf.encode(&env).and_then(|e| eval_qf(&cf.formula, &m, &e));
        c.record(
            direct.is_ok() && direct == coords,
            || json!({ "v": env["v"].to_string(), "w": env["w"].to_string() }),
        );
    }
    c
}

/// Checks the axioms (1)-(4) of the tight pair theory, definable
/// completeness and the interpretation of `P2`, deciding every sentence.
pub fn axioms_pair_check(seed: u64, samples: usize, ctx: &Context) -> Report {
    let checks = vec![
        axiom1(ctx),
        axiom2(ctx),
        axiom3(ctx, seed, samples),
        axiom4(ctx, seed, samples),
        completeness(ctx, seed, samples),
        translation(ctx, seed, samples),
    ];
    Report::new(
        "quadcut.pair_axioms.v1",
        "T^d",
        ctx.config.d(),
        seed,
        samples,
        checks,
    )
}
