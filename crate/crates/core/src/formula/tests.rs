use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::arith::{Config, Quad};
use crate::error::Error;

fn p(s: &str) -> Formula {
    parse(s, Lang::LP).unwrap()
}

fn env(pairs: &[(&str, &str)]) -> BTreeMap<Var, Quad> {
    pairs
        .iter()
        .map(|(v, x)| (v.to_string(), x.parse().unwrap()))
        .collect()
}

#[test]
fn parses_conjunction_in_l() {
    let f = parse("P2(x,y) & x < 1", Lang::L).unwrap();
    let Formula::And(parts) = &f else {
        panic!("{f:?}")
    };
    assert!(matches!(parts[0], Formula::Atom(Atom::Psq(..))));
    assert!(matches!(parts[1], Formula::Atom(Atom::Lt(..))));
}

#[test]
fn sentence_has_no_free_vars() {
    let f = parse("E x. P2(1/1, x)", Lang::L).unwrap();
    assert!(f.free_vars().is_empty());
}

#[test]
fn p_outside_pair_language() {
    assert!(matches!(parse("P(x)", Lang::L), Err(Error::IllFormed(_))));
    assert!(matches!(
        parse("P(x)", Lang::Lstar),
        Err(Error::IllFormed(_))
    ));
    assert!(parse("P(x)", Lang::LP).is_ok());
}

#[test]
fn irrational_constants_only_outside_l() {
    assert!(matches!(parse("x < rt", Lang::L), Err(Error::IllFormed(_))));
    assert!(parse("x < rt", Lang::Lstar).is_ok());
    assert!(matches!(
        parse("rt*x < 1", Lang::L),
        Err(Error::IllFormed(_))
    ));
    assert!(matches!(
        parse("[rt*x < 1]", Lang::Lstar).unwrap(),
        Formula::Atom(Atom::Lin(_))
    ));
}

#[test]
fn syntax_errors_have_positions() {
    match parse("x < < 1", Lang::L) {
        Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse("x * y < 1", Lang::L),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        parse("(x < 1", Lang::L),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        parse("E . x < 1", Lang::L),
        Err(Error::Syntax { .. })
    ));
    assert!(matches!(
        parse("x < 1/0", Lang::L),
        Err(Error::Syntax { .. })
    ));
}

#[test]
fn precedence_and_grouping() {
    let f = p("a < 0 | b < 0 & c < 0 -> d < 0 <-> e < 0");
    let Formula::Iff(lhs, _) = &f else { panic!() };
    let Formula::Implies(l, _) = &**lhs else {
        panic!()
    };
    assert!(matches!(&**l, Formula::Or(v) if v.len() == 2));
    let g = p("(a < 0 & b < 0) & c < 0");
    assert!(matches!(&g, Formula::And(v) if v.len() == 2));
    let h = p("~E x. x < y & y < 0");
    let Formula::Not(q) = &h else { panic!() };
    assert!(matches!(&**q, Formula::Exists(_, b) if matches!(**b, Formula::And(_))));
    let k = p("(x + 1) < y");
    assert!(matches!(k, Formula::Atom(Atom::Lt(..))));
    let gt = p("x > 2");
    assert_eq!(gt, p("2 < x"));
}

#[test]
fn round_trip_examples() {
    let cases = [
        "A x. A y. ((0<x & 0<y) -> ((E z.(0<z & P2(x,z) & P2(z,y))) <-> y < 2*x))",
        "~(E x. x < y) | P(y - rt)",
        "[(1/2 + rt)*x - 3*rt*y + 1 < 0] & [x = 0]",
        "a < 0 -> b < 0 -> c < 0",
        "(a < 0 -> b < 0) -> c < 0",
        "(a < 0 <-> b < 0) <-> c < 0",
        "a < 0 <-> (b < 0 <-> c < 0)",
        "~~x = 0",
        "-x + 1/3*y - 2 <= -rt",
        "E x, y. x < y",
        "true & ~false",
    ];
    for c in cases {
        let f = p(c);
        let printed = f.to_string();
        let g = p(&printed);
        assert_eq!(f, g, "{c} -> {printed}");
        assert_eq!(printed, g.to_string());
    }
}

#[test]
fn normalize_psq() {
    let cfg = Config::default();
    let f = normalize(&p("P2(x, y)"), &cfg);
    let mut e = LinExpr::var("y");
    e.add_term("x", &"-rt".parse().unwrap());
    // canonical form scales the leading (x) coefficient to magnitude 1
    let Formula::Atom(Atom::Lin(a)) = &f else {
        panic!("{f}")
    };
    assert_eq!(a.rel, Rel::Lt);
    let want = LinAtom::lt(e).canonical(&cfg);
    assert_eq!(Canon::Atom(a.clone()), want);
}

#[test]
fn normalize_sugar_and_involution() {
    let cfg = Config::default();
    let f = normalize(&p("t <= s"), &cfg);
    assert!(matches!(&f, Formula::Or(v) if v.len() == 2));
    let g = p("x < 1 & y = 2");
    assert_eq!(
        normalize(&Formula::not(Formula::not(g.clone())), &cfg),
        normalize(&g, &cfg)
    );
    let h = normalize(&p("~P(x) & P(1/2) & ~P(rt)"), &cfg);
    assert_eq!(h, Formula::not(Formula::pmem(Term::var("x"))));
}

#[test]
fn eval_examples() {
    let cfg = Config::default();
    let m = Structure::m(&cfg);
    let pair = Structure::pair(&cfg);
    assert!(eval_qf(&p("P2(x,y)"), &m, &env(&[("x", "1"), ("y", "1")])).unwrap());
    assert!(!eval_qf(&p("P(v)"), &pair, &env(&[("v", "rt")])).unwrap());
    assert!(matches!(
        eval_qf(&p("x < 1"), &m, &env(&[("x", "rt")])),
        Err(Error::SortViolation(_))
    ));
    assert!(matches!(
        eval_qf(&p("x < y"), &m, &env(&[("x", "1")])),
        Err(Error::UnboundVariable(_))
    ));
    assert!(matches!(
        eval_qf(&p("E x. x < 1"), &m, &env(&[])),
        Err(Error::NotQuantifierFree)
    ));
}

#[test]
fn substitution_examples() {
    let cfg = Config::default();
    let f = p("x < y & P2(x, 1)");
    let g = f.substitute_one("x", Term::rat(3.into()), &cfg);
    assert_eq!(
        g.free_vars().into_iter().collect::<Vec<_>>(),
        vec!["y".to_string()]
    );
    let bound = p("E x. x < 1");
    assert_eq!(bound.substitute_one("x", Term::rat(3.into()), &cfg), bound);
    let h = p("P2(y, z)").substitute_one("y", parse_term("x + 1").unwrap(), &cfg);
    assert_eq!(h, p("P2(x + 1, z)"));
}

#[test]
fn substitution_avoids_capture() {
    let cfg = Config::default();
    let f = p("E y. x < y");
    let g = f.substitute_one("x", Term::var("y"), &cfg);
    let Formula::Exists(v, body) = &g else {
        panic!()
    };
    assert_ne!(v, "y");
    assert!(g.free_vars().contains("y"));
    assert_eq!(**body, p(&format!("y < {v}")));
}

fn arb_term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    (
        proptest::collection::vec((0..vars.len(), -3i64..=3), 0..3),
        -4i64..=4,
        -2i64..=2,
    )
        .prop_map(move |(monos, a, b)| {
            let mut t = Term::constant(Quad::new(a.into(), b.into()));
            for (i, c) in monos {
                t.add_var(vars[i], &c.into());
            }
            t
        })
}

fn arb_qf() -> impl Strategy<Value = Formula> {
    const VARS: &[&str] = &["x", "y", "z"];
    let atom = prop_oneof![
        (arb_term(VARS), arb_term(VARS)).prop_map(|(s, t)| Formula::lt(s, t)),
        (arb_term(VARS), arb_term(VARS)).prop_map(|(s, t)| Formula::eq(s, t)),
        (arb_term(VARS), arb_term(VARS)).prop_map(|(s, t)| Formula::atom(Atom::Le(s, t))),
        (arb_term(VARS), arb_term(VARS)).prop_map(|(s, t)| Formula::psq(s, t)),
        arb_term(VARS).prop_map(Formula::pmem),
    ];
    atom.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn arb_env() -> impl Strategy<Value = BTreeMap<Var, Quad>> {
    proptest::collection::vec((-6i64..=6, 1i64..=3, -2i64..=2), 3).prop_map(|xs| {
        ["x", "y", "z"]
            .iter()
            .zip(xs)
            .map(|(v, (n, den, b))| {
                (
                    v.to_string(),
                    Quad::new(crate::arith::Rat::new(n, den).unwrap(), b.into()),
                )
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_preserves_truth(f in arb_qf(), e in arb_env()) {
        let cfg = Config::default();
        let s = Structure::pair(&cfg);
        let n = normalize(&f, &cfg);
        prop_assert_eq!(eval_qf(&f, &s, &e).unwrap(), eval_qf(&n, &s, &e).unwrap());
    }

    #[test]
    fn normalize_is_idempotent(f in arb_qf()) {
        let cfg = Config::default();
        let n = normalize(&f, &cfg);
        prop_assert_eq!(normalize(&n, &cfg), n);
    }

    #[test]
    fn print_parse_round_trip(f in arb_qf()) {
        let printed = f.to_string();
        let g = parse(&printed, Lang::LP).unwrap();
        prop_assert_eq!(g.to_string(), printed);
        let cfg = Config::default();
        let n = normalize(&f, &cfg);
        let reparsed = parse(&n.to_string(), Lang::LP).unwrap();
        prop_assert_eq!(reparsed, n);
    }
}
