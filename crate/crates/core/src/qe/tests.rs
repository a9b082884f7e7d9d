use std::collections::BTreeMap;

use super::*;
use crate::arith::{Quad, Rat};
use crate::formula::{parse, Lang};

fn ctx() -> Context {
    Context::default()
}

fn p(s: &str) -> Formula {
    parse(s, Lang::Lstar).unwrap()
}

fn pl(s: &str) -> Formula {
    parse(s, Lang::L).unwrap()
}

fn m() -> StructureKind {
    StructureKind::M
}

fn v() -> StructureKind {
    StructureKind::Vstar
}

#[test]
fn dense_order_without_endpoints() {
    let r = qe_vstar(&p("E x. a < x & x < b"), &ctx()).unwrap();
    assert!(equiv(&r.formula, &p("a < b"), v(), &ctx()).unwrap());
    assert_eq!(r.formula.atom_count(), 1);
    assert_eq!(
        qe_vstar(&p("E x. a < x"), &ctx()).unwrap().formula,
        Formula::True
    );
}

#[test]
fn equality_substitution() {
    let r = qe_vstar(&p("E x. x = y + 1 & x < 0"), &ctx()).unwrap();
    assert!(equiv(&r.formula, &p("y + 1 < 0"), v(), &ctx()).unwrap());
}

#[test]
fn irrational_upper_bound() {
    let r = qe_vstar(&p("E x. a < x & x < rt"), &ctx()).unwrap();
    let s = Structure::vstar(&ctx().config);
    for k in 0..50 {
        let a = Rat::new(k - 25, 7).unwrap();
        let mut env = BTreeMap::new();
        env.insert("a".to_string(), Quad::rational(a.clone()));
        let want = Quad::rational(a).lt(&Quad::sqrt_d(), &ctx().config);
        assert_eq!(eval_qf(&r.formula, &s, &env).unwrap(), want);
    }
}

#[test]
fn qe_m_slope_example() {
    let r = qe_m(&pl("E x. P2(x, y) & x < 1"), &ctx()).unwrap();
    let Formula::Atom(Atom::Lin(a)) = &r.formula else {
        panic!("{}", r.formula)
    };
    assert_eq!(a.rel, Rel::Lt);
    assert_eq!(a.expr.coeff("y"), Some(&Quad::one()));
    assert_eq!(a.expr.constant, -Quad::sqrt_d());
    assert_eq!(to_surface(&r.formula, m()), pl("P2(1, y)"));
}

#[test]
fn qe_m_rationality_side_condition() {
    let f = p("E x. [x - rt*y = 0] & y > 0");
    assert_eq!(qe_m(&f, &ctx()).unwrap().formula, Formula::False);
    // over F the same formula only says y > 0
    assert!(equiv(
        &qe_vstar(&f, &ctx()).unwrap().formula,
        &p("0 < y"),
        v(),
        &ctx()
    )
    .unwrap());
}

#[test]
fn universal_order_reasoning() {
    let r = qe_m(&pl("A x. x < y -> x < z"), &ctx()).unwrap();
    assert!(equiv(&r.formula, &pl("~(z < y)"), m(), &ctx()).unwrap());
}

#[test]
fn surface_forms() {
    let mut e = crate::formula::LinExpr::var("u");
    e.add_term("v", &Quad::sqrt_d());
    let eq = Formula::eq0(e);
    assert_eq!(to_surface(&eq, m()), pl("u = 0 & v = 0"));
    assert_eq!(to_surface(&eq, v()), pl("~P2(-v, u) & ~P2(v, -u)"));
}

#[test]
fn decide_examples() {
    let axiom6 = "A x. A y. ((0<x & 0<y) -> ((E z.(0<z & P2(x,z) & P2(z,y))) <-> y < 2*x))";
    assert!(decide(&pl(axiom6), m(), &ctx()).unwrap());
    assert!(!decide(&pl("E x. x < x"), m(), &ctx()).unwrap());
    assert!(decide(
        &pl("A a. A b. (a < b -> E c. (a < c & c < b))"),
        m(),
        &ctx()
    )
    .unwrap());
    assert!(matches!(
        decide(&pl("x < 1"), m(), &ctx()),
        Err(Error::NotASentence(_))
    ));
}

#[test]
fn equiv_examples() {
    let f = pl("E y. x < y & P2(y, 1)");
    assert!(equiv(&f, &f, m(), &ctx()).unwrap());
    assert!(equiv(&p("x < rt"), &pl("P2(1, x)"), m(), &ctx()).unwrap());
    assert!(!equiv(&pl("x < 0"), &pl("x < 1"), m(), &ctx()).unwrap());
}

#[test]
fn m_and_vstar_differ_on_irrational_points() {
    // a rational x with x = rt does not exist, a real one does
    assert!(!decide(&p("E x. x = rt"), m(), &ctx()).unwrap());
    assert!(decide(&p("E x. x = rt"), v(), &ctx()).unwrap());
    // 2x = y has a solution for every y in both
    assert!(decide(&pl("A y. E x. 2*x = y"), m(), &ctx()).unwrap());
}

#[test]
fn branch_limit_is_enforced() {
    let small = Context::default()
        .with_limits(crate::context::Limits {
            branch_limit: 3,
            dim_limit: 3,
        })
        .unwrap();
    let f = pl("E x. (x < a | x < b) & (x > c | x > d) & (x < e | x = f)");
    assert!(matches!(qe_m(&f, &small), Err(Error::ResourceLimit { .. })));
}

#[test]
fn negation_flips_decisions() {
    for s in [
        "A x. E y. x < y & P2(1, y)",
        "E x. A y. x < y",
        "A x. (P2(x, 1) | P2(-x, -1))",
    ] {
        let f = pl(s);
        let a = decide(&f, m(), &ctx()).unwrap();
        let b = decide(&Formula::not(f), m(), &ctx()).unwrap();
        assert_ne!(a, b, "{s}");
    }
}
