use super::*;
use crate::formula::{parse, Lang};

fn ctx() -> Context {
    Context::default()
}

fn q(s: &str) -> Quad {
    s.parse().unwrap()
}

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn pl(s: &str) -> Formula {
    parse(s, Lang::L).unwrap()
}

#[test]
fn bounded_slope_piece() {
    let d = decompose1(&pl("P2(1, x) & 0 < x"), StructureKind::M, &ctx()).unwrap();
    assert_eq!(d.pieces.len(), 1);
    let p = &d.pieces[0];
    assert_eq!(p.lo, Endpoint::at(q("0")));
    assert_eq!(p.hi, Endpoint::at(q("rt")));
    assert!(p.lo_open && p.hi_open);
    assert!(!p.hi.in_m);
}

#[test]
fn merge_across_irrational_point() {
    let f = pl("P2(1, x) | ~P2(1, x) & ~x = 0 | x = 0");
    let g = pl("P2(1, x) | P2(-1, -x)");
    for f in [f, g] {
        let dm = decompose1(&f, StructureKind::M, &ctx()).unwrap();
        assert_eq!(dm.pieces.len(), 1, "{f}");
        assert_eq!(dm.pieces[0].lo.value, EndValue::NegInf);
        assert_eq!(dm.pieces[0].hi.value, EndValue::PosInf);
    }
    let dv = decompose1(&pl("P2(1, x) | P2(-1, -x)"), StructureKind::Vstar, &ctx()).unwrap();
    assert_eq!(dv.pieces.len(), 2);
    assert_eq!(dv.pieces[0].hi, Endpoint::at(q("rt")));
    assert_eq!(dv.pieces[1].lo, Endpoint::at(q("rt")));
}

#[test]
fn points_and_closed_ends() {
    let d = decompose1(
        &pl("x = 1 | (2 <= x & x < 3) | 5 < x"),
        StructureKind::M,
        &ctx(),
    )
    .unwrap();
    assert_eq!(d.pieces.len(), 3);
    assert!(d.pieces[0].is_point());
    assert!(!d.pieces[1].lo_open && d.pieces[1].hi_open);
    assert_eq!(d.pieces[2].hi.value, EndValue::PosInf);
    let e = decompose1(&pl("x < x"), StructureKind::M, &ctx()).unwrap();
    assert!(e.pieces.is_empty());
}

#[test]
fn membership_agrees_with_evaluation() {
    let cfg = Config::default();
    let f = pl("(P2(3, x) & ~P2(1, x + 1)) | x = -2 | (x < -5 & P2(-2, x))");
    for kind in [StructureKind::M, StructureKind::Vstar] {
        let d = decompose1(&f, kind, &ctx()).unwrap();
        let s = Structure::new(kind, cfg.clone());
        for k in -80..80 {
            let x = Quad::rational(Rat::new(k, 8).unwrap());
            let mut env = BTreeMap::new();
            env.insert("x".to_string(), x.clone());
            assert_eq!(d.contains(&x, &cfg), eval_qf(&f, &s, &env).unwrap(), "{x}");
        }
    }
}

#[test]
fn cut_sup_examples() {
    let c = cut_sup(&pl("P2(3/1, y)"), &ctx()).unwrap();
    assert_eq!(c.sup, q("3*rt"));
    assert_eq!((c.x1, c.x2), (r("0"), r("3")));
    assert!(!c.rational);
    let c = cut_sup(&pl("y < 5"), &ctx()).unwrap();
    assert_eq!((c.x1, c.x2, c.rational), (r("5"), r("0"), true));
    assert_eq!(cut_sup(&pl("y < y"), &ctx()), Err(Error::EmptyCut));
    assert_eq!(cut_sup(&pl("y = y"), &ctx()), Err(Error::UnboundedCut));
    assert_eq!(cut_sup(&pl("y <= 5"), &ctx()), Err(Error::HasMaximum));
    assert_eq!(
        cut_sup(&pl("0 < y & y < 1"), &ctx()),
        Err(Error::NotDownwardClosed)
    );
    assert_eq!(
        cut_sup(&pl("y < 0 | y = 1"), &ctx()),
        Err(Error::NotDownwardClosed)
    );
}

#[test]
fn nonval_examples() {
    let f = pl("P2(1, y)");
    let (q1, q2) = nonval_witness(&f, &r("1/100"), &ctx()).unwrap();
    assert!(&q2 - &q1 < r("1/100"));
    let want = convergents(&Quad::sqrt_d(), &Config::default(), 12);
    assert!(want.contains(&q1) && want.contains(&q2));
    let (q1, q2) = nonval_witness(&pl("y < 5"), &r("1/10"), &ctx()).unwrap();
    assert_eq!((q1, q2), (r("199/40"), r("201/40")));
    assert_eq!(
        nonval_witness(&f, &r("0"), &ctx()),
        Err(Error::InvalidEpsilon)
    );
}

#[test]
fn axioms_hold_and_report_is_deterministic() {
    let a = check_axioms(1, 10, &ctx());
    assert!(a.all_pass, "{}", a.to_text());
    let b = check_axioms(1, 10, &ctx());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn wrong_slope_breaks_axiom_5() {
    let bad = Context::new(Config::default().with_psq_slope(Quad::from_int(2)));
    let rep = check_axioms(1, 5, &bad);
    assert!(!rep.check("5").unwrap().passed());
    assert!(!rep.all_pass);
}
