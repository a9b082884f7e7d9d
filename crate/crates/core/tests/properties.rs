use std::cmp::Ordering;
use std::collections::BTreeMap;

use proptest::prelude::*;
use quadcut::cuts1d::{cut_sup, nonval_witness};
use quadcut::formula::eval_qf;
use quadcut::qe::{qe, qe_m};
use quadcut::{parse, Config, Context, Formula, Lang, Quad, Rat, Structure, StructureKind};

fn rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn quad() -> impl Strategy<Value = Quad> {
    (rat(), rat()).prop_map(|(a, b)| Quad::new(a, b))
}

fn d() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 6, 7, 10])
}

/// `c1*x + c0` as text.
fn linear() -> impl Strategy<Value = String> {
    (-3i64..=3, -6i64..=6, 1i64..=3).prop_map(|(c1, n, d)| format!("{c1}*x + ({n}/{d})"))
}

fn at(x: &Rat) -> BTreeMap<String, Quad> {
    BTreeMap::from([("x".to_string(), Quad::rational(x.clone()))])
}

fn holds(f: &Formula, kind: StructureKind, x: &Rat, ctx: &Context) -> bool {
    eval_qf(f, &Structure::new(kind, ctx.config.clone()), &at(x)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_laws(x in quad(), y in quad(), d in d()) {
        let cfg = Config::new(d).unwrap();
        prop_assert_eq!(x.mul(&y, &cfg), y.mul(&x, &cfg));
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.inv(&cfg).unwrap(), &cfg), Quad::one());
        }
        prop_assert_eq!(x.norm(&cfg), x.mul(&x.conj(), &cfg).a);
    }

    #[test]
    fn order_matches_floats_away_from_ties(x in quad(), y in quad(), d in d()) {
        let cfg = Config::new(d).unwrap();
        let (fx, fy) = (x.to_f64(&cfg), y.to_f64(&cfg));
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x.cmp_in(&y, &cfg), fx.partial_cmp(&fy).unwrap());
        }
        prop_assert_eq!(x.cmp_in(&y, &cfg), y.cmp_in(&x, &cfg).reverse());
        prop_assert_eq!(x.cmp_in(&y, &cfg) == Ordering::Equal, x == y);
        prop_assert_eq!((&x - &y).sign(&cfg), x.cmp_in(&y, &cfg) as i8);
    }

    /// Both structures are dense, so a strict gap holds a point.
    #[test]
    fn elimination_between_two_bounds(s in linear(), t in linear(), x in rat(), m in any::<bool>()) {
        let ctx = Context::default();
        let kind = if m { StructureKind::M } else { StructureKind::Vstar };
        let f = parse(&format!("E y. ({s} < y & y < {t})"), Lang::L).unwrap();
        let gap = parse(&format!("{s} < {t}"), Lang::L).unwrap();
        let r = qe(&f, kind, &ctx).unwrap();
        prop_assert!(r.formula.is_quantifier_free());
        prop_assert_eq!(holds(&r.formula, kind, &x, &ctx), holds(&gap, kind, &x, &ctx));
    }

    /// `E y. (y < s & P2(1, y - t))` holds in M iff the two bounds leave
    /// room below, which every pair of bounds does.
    #[test]
    fn elimination_under_the_slope(s in linear(), t in linear(), x in rat()) {
        let ctx = Context::default();
        let f = parse(&format!("E y. (y < {s} & P2(1, y - ({t})))"), Lang::L).unwrap();
        let r = qe_m(&f, &ctx).unwrap();
        prop_assert!(holds(&r.formula, StructureKind::M, &x, &ctx));
        let g = parse(&format!("A y. (y < {s} -> P2(1, y - ({t})))"), Lang::L).unwrap();
        let below = parse(&format!("{s} <= {t} + rt"), Lang::Lstar).unwrap();
        let r = qe_m(&g, &ctx).unwrap();
        prop_assert_eq!(
            holds(&r.formula, StructureKind::M, &x, &ctx),
            holds(&below, StructureKind::Vstar, &x, &ctx)
        );
    }

    #[test]
    fn universal_is_dual_to_existential(s in linear(), t in linear(), x in rat()) {
        let ctx = Context::default();
        let a = parse(&format!("A y. ({s} < y | P2(y, {t}))"), Lang::L).unwrap();
        let e = parse(&format!("~E y. ~({s} < y | P2(y, {t}))"), Lang::L).unwrap();
        let (ra, re) = (qe_m(&a, &ctx).unwrap(), qe_m(&e, &ctx).unwrap());
        prop_assert_eq!(
            holds(&ra.formula, StructureKind::M, &x, &ctx),
            holds(&re.formula, StructureKind::M, &x, &ctx)
        );
    }

    /// `P2(a, y - b)` is `y < a*rt + b`.
    #[test]
    fn supremum_of_a_slope_cut(a in rat(), b in rat(), k in 0u32..4) {
        let ctx = Context::default();
        let f = parse(&format!("P2({a}, y - ({b}))"), Lang::L).unwrap();
        let s = cut_sup(&f, &ctx).unwrap();
        let expected = Quad::new(b, a.clone());
        prop_assert_eq!(&s.sup, &expected);
        prop_assert_eq!(s.rational, a.is_zero());
        let eps = Rat::new(1, 10i64.pow(k)).unwrap();
        let (y1, y2) = nonval_witness(&f, &eps, &ctx).unwrap();
        let cfg = &ctx.config;
        prop_assert!(Quad::rational(y1.clone()).lt(&expected, cfg));
        prop_assert!(!Quad::rational(y2.clone()).lt(&expected, cfg));
        prop_assert!(&y2 - &y1 < eps);
    }
}

#[test]
fn negated_disjunction_eliminates_like_conjunction() {
    let ctx = Context::default();
    let f = parse("E y. ~(y < x | P2(1, y))", Lang::L).unwrap();
    let g = parse("E y. (x <= y & ~P2(1, y))", Lang::L).unwrap();
    let (rf, rg) = (qe_m(&f, &ctx).unwrap(), qe_m(&g, &ctx).unwrap());
    for n in -8..=8 {
        let x = Rat::new(n, 3).unwrap();
        assert_eq!(
            holds(&rf.formula, StructureKind::M, &x, &ctx),
            holds(&rg.formula, StructureKind::M, &x, &ctx),
            "x = {x}"
        );
        assert!(holds(&rf.formula, StructureKind::M, &x, &ctx));
    }
}
