use std::collections::BTreeMap;

use quadcut::cuts1d::cut_sup;
use quadcut::{parse, Config, Context, Lang, Quad, Rat};
use quadcut_harness::brute::{holds, Domain};
use quadcut_harness::gen::{self, FormulaGen, Sig};
use quadcut_harness::oracle::interval_sign;

fn q(a: i64, b: i64) -> Quad {
    Quad::new(Rat::from_int(a), Rat::from_int(b))
}

#[test]
fn interval_signs_of_known_values() {
    assert_eq!(interval_sign(&q(1, -1), 2), Some(-1));
    assert_eq!(interval_sign(&q(3, -2), 2), Some(1));
    assert_eq!(interval_sign(&q(-5, 2), 6), Some(-1));
    assert_eq!(interval_sign(&q(0, 0), 2), Some(0));
    assert_eq!(interval_sign(&q(7, 0), 3), Some(1));
}

#[test]
fn interval_signs_of_convergent_gaps_alternate() {
    let (mut p, mut r) = (1i64, 1i64);
    let mut last = 0;
    for _ in 0..30 {
        let s = interval_sign(&q(p, -r), 2).expect("well separated at 200 bits");
        assert_ne!(s, last);
        last = s;
        (p, r) = (p + 2 * r, p + r);
    }
}

fn decide(text: &str, domain: Domain) -> bool {
    let cfg = Config::new(2).unwrap();
    let f = parse(text, Lang::Lstar).unwrap();
    holds(&f, &BTreeMap::new(), domain, &cfg).unwrap()
}

#[test]
fn brute_force_on_known_sentences() {
    for dom in [Domain::Q, Domain::F] {
        assert!(decide("A x. A y. (x < y -> E z. (x < z & z < y))", dom));
        assert!(!decide("E x. A y. y < x", dom));
        assert!(!decide("A x. E y. (x < y & P2(1, y))", dom));
        assert!(decide(
            "A x. A y. ((0<x & 0<y) -> ((E z.(0<z & P2(x,z) & P2(z,y))) <-> y < 2*x))",
            dom
        ));
    }
    assert!(decide("E x. x = rt", Domain::F));
    assert!(!decide("E x. x = rt", Domain::Q));
    assert!(decide("E x. A y. (P2(1, y) <-> y < x)", Domain::F));
    assert!(!decide("E x. A y. (P2(1, y) <-> y < x)", Domain::Q));
}

#[test]
fn generated_instances_are_well_formed() {
    let ctx = Context::default();
    let mut rng = gen::rng(3, 0);
    for sig in [Sig::L, Sig::Lstar, Sig::LP] {
        let g = FormulaGen {
            vars: &["x", "y", "z"],
            sig,
            max_atoms: 6,
            max_blocks: 2,
        };
        let lang = match sig {
            Sig::L => Lang::L,
            Sig::Lstar => Lang::Lstar,
            Sig::LP => Lang::LP,
        };
        for _ in 0..50 {
            let text = g.formula(&mut rng);
            let f = parse(&text, lang).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert!(
                f.free_vars()
                    .iter()
                    .all(|v| ["x", "y", "z"].contains(&v.as_str())),
                "{text}"
            );
        }
    }
    for _ in 0..50 {
        let text = gen::cut(&mut rng);
        let f = parse(&text, Lang::L).unwrap();
        cut_sup(&f, &ctx).unwrap_or_else(|e| panic!("{text}: {e}"));
    }
    for n in 1..=3 {
        for _ in 0..10 {
            let c = gen::strong_cell(&mut rng, n, &ctx);
            assert_eq!(c.dim(), n);
            assert!(c.sample(&ctx.config).is_some());
        }
    }
}
