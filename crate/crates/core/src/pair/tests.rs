use super::*;
use crate::cells::topo;
use crate::cells::TopoOp;
use crate::formula::{eval_qf, parse, Lang, Structure};
use crate::qe::equiv;

fn ctx() -> Context {
    Context::default()
}

fn pp(s: &str) -> Formula {
    parse(s, Lang::LP).unwrap()
}

fn pl(s: &str) -> Formula {
    parse(s, Lang::L).unwrap()
}

fn q(s: &str) -> Quad {
    s.parse().unwrap()
}

fn m_equiv(a: &Formula, b: &Formula) -> bool {
    equiv(a, b, StructureKind::M, &ctx()).unwrap()
}

fn vstar_equiv(a: &Formula, b: &Formula) -> bool {
    equiv(a, b, StructureKind::Vstar, &ctx()).unwrap()
}

#[test]
fn interpretation_examples() {
    let cfg = Config::default();
    let p = interpret(&pp("P(v)"), &cfg).unwrap();
    assert_eq!(p.formula, pl("v2 = 0"));
    let s = interpret(&pp("P2(v, w)"), &cfg).unwrap();
    assert_eq!(s.formula, pl("P2(v1 - w2, w1 - 2*v2)"));
    let e = interpret(&pp("E v. P(v)"), &cfg).unwrap();
    assert!(
        matches!(&e.formula, Formula::Exists(a, g) if a == "v1" && matches!(&**g, Formula::Exists(b, _) if b == "v2"))
    );
    assert_eq!(e.coords, vec![]);
}

#[test]
fn interpretation_agrees_with_pair_evaluation() {
    let cfg = Config::default();
    let pair = Structure::pair(&cfg);
    let m = Structure::m(&cfg);
    let vals = [
        "0",
        "1",
        "-1/2",
        "rt",
        "1 - rt",
        "3/2 + 2*rt",
        "-rt",
        "5/7 - 1/3*rt",
    ];
    for text in [
        "P2(v, w)",
        "v < w",
        "v = 2*w + 1",
        "P(v + w)",
        "v - w <= 1/2",
        "P2(v, w + 1) & ~P(w)",
    ] {
        let f = pp(text);
        let cf = interpret(&f, &cfg).unwrap();
        assert!(!cf.formula.has_pmem());
        for a in vals {
            for b in vals {
                let env: BTreeMap<Var, Quad> =
                    [("v".to_string(), q(a)), ("w".to_string(), q(b))].into();
                let direct = eval_qf(&f, &pair, &env).unwrap();
                let coords = eval_qf(&cf.formula, &m, &cf.encode(&env).unwrap()).unwrap();
                assert_eq!(direct, coords, "{text} at v = {a}, w = {b}");
            }
        }
    }
}

#[test]
fn lin_atoms_interpret() {
    let cfg = Config::default();
    let f = parse("w = rt*v + 1", Lang::Lstar).unwrap();
    let cf = interpret(&f, &cfg).unwrap();
    let m = Structure::m(&cfg);
    let env: BTreeMap<Var, Quad> = [
        ("v".to_string(), q("1 + rt")),
        ("w".to_string(), q("3 + rt")),
    ]
    .into();
    assert!(eval_qf(&cf.formula, &m, &cf.encode(&env).unwrap()).unwrap());
}

#[test]
fn pair_sentences() {
    let c = ctx();
    for (s, want) in [
        ("A a, b. a < b -> E p. (P(p) & a < p & p < b)", true),
        ("E v. (~P(v) & 0 < v & v < 1)", true),
        ("A v. E p. (P(p) & p < v)", true),
        ("A v. P(v)", false),
        ("E v. P(v) & P2(1, v) & ~P2(1, v - 1/1000000)", false),
    ] {
        let f = pp(s);
        assert_eq!(decide_pair(&f, &c), Ok(want), "{s}");
        assert_eq!(decide_pair(&Formula::not(f), &c), Ok(!want));
    }
    assert!(matches!(
        decide_pair(&pp("P(x)"), &c),
        Err(Error::NotASentence(_))
    ));
}

#[test]
fn trace_examples() {
    let c = ctx();
    let t = trace(&pp("E v. (~P(v) & v < x & x < v + 1)"), &c).unwrap();
    assert_eq!(t, Formula::True);
    let t = trace(&pp("P(x)"), &c).unwrap();
    assert_eq!(t, Formula::True);
    let t = trace(&pp("P2(x, y)"), &c).unwrap();
    assert!(m_equiv(&t, &pl("P2(x, y)")));
    let t = trace(&pp("E v. (~P(v) & x < v & v < y & 2*v < y)"), &c).unwrap();
    assert!(m_equiv(&t, &pl("x < y & 2*x < y")));
}

#[test]
fn epf_examples() {
    let c = ctx();
    let k0 = epf_normal_form(&parse("x < rt*y", Lang::Lstar).unwrap(), &c).unwrap();
    assert!(k0.p_vars.is_empty());
    let one = epf_normal_form(&pp("P2(u, w)"), &c).unwrap();
    assert_eq!(one.p_vars.len(), 4);
    assert!(matches!(one.formula, Formula::Exists(..)));
    let nested = epf_normal_form(
        &pp("E p. (P(p) & x < p & A r. (P(r) -> ~(p < r & r < x + 1)))"),
        &c,
    )
    .unwrap();
    assert!(!nested.body.has_pmem());
}

#[test]
fn lift_examples() {
    let c = ctx();
    let y = lift_trace(&pl("P2(1, x) & 0 < x"), &c).unwrap();
    assert!(vstar_equiv(
        &y,
        &parse("0 < x & x < rt", Lang::Lstar).unwrap()
    ));
    let y = lift_trace(&pl("x = 0"), &c).unwrap();
    assert!(vstar_equiv(&y, &pl("x = 0")));
    let y = lift_trace(&pl("~P2(x, y) & ~P2(-x, -y)"), &c).unwrap();
    assert!(vstar_equiv(&y, &pl("x = 0 & y = 0")));
}

#[test]
fn topo_pair_examples() {
    let c = ctx();
    let all = topo_pair(&pp("P(v)"), &c).unwrap();
    assert_eq!(all.formula, Formula::True);
    let unit = topo_pair(&pp("P(v) & 0 < v & v < 1"), &c).unwrap();
    let want = interpret(&pp("0 <= v & v <= 1"), &c.config).unwrap();
    assert!(m_equiv(&unit.formula, &want.formula));
    assert_eq!(topo_pair(&pp("v < v"), &c).unwrap().formula, Formula::False);
    let line = topo_pair(&pp("~P(x) & P(y) & x < y"), &c).unwrap();
    let want = interpret(&pp("x <= y"), &c.config).unwrap();
    assert!(m_equiv(&line.formula, &want.formula));
}

#[test]
fn two_closures_agree() {
    let c = ctx();
    for s in [
        "P2(1, x) & 0 < x",
        "x < y & P2(y, x)",
        "x = 1 | 0 < x & x < 1/2",
    ] {
        let f = pl(s);
        let cells = crate::cells::closure_set(&f, None, &c).unwrap();
        let via_pair = topo_pair(
            &f.relativize_to_p(&f.free_vars().into_iter().collect::<Vec<_>>()),
            &c,
        )
        .unwrap();
        let lifted = interpret(&cells, &c.config).unwrap();
        assert!(m_equiv(&lifted.formula, &via_pair.formula), "{s}");
    }
}

#[test]
fn open_core_examples() {
    let c = ctx();
    let u = extract_open_core(&pp("E p. (P(p) & x < p & p < x + 1)"), &c).unwrap();
    assert_eq!(u.formula, Formula::True);
    assert_eq!(extract_open_core(&pp("P(x)"), &c), Err(Error::NotOpen));
    let u = extract_open_core(&pp("0 < x & x < 1 & E p. (P(p) & p < x)"), &c).unwrap();
    assert!(vstar_equiv(&u.formula, &pl("0 < x & x < 1")));
    let u = extract_open_core(&pp("x < y & E p. (P(p) & ~(x < p & p < y))"), &c).unwrap();
    assert!(vstar_equiv(&u.formula, &pl("x < y")));
    let cl = topo(&u.formula, TopoOp::Cl, &c).unwrap();
    assert!(vstar_equiv(&cl, &u.closure));
}

#[test]
fn infimum_of_ray() {
    let c = ctx();
    assert_eq!(infimum(&pp("v > rt"), &c).unwrap(), Quad::sqrt_d());
    assert_eq!(infimum(&pp("1 <= v & P(v)"), &c).unwrap(), q("1"));
    assert_eq!(
        infimum(&pp("~P(v) & 1/2 < v & v < 3"), &c).unwrap(),
        q("1/2")
    );
}

#[test]
fn pair_axioms_pass_and_repeat() {
    let c = ctx();
    let r = axioms_pair_check(7, 4, &c);
    assert!(r.all_pass, "{}", r.to_json());
    assert_eq!(r, axioms_pair_check(7, 4, &c));
}
