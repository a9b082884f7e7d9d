use super::*;
use crate::formula::{parse, Lang};

fn ctx() -> Context {
    Context::default()
}

fn r(s: &str) -> Rat {
    s.parse().unwrap()
}

fn q(s: &str) -> Quad {
    s.parse().unwrap()
}

fn pl(s: &str) -> Formula {
    parse(s, Lang::L).unwrap()
}

fn ps(s: &str) -> Formula {
    parse(s, Lang::Lstar).unwrap()
}

fn vstar_equiv(a: &Formula, b: &Formula) -> bool {
    equiv(a, b, StructureKind::Vstar, &ctx()).unwrap()
}

fn affine(coeffs: &[&str], c: &str) -> AffineForm {
    AffineForm {
        coeffs: coeffs.iter().map(|s| r(s)).collect(),
        constant: r(c),
    }
}

/// 0 < x < 1, -x < y < x.
fn wedge() -> StrongCell {
    StrongCell::Band {
        base: Box::new(StrongCell::interval(Some(q("0")), Some(q("1")))),
        lo: Some(BoundaryFn::rational(affine(&["-1"], "0"))),
        hi: Some(BoundaryFn::rational(affine(&["1"], "0"))),
    }
}

/// y = rt*x over 0 < x < 1; its values are irrational.
fn slope_graph() -> StrongCell {
    StrongCell::Graph {
        base: Box::new(StrongCell::interval(Some(q("0")), Some(q("1")))),
        f: BoundaryFn {
            u: affine(&["0"], "0"),
            v: affine(&["1"], "0"),
        },
        in_m: false,
    }
}

#[test]
fn half_plane_splits_at_zero() {
    let d = cell_decompose(&pl("P2(x, y)"), None, &ctx()).unwrap();
    assert_eq!(d.cells.len(), 3);
    let sqrt_x = BoundaryFn {
        u: affine(&["0"], "0"),
        v: affine(&["1"], "0"),
    };
    let bases = [
        StrongCell::interval(None, Some(q("0"))),
        StrongCell::Point {
            coords: vec![r("0")],
        },
        StrongCell::interval(Some(q("0")), None),
    ];
    for (c, b) in d.cells.iter().zip(bases) {
        assert_eq!(
            c,
            &StrongCell::Band {
                base: Box::new(b),
                lo: None,
                hi: Some(sqrt_x.clone())
            }
        );
    }
    assert!(verify_partition(&d, &ctx()).unwrap());
}

#[test]
fn trivial_decompositions() {
    let d = cell_decompose(&pl("x = x & y = y"), None, &ctx()).unwrap();
    assert_eq!(
        d.cells,
        vec![StrongCell::Band {
            base: Box::new(StrongCell::interval(None, None)),
            lo: None,
            hi: None
        }]
    );
    let four = pl("x < y & y < z & z < w");
    assert_eq!(
        cell_decompose(&four, None, &ctx()),
        Err(Error::DimensionLimit { n: 4, max: 3 })
    );
    let e = cell_decompose(&pl("x < x"), None, &ctx()).unwrap();
    assert!(e.cells.is_empty());
}

#[test]
fn partitions_are_decided() {
    for s in [
        "x < y & y < 1 | x = 0",
        "P2(x, y) & ~P2(y, x) | y = 2*x",
        "0 < x & x < y & P2(1, x + y)",
        "x < y & y < z & P2(z, x)",
    ] {
        let d = cell_decompose(&pl(s), None, &ctx()).unwrap();
        assert!(verify_partition(&d, &ctx()).unwrap(), "{s}");
        for c in &d.cells {
            c.validate(&ctx()).unwrap();
        }
    }
}

#[test]
fn hull_examples() {
    let v = default_vars(2);
    let want = ps("0 < x1 & x1 < 1 & x2 = rt*x1");
    assert!(vstar_equiv(&slope_graph().hull(&v), &want));
    let p = StrongCell::Point {
        coords: vec![r("1/2"), r("-3")],
    };
    assert!(vstar_equiv(&p.hull(&v), &ps("x1 = 1/2 & x2 = -3")));
    let i = StrongCell::interval(Some(q("0")), Some(q("rt")));
    assert!(vstar_equiv(&i.hull(&v[..1]), &ps("0 < x1 & x1 < rt")));
}

#[test]
fn closure_examples() {
    let v = default_vars(2);
    let want = ps("0 <= x1 & x1 <= 1 & -x1 <= x2 & x2 <= x1");
    assert!(vstar_equiv(&wedge().closure(&v), &want));
    assert!(vstar_equiv(
        &wedge().closure(&v),
        &topo(&wedge().hull(&v), TopoOp::Cl, &ctx()).unwrap()
    ));
    let seg = slope_graph().closure(&v);
    assert!(vstar_equiv(&seg, &ps("0 <= x1 & x1 <= 1 & x2 = rt*x1")));
    let p = StrongCell::Point {
        coords: vec![r("2")],
    };
    assert!(vstar_equiv(&p.closure(&v[..1]), &p.hull(&v[..1])));
}

#[test]
fn closure_set_examples() {
    let c = closure_set(&pl("P2(1, x) & 0 < x"), None, &ctx()).unwrap();
    assert!(vstar_equiv(&c, &ps("0 <= x & x <= rt")));
    let c = closure_set(&pl("x = 1 | x = 3"), None, &ctx()).unwrap();
    assert!(vstar_equiv(&c, &ps("x = 1 | x = 3")));
    let c = closure_set(&pl("x < x"), None, &ctx()).unwrap();
    assert_eq!(c, Formula::False);
}

#[test]
fn fiber_examples() {
    let f = fiber(&wedge(), &[r("1/2")], &ctx()).unwrap();
    assert_eq!(f, StrongCell::interval(Some(q("-1/2")), Some(q("1/2"))));
    let g = StrongCell::Graph {
        base: Box::new(StrongCell::interval(Some(q("0")), Some(q("1")))),
        f: BoundaryFn::rational(affine(&["3"], "1")),
        in_m: true,
    };
    assert_eq!(
        fiber(&g, &[r("1/3")], &ctx()).unwrap(),
        StrongCell::Point {
            coords: vec![r("2")]
        }
    );
    assert_eq!(fiber(&wedge(), &[r("2")], &ctx()), Err(Error::NotInBase));
}

#[test]
fn validation_rejects_bad_cells() {
    let crossing = StrongCell::Band {
        base: Box::new(StrongCell::interval(Some(q("-1")), Some(q("1")))),
        lo: Some(BoundaryFn::rational(affine(&["0"], "0"))),
        hi: Some(BoundaryFn::rational(affine(&["1"], "0"))),
    };
    assert!(matches!(
        crossing.validate(&ctx()),
        Err(Error::CheckFailed(_))
    ));
    let mixed = StrongCell::Graph {
        base: Box::new(StrongCell::interval(Some(q("-1")), Some(q("1")))),
        f: BoundaryFn {
            u: affine(&["0"], "0"),
            v: affine(&["1"], "0"),
        },
        in_m: false,
    };
    assert!(mixed.validate(&ctx()).is_err());
    wedge().validate(&ctx()).unwrap();
    slope_graph().validate(&ctx()).unwrap();
}

#[test]
fn topo_examples() {
    let c = topo(&ps("(0 < x & x < 1) | x = 2"), TopoOp::Cl, &ctx()).unwrap();
    assert!(vstar_equiv(&c, &ps("(0 <= x & x <= 1) | x = 2")));
    let i = topo(&ps("0 <= x & x <= 1"), TopoOp::Int, &ctx()).unwrap();
    assert!(vstar_equiv(&i, &ps("0 < x & x < 1")));
    let b = topo(&ps("0 < x & x < rt"), TopoOp::Bd, &ctx()).unwrap();
    assert!(vstar_equiv(&b, &ps("x = 0 | x = rt")));
    let b = topo(&ps("(0 < x & x < 1) | (1 < x & x < 2)"), TopoOp::Bd, &ctx()).unwrap();
    assert!(vstar_equiv(&b, &ps("x = 0 | x = 1 | x = 2")));
}

#[test]
fn closed_normal_forms() {
    let open = closed_normal_form(&ps("0 < x & x < 1"), &ctx()).unwrap();
    assert_eq!(open.terms.len(), 2);
    assert_eq!(open.shape.to_string(), "C0 & ~(C0 & C1)");
    let closed = closed_normal_form(&ps("0 <= x & x <= 1"), &ctx()).unwrap();
    assert_eq!(closed.shape, Shape::Term(0));
    let line = closed_normal_form(&ps("y = rt*x"), &ctx()).unwrap();
    assert!(vstar_equiv(&line.formula, &ps("y = rt*x")));
    let mixed = ps("(0 < x & x < 1) | (1 < x & x < 2) | x = 3 | (y < x & 5 <= x)");
    let nf = closed_normal_form(&mixed, &ctx()).unwrap();
    assert!(vstar_equiv(&nf.formula, &mixed));
}

#[test]
fn json_shape() {
    let d = cell_decompose(&pl("P2(x, y)"), None, &ctx()).unwrap();
    let j = d.to_json();
    assert_eq!(j["schema"], "quadcut.cells.v1");
    assert_eq!(j["cells"][0]["kind"], "band");
    assert_eq!(j["cells"][0]["hi"]["v"]["coeffs"][0], "1");
    assert_eq!(j["source"], "P2(x, y)");
}
