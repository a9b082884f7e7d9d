//! Benchmarks for the hot paths: exact signs, elimination, cell
//! decomposition and pair decisions.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use quadcut::cells::cell_decompose;
use quadcut::pair::decide_pair;
use quadcut::qe::qe_m;
use quadcut::{parse, Context, Lang, Quad, Rat};

/// `x -> sqrt(2)x` composed with itself is `x -> 2x`.
pub const DOUBLING: &str =
    "A x. A y. ((0<x & 0<y) -> ((E z.(0<z & P2(x,z) & P2(z,y))) <-> y < 2*x))";

pub const CELL_SETS: &[(&str, &str)] = &[
    ("band", "0 < x & x < y & P2(1, y)"),
    ("graph", "0 < x & x < 1 & P2(x, y) & ~P2(x, y + 1/1000)"),
    ("three", "0 < x & x < y & y < z & P2(1, z) & x + y < 1"),
];

pub const PAIR_SENTENCES: &[(&str, &str)] = &[
    ("dense", "A x. A y. (x < y -> E z. (P(z) & x < z & z < y))"),
    (
        "codense",
        "A x. A y. (x < y -> E z. (~P(z) & x < z & z < y))",
    ),
    ("sqrt", "E x. (~P(x) & A y. (P(y) -> (y < x <-> P2(1, y))))"),
];

/// Near-cancellations `p - q rt` with `p/q` a convergent of `sqrt 2`.
pub fn hard_quads() -> Vec<Quad> {
    let (mut p, mut q) = (1i64, 1i64);
    let mut out = Vec::new();
    for _ in 0..20 {
        out.push(Quad::new(Rat::from_int(p), Rat::from_int(-q)));
        (p, q) = (p + 2 * q, p + q);
    }
    out
}

pub fn quad_sign(c: &mut Criterion) {
    let ctx = Context::default();
    let xs = hard_quads();
    c.bench_function("quad_sign/convergents", |b| {
        b.iter(|| {
            xs.iter()
                .map(|x| black_box(x).sign(&ctx.config) as i32)
                .sum::<i32>()
        })
    });
}

pub fn qe(c: &mut Criterion) {
    let ctx = Context::default();
    let f = parse(DOUBLING, Lang::L).expect("parses");
    c.bench_function("qe_m/doubling", |b| {
        b.iter(|| qe_m(black_box(&f), &ctx).expect("eliminates"))
    });
}

pub fn cells(c: &mut Criterion) {
    let ctx = Context::default();
    let mut group = c.benchmark_group("cell_decompose");
    for (name, text) in CELL_SETS {
        let f = parse(text, Lang::L).expect("parses");
        group.bench_with_input(BenchmarkId::from_parameter(name), &f, |b, f| {
            b.iter(|| cell_decompose(f, None, &ctx).expect("decomposes"))
        });
    }
    group.finish();
}

pub fn pair(c: &mut Criterion) {
    let ctx = Context::default();
    let mut group = c.benchmark_group("decide_pair");
    for (name, text) in PAIR_SENTENCES {
        let f = parse(text, Lang::LP).expect("parses");
        group.bench_with_input(BenchmarkId::from_parameter(name), &f, |b, f| {
            b.iter(|| decide_pair(f, &ctx).expect("decides"))
        });
    }
    group.finish();
}
