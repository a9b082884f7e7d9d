use criterion::{criterion_group, criterion_main};

criterion_group!(
    benches,
    quadcut_bench::quad_sign,
    quadcut_bench::qe,
    quadcut_bench::cells,
    quadcut_bench::pair
);
criterion_main!(benches);
