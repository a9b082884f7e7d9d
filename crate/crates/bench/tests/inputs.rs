use quadcut::cells::cell_decompose;
use quadcut::pair::decide_pair;
use quadcut::qe::decide;
use quadcut::{parse, Context, Lang, StructureKind};
use quadcut_bench::{hard_quads, CELL_SETS, DOUBLING, PAIR_SENTENCES};

#[test]
fn bench_inputs_are_valid() {
    let ctx = Context::default();
    let f = parse(DOUBLING, Lang::L).unwrap();
    assert!(decide(&f, StructureKind::M, &ctx).unwrap());
    for (_, text) in CELL_SETS {
        let f = parse(text, Lang::L).unwrap();
        assert!(
            !cell_decompose(&f, None, &ctx).unwrap().cells.is_empty(),
            "{text}"
        );
    }
    let truth: Vec<bool> = PAIR_SENTENCES
        .iter()
        .map(|(_, t)| decide_pair(&parse(t, Lang::LP).unwrap(), &ctx).unwrap())
        .collect();
    assert_eq!(truth, [true, true, true]);
}

#[test]
fn convergents_alternate_in_sign() {
    let ctx = Context::default();
    let signs: Vec<i8> = hard_quads().iter().map(|x| x.sign(&ctx.config)).collect();
    assert!(signs.windows(2).all(|w| w[0] == -w[1]), "{signs:?}");
}
