//! Seeded random instances: formulas as text in the module grammar, cuts,
//! strong cells and field elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quadcut::cells::{AffineForm, BoundaryFn, StrongCell};
use quadcut::{Context, Quad, Rat};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> Rng8 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn small_rat(rng: &mut Rng8) -> Rat {
    Rat::new(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4)).expect("positive denominator")
}

pub fn rat_in(rng: &mut Rng8, num: i64, den: i64) -> Rat {
    Rat::new(rng.gen_range(-num..=num), rng.gen_range(1..=den)).expect("positive denominator")
}

pub fn small_quad(rng: &mut Rng8) -> Quad {
    let b = if rng.gen_bool(0.5) {
        Rat::zero()
    } else {
        small_rat(rng)
    };
    Quad::new(small_rat(rng), b)
}

/// Values of every size, including near-cancellations `p - q rt` with
/// `p/q` a convergent of `sqrt d`.
pub fn wide_quad(rng: &mut Rng8, ctx: &Context) -> Quad {
    match rng.gen_range(0..4) {
        0 => small_quad(rng),
        1 => {
            let cs = quadcut::arith::cf::convergents(&Quad::sqrt_d(), &ctx.config, 40);
            let c = cs.choose(rng).expect("nonempty").clone();
            let q = Rat::from_int(c.denom().clone());
            let p = Rat::from_int(c.numer().clone());
            let sign = if rng.gen_bool(0.5) {
                Rat::one()
            } else {
                -Rat::one()
            };
            Quad::new(&p * &sign, &(-&q) * &sign)
        }
        _ => {
            let big = |rng: &mut Rng8| {
                Rat::new(
                    rng.gen_range(-1_000_000_000i64..=1_000_000_000),
                    rng.gen_range(1i64..=1_000_000),
                )
                .expect("positive denominator")
            };
            Quad::new(big(rng), big(rng))
        }
    }
}

fn coeff(rng: &mut Rng8) -> &'static str {
    ["1", "2", "-1", "3", "1/2", "-2"]
        .choose(rng)
        .expect("nonempty")
}

/// Which atoms a formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sig {
    /// Order, rational scalars and `P2`.
    L,
    /// L with `rt` coefficients.
    Lstar,
    /// L with the predicate `P`.
    LP,
}

pub struct FormulaGen<'a> {
    pub vars: &'a [&'a str],
    pub sig: Sig,
    pub max_atoms: usize,
    pub max_blocks: usize,
}

impl FormulaGen<'_> {
    fn term(&self, rng: &mut Rng8, vars: &[&str], irrational: bool) -> String {
        let k = rng.gen_range(1..=2.min(vars.len()));
        let mut picked: Vec<&str> = vars.choose_multiple(rng, k).copied().collect();
        picked.sort();
        let mut parts: Vec<String> = picked
            .iter()
            .map(|v| {
                let c = coeff(rng);
                if irrational && self.sig == Sig::Lstar && rng.gen_bool(0.3) {
                    format!("{c}*rt*{v}")
                } else {
                    format!("{c}*{v}")
                }
            })
            .collect();
        if rng.gen_bool(0.6) {
            parts.push(format!("({})", small_rat(rng)));
        }
        parts.join(" + ")
    }

    fn atom(&self, rng: &mut Rng8, vars: &[&str]) -> String {
        let kinds = match self.sig {
            Sig::LP => 6,
            _ => 5,
        };
        let kind = rng.gen_range(0..kinds);
        // Arguments of P2 and P are terms, which have rational coefficients.
        let irrational = kind < 4;
        let s = self.term(rng, vars, irrational);
        let t = if rng.gen_bool(0.5) {
            self.term(rng, vars, irrational)
        } else {
            format!("{}", small_rat(rng))
        };
        match kind {
            0 | 1 => format!("{s} < {t}"),
            2 => format!("{s} <= {t}"),
            3 => format!("{s} = {t}"),
            4 => format!("P2({s}, {t})"),
            _ => format!("P({s})"),
        }
    }

    fn qf(&self, rng: &mut Rng8, atoms: usize, vars: &[&str]) -> String {
        if atoms <= 1 {
            let a = self.atom(rng, vars);
            return if rng.gen_bool(0.2) {
                format!("~({a})")
            } else {
                a
            };
        }
        let left = rng.gen_range(1..atoms);
        let op = if rng.gen_bool(0.5) { "&" } else { "|" };
        let s = format!(
            "({}) {op} ({})",
            self.qf(rng, left, vars),
            self.qf(rng, atoms - left, vars)
        );
        if rng.gen_bool(0.15) {
            format!("~({s})")
        } else {
            s
        }
    }

    /// A formula with at most `max_atoms` atoms and `max_blocks` blocks of
    /// like quantifiers.
    pub fn formula(&self, rng: &mut Rng8) -> String {
        let atoms = rng.gen_range(1..=self.max_atoms);
        let blocks = rng.gen_range(0..=self.max_blocks);
        if blocks == 0 {
            return self.qf(rng, atoms, self.vars);
        }
        let blocks = blocks.min(atoms);
        let mut sizes = vec![1; blocks];
        for _ in blocks..atoms {
            let i = rng.gen_range(0..blocks);
            sizes[i] += 1;
        }
        let mut text: Option<String> = None;
        for n in sizes {
            let k = rng.gen_range(1..=2.min(self.vars.len()));
            let bound: Vec<&str> = self.vars.choose_multiple(rng, k).copied().collect();
            let q = if rng.gen_bool(0.5) { "E" } else { "A" };
            let own = self.qf(rng, n, self.vars);
            let body = match text {
                None => own,
                Some(t) => {
                    let op = if rng.gen_bool(0.5) { "&" } else { "|" };
                    format!("({own}) {op} {t}")
                }
            };
            text = Some(format!("({q} {}. {body})", bound.join(", ")));
        }
        text.expect("at least one block")
    }
}

fn affine(rng: &mut Rng8, arity: usize) -> AffineForm {
    AffineForm {
        coeffs: (0..arity).map(|_| rat_in(rng, 3, 2)).collect(),
        constant: rat_in(rng, 6, 2),
    }
}

fn boundary(rng: &mut Rng8, arity: usize, irrational: bool) -> BoundaryFn {
    let u = affine(rng, arity);
    let v = if irrational {
        affine(rng, arity)
    } else {
        AffineForm::constant(arity, Rat::zero())
    };
    BoundaryFn { u, v }
}

fn shifted(f: &BoundaryFn, by: Rat) -> BoundaryFn {
    let mut g = f.clone();
    g.u.constant = &g.u.constant + &by;
    g
}

fn level0(rng: &mut Rng8) -> StrongCell {
    if rng.gen_bool(0.2) {
        return StrongCell::Point {
            coords: vec![small_rat(rng)],
        };
    }
    let lo = small_quad(rng);
    let hi = &lo + &Quad::rational(Rat::from_int(rng.gen_range(1..=4)));
    let lo = (!rng.gen_bool(0.15)).then_some(lo);
    let hi = (!rng.gen_bool(0.15)).then_some(hi);
    StrongCell::interval(lo, hi)
}

fn extend(rng: &mut Rng8, base: StrongCell, ctx: &Context) -> StrongCell {
    let k = base.dim();
    for _ in 0..20 {
        let c = if rng.gen_bool(0.3) {
            let irr = rng.gen_bool(0.4);
            StrongCell::Graph {
                base: Box::new(base.clone()),
                f: boundary(rng, k, irr),
                in_m: !irr,
            }
        } else {
            let irr = rng.gen_bool(0.3);
            let lo = boundary(rng, k, irr);
            let hi = if rng.gen_bool(0.5) {
                shifted(&lo, Rat::from_int(rng.gen_range(1..=3)))
            } else {
                let irr = rng.gen_bool(0.3);
                boundary(rng, k, irr)
            };
            StrongCell::Band {
                base: Box::new(base.clone()),
                lo: (!rng.gen_bool(0.15)).then_some(lo),
                hi: (!rng.gen_bool(0.15)).then_some(hi),
            }
        };
        if c.validate_top(ctx).is_ok() {
            return c;
        }
    }
    StrongCell::Band {
        base: Box::new(base),
        lo: None,
        hi: None,
    }
}

/// A strong cell of `M^n`, built level by level with every level
/// validated. Cells are nonempty, so draws with no rational point (below
/// a graph without rational values) are redrawn.
pub fn strong_cell(rng: &mut Rng8, n: usize, ctx: &Context) -> StrongCell {
    loop {
        let mut c = level0(rng);
        for _ in 1..n {
            c = extend(rng, c, ctx);
        }
        if c.sample(&ctx.config).is_some() {
            return c;
        }
    }
}

/// A definable cut of `M` in `y`: nonempty, downward closed, bounded
/// above and without a largest element.
pub fn cut(rng: &mut Rng8) -> String {
    let mut a = small_rat(rng);
    if a.is_zero() {
        a = Rat::one();
    }
    let (b, c) = (small_rat(rng), small_rat(rng));
    match rng.gen_range(0..5) {
        0 | 1 => format!("P2({a}, y - ({b}))"),
        2 => format!("y < {c}"),
        3 => format!("P2({a}, y - ({b})) & y < {c}"),
        _ => format!("E z. (P2({a}, z) & y < z - ({b}))"),
    }
}
