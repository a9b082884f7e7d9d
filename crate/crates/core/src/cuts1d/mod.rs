//! Definable subsets of the line: convex decompositions over `Q` and over
//! `F`, suprema of definable cuts, and gap witnesses.

mod axioms;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

pub use axioms::check_axioms;

use crate::arith::cf::{convergents, rational_between};
use crate::arith::{Config, Quad, Rat};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{eval_qf, Atom, Formula, Structure, StructureKind, Var};
use crate::qe::qe;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndValue {
    NegInf,
    PosInf,
    At(Quad),
}

impl Serialize for EndValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EndValue::NegInf => s.serialize_str("-inf"),
            EndValue::PosInf => s.serialize_str("+inf"),
            EndValue::At(q) => q.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endpoint {
    pub value: EndValue,
    /// Finite and rational.
    pub in_m: bool,
}

impl Endpoint {
    pub fn neg_inf() -> Self {
        Endpoint {
            value: EndValue::NegInf,
            in_m: false,
        }
    }

    pub fn pos_inf() -> Self {
        Endpoint {
            value: EndValue::PosInf,
            in_m: false,
        }
    }

    pub fn at(q: Quad) -> Self {
        Endpoint {
            in_m: q.is_rational(),
            value: EndValue::At(q),
        }
    }

    pub fn finite(&self) -> Option<&Quad> {
        match &self.value {
            EndValue::At(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for EndValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndValue::NegInf => write!(f, "-inf"),
            EndValue::PosInf => write!(f, "+inf"),
            EndValue::At(q) => write!(f, "{q}"),
        }
    }
}

/// A convex set with endpoints in `F` or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexPiece {
    pub lo: Endpoint,
    pub lo_open: bool,
    pub hi: Endpoint,
    pub hi_open: bool,
}

impl fmt::Display for ConvexPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo.value);
        }
        let open = if self.lo_open { '(' } else { '[' };
        let close = if self.hi_open { ')' } else { ']' };
        write!(f, "{open}{}, {}{close}", self.lo.value, self.hi.value)
    }
}

impl ConvexPiece {
    pub fn contains(&self, x: &Quad, cfg: &Config) -> bool {
        let above = match self.lo.finite() {
            None => true,
            Some(l) => match l.cmp_in(x, cfg) {
                Ordering::Less => true,
                Ordering::Equal => !self.lo_open,
                Ordering::Greater => false,
            },
        };
        let below = match self.hi.finite() {
            None => true,
            Some(h) => match x.cmp_in(h, cfg) {
                Ordering::Less => true,
                Ordering::Equal => !self.hi_open,
                Ordering::Greater => false,
            },
        };
        above && below
    }

    pub fn is_point(&self) -> bool {
        !self.lo_open && !self.hi_open && self.lo == self.hi
    }

    /// The piece as a formula in `x` (over `F`; read over `Q` it defines the
    /// rational points of the piece).
    pub fn to_formula(&self, x: &str) -> Formula {
        use crate::formula::LinExpr;
        let mut parts = Vec::new();
        if let Some(l) = self.lo.finite() {
            let e = LinExpr::constant(l.clone()).minus(&LinExpr::var(x));
            parts.push(if self.lo_open {
                Formula::lt0(e)
            } else if self.is_point() {
                Formula::eq0(e)
            } else {
                Formula::le0(e)
            });
        }
        if let Some(h) = self.hi.finite() {
            if !self.is_point() {
                let e = LinExpr::var(x).minus(&LinExpr::constant(h.clone()));
                parts.push(if self.hi_open {
                    Formula::lt0(e)
                } else {
                    Formula::le0(e)
                });
            }
        }
        Formula::and(parts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomp1D {
    pub var: Var,
    pub domain_kind: StructureKind,
    pub pieces: Vec<ConvexPiece>,
}

impl Decomp1D {
    pub fn contains(&self, x: &Quad, cfg: &Config) -> bool {
        self.pieces.iter().any(|p| p.contains(x, cfg))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Region {
    Open(Option<Quad>, Option<Quad>),
    Point(Quad),
}

fn single_var(f: &Formula) -> Result<Var> {
    let free = f.free_vars();
    match free.len() {
        0 => Ok("x".to_string()),
        1 => Ok(free.into_iter().next().expect("one")),
        _ => Err(Error::IllFormed(format!(
            "expected one free variable, found {:?}",
            free.into_iter().collect::<Vec<_>>()
        ))),
    }
}

/// Points of `F` where some atom of the quantifier-free `g` changes truth
/// value, sorted and without repetitions.
fn roots(g: &Formula, x: &str, cfg: &Config) -> Vec<Quad> {
    let mut out: Vec<Quad> = Vec::new();
    g.visit(&mut |h| {
        if let Formula::Atom(Atom::Lin(a)) = h {
            if let Some(c) = a.expr.coeff(x) {
                let r = (-&a.expr.constant)
                    .div(c, cfg)
                    .expect("nonzero coefficient");
                out.push(r);
            }
        }
    });
    out.sort_by(|a, b| a.cmp_in(b, cfg));
    out.dedup();
    out
}

/// Splits the line at `roots` into alternating open intervals and points.
fn regions(roots: &[Quad]) -> Vec<Region> {
    let mut out = Vec::new();
    let mut lo: Option<Quad> = None;
    for r in roots {
        out.push(Region::Open(lo.clone(), Some(r.clone())));
        out.push(Region::Point(r.clone()));
        lo = Some(r.clone());
    }
    out.push(Region::Open(lo, None));
    out
}

/// Maximal convex pieces of the set defined by `f` (one free variable)
/// over `Q` (kind `M`) or over `F` (kind `Vstar`).
pub fn decompose1(f: &Formula, kind: StructureKind, ctx: &Context) -> Result<Decomp1D> {
    let x = single_var(f)?;
    let g = qe(f, kind, ctx)?.formula;
    let cfg = &ctx.config;
    let s = Structure::new(kind, cfg.clone());
    let holds = |v: Quad| -> Result<bool> {
        let mut env = BTreeMap::new();
        env.insert(x.clone(), v);
        eval_qf(&g, &s, &env)
    };
    let mut pieces = Vec::new();
    let mut start: Option<(Endpoint, bool)> = None;
    let mut last_in: Option<Region> = None;
    let close = |start: (Endpoint, bool), last: &Region| -> ConvexPiece {
        let (hi, hi_open) = match last {
            Region::Open(_, None) => (Endpoint::pos_inf(), true),
            Region::Open(_, Some(h)) => (Endpoint::at(h.clone()), true),
            Region::Point(r) => (Endpoint::at(r.clone()), false),
        };
        ConvexPiece {
            lo: start.0,
            lo_open: start.1,
            hi,
            hi_open,
        }
    };
    for region in regions(&roots(&g, &x, cfg)) {
        // `None`: an irrational point, which is not a point of M.
        let status = match &region {
            Region::Point(r) if kind == StructureKind::M && !r.is_rational() => None,
            Region::Point(r) => Some(holds(r.clone())?),
            Region::Open(lo, hi) => Some(holds(Quad::rational(rational_between(
                lo.as_ref(),
                hi.as_ref(),
                cfg,
            )))?),
        };
        match status {
            None => {}
            Some(true) => {
                if start.is_none() {
                    start = Some(match &region {
                        Region::Open(None, _) => (Endpoint::neg_inf(), true),
                        Region::Open(Some(l), _) => (Endpoint::at(l.clone()), true),
                        Region::Point(r) => (Endpoint::at(r.clone()), false),
                    });
                }
                last_in = Some(region);
            }
            Some(false) => {
                if let Some(st) = start.take() {
                    pieces.push(close(st, last_in.as_ref().expect("started")));
                }
            }
        }
    }
    if let Some(st) = start.take() {
        pieces.push(close(st, last_in.as_ref().expect("started")));
    }
    Ok(Decomp1D {
        var: x,
        domain_kind: kind,
        pieces,
    })
}

/// The supremum of a definable cut and its coordinates: `sup = x1 + rt*x2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutSup {
    pub sup: Quad,
    pub x1: Rat,
    pub x2: Rat,
    pub rational: bool,
}

/// Validates that `f` (one free variable, read over `Q`) defines a
/// nonempty, downward closed, bounded above set without a maximum, and
/// returns its supremum in `F`.
pub fn cut_sup(f: &Formula, ctx: &Context) -> Result<CutSup> {
    let dec = decompose1(f, StructureKind::M, ctx)?;
    let Some(first) = dec.pieces.first() else {
        return Err(Error::EmptyCut);
    };
    if dec.pieces.len() > 1 || first.lo.value != EndValue::NegInf {
        return Err(Error::NotDownwardClosed);
    }
    let sup = match &first.hi.value {
        EndValue::At(q) => q.clone(),
        _ => return Err(Error::UnboundedCut),
    };
    if !first.hi_open {
        return Err(Error::HasMaximum);
    }
    Ok(CutSup {
        rational: sup.is_rational(),
        x1: sup.a.clone(),
        x2: sup.b.clone(),
        sup,
    })
}

/// Rationals `q1` in the cut and `q2` above it with `q2 - q1 < eps`.
pub fn nonval_witness(f: &Formula, eps: &Rat, ctx: &Context) -> Result<(Rat, Rat)> {
    if eps.signum() <= 0 {
        return Err(Error::InvalidEpsilon);
    }
    let cs = cut_sup(f, ctx)?;
    Ok(straddle(&cs.sup, eps, &ctx.config))
}

/// Rationals `q1 < s <= q2`, with `q1 < s` strict and gap below `eps`.
pub fn straddle(s: &Quad, eps: &Rat, cfg: &Config) -> (Rat, Rat) {
    if s.is_rational() {
        let quarter = eps * &Rat::new(1, 4).expect("4 != 0");
        return (&s.a - &quarter, &s.a + &quarter);
    }
    // Consecutive convergents lie on opposite sides, 1/(q_k q_{k+1}) apart.
    let mut n = 8;
    loop {
        let cs = convergents(s, cfg, n);
        for w in cs.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if &(hi - lo) < eps {
                return (lo.clone(), hi.clone());
            }
        }
        n *= 2;
    }
}

#[cfg(test)]
mod tests;
