//! Strong cells of L-definable subsets of `Q^n` (n <= 3), their iterative
//! convex hulls over `F`, closures, fibers, and topological operators on
//! sets definable over `F`.

mod decompose;
mod topo;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

pub use decompose::{cell_decompose, closure_set, verify_partition, CellDecomp};
pub use topo::{
    closed_normal_form, closure_formula, topo, topo_in, ClosedNormalForm, ClosureTerm, Shape,
    TopoOp,
};

use crate::arith::cf::rational_between;
use crate::arith::{Config, Quad, Rat};
use crate::context::Context;
use crate::cuts1d::{ConvexPiece, Endpoint};
use crate::error::{Error, Result};
use crate::formula::{Formula, LinExpr, StructureKind, Term, Var};
use crate::qe::{decide, equiv};

/// `sum coeffs[i] * x_i + constant` with rational data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineForm {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl AffineForm {
    pub fn constant(arity: usize, c: Rat) -> Self {
        AffineForm {
            coeffs: vec![Rat::zero(); arity],
            constant: c,
        }
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, xi)| acc + c * xi)
    }

    /// Fixes the leading `a.len()` arguments.
    pub fn restrict(&self, a: &[Rat]) -> AffineForm {
        let k = a.len();
        AffineForm {
            constant: self.eval_prefix(a),
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    fn eval_prefix(&self, a: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(a)
            .fold(self.constant.clone(), |acc, (c, ai)| acc + c * ai)
    }

    pub fn to_term(&self, vars: &[Var]) -> Term {
        let mut t = Term::rat(self.constant.clone());
        for (c, v) in self.coeffs.iter().zip(vars) {
            t.add_var(v, c);
        }
        t
    }
}

/// The `F`-affine function `u(x) + sqrt(d) * v(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryFn {
    pub u: AffineForm,
    pub v: AffineForm,
}

impl BoundaryFn {
    pub fn rational(u: AffineForm) -> Self {
        let v = AffineForm::constant(u.arity(), Rat::zero());
        BoundaryFn { u, v }
    }

    pub fn arity(&self) -> usize {
        self.u.arity()
    }

    /// Reads an expression over `vars` (and nothing else).
    pub fn from_lin(e: &LinExpr, vars: &[Var]) -> Self {
        let pick = |f: fn(&Quad) -> &Rat| AffineForm {
            coeffs: vars
                .iter()
                .map(|v| e.coeff(v).map_or_else(Rat::zero, |c| f(c).clone()))
                .collect(),
            constant: f(&e.constant).clone(),
        };
        BoundaryFn {
            u: pick(|q| &q.a),
            v: pick(|q| &q.b),
        }
    }

    pub fn to_lin(&self, vars: &[Var]) -> LinExpr {
        let mut e = LinExpr::constant(Quad::new(self.u.constant.clone(), self.v.constant.clone()));
        for ((a, b), x) in self.u.coeffs.iter().zip(&self.v.coeffs).zip(vars) {
            e.add_term(x, &Quad::new(a.clone(), b.clone()));
        }
        e
    }

    pub fn eval(&self, x: &[Rat]) -> Quad {
        Quad::new(self.u.eval(x), self.v.eval(x))
    }

    pub fn restrict(&self, a: &[Rat]) -> BoundaryFn {
        BoundaryFn {
            u: self.u.restrict(a),
            v: self.v.restrict(a),
        }
    }
}

/// A strong cell, with coordinates positional: a cell of dimension `k`
/// lives in the first `k` variables of whatever list it is read over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StrongCell {
    Point {
        coords: Vec<Rat>,
    },
    /// An open interval of `M` with endpoints in `F` or infinite.
    Interval {
        piece: ConvexPiece,
    },
    Graph {
        base: Box<StrongCell>,
        f: BoundaryFn,
        /// `f` takes rational values on the base (its `v` part vanishes on
        /// the base hull); otherwise it takes no rational value there.
        in_m: bool,
    },
    Band {
        base: Box<StrongCell>,
        lo: Option<BoundaryFn>,
        hi: Option<BoundaryFn>,
    },
}

/// `x1, ..., xn`.
pub fn default_vars(n: usize) -> Vec<Var> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn open_piece(lo: Option<Quad>, hi: Option<Quad>) -> ConvexPiece {
    ConvexPiece {
        lo: lo.map_or_else(Endpoint::neg_inf, Endpoint::at),
        lo_open: true,
        hi: hi.map_or_else(Endpoint::pos_inf, Endpoint::at),
        hi_open: true,
    }
}

impl StrongCell {
    pub fn interval(lo: Option<Quad>, hi: Option<Quad>) -> Self {
        StrongCell::Interval {
            piece: open_piece(lo, hi),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            StrongCell::Point { coords } => coords.len(),
            StrongCell::Interval { .. } => 1,
            StrongCell::Graph { base, .. } | StrongCell::Band { base, .. } => base.dim() + 1,
        }
    }

    /// Topological dimension of the hull.
    pub fn cell_dim(&self) -> usize {
        match self {
            StrongCell::Point { .. } => 0,
            StrongCell::Interval { .. } => 1,
            StrongCell::Graph { base, .. } => base.cell_dim(),
            StrongCell::Band { base, .. } => base.cell_dim() + 1,
        }
    }

    /// The projection onto the first `k` coordinates.
    pub fn prefix(&self, k: usize) -> StrongCell {
        match self {
            StrongCell::Point { coords } => StrongCell::Point {
                coords: coords[..k].to_vec(),
            },
            _ if k == self.dim() => self.clone(),
            StrongCell::Interval { .. } => StrongCell::Point { coords: vec![] },
            StrongCell::Graph { base, .. } | StrongCell::Band { base, .. } => base.prefix(k),
        }
    }

    /// Membership of a rational point.
    pub fn contains(&self, x: &[Rat], cfg: &Config) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            StrongCell::Point { coords } => coords.as_slice() == x,
            StrongCell::Interval { piece } => piece.contains(&Quad::rational(x[0].clone()), cfg),
            StrongCell::Graph { base, f, .. } => {
                let (head, last) = x.split_at(x.len() - 1);
                base.contains(head, cfg) && f.eval(head) == Quad::rational(last[0].clone())
            }
            StrongCell::Band { base, lo, hi } => {
                let (head, last) = x.split_at(x.len() - 1);
                let y = Quad::rational(last[0].clone());
                base.contains(head, cfg)
                    && lo.as_ref().is_none_or(|g| g.eval(head).lt(&y, cfg))
                    && hi.as_ref().is_none_or(|g| y.lt(&g.eval(head), cfg))
            }
        }
    }

    /// Some rational point of the cell, if it has one.
    pub fn sample(&self, cfg: &Config) -> Option<Vec<Rat>> {
        match self {
            StrongCell::Point { coords } => Some(coords.clone()),
            StrongCell::Interval { piece } => Some(vec![rational_between(
                piece.lo.finite(),
                piece.hi.finite(),
                cfg,
            )]),
            StrongCell::Graph { base, f, .. } => {
                let mut s = base.sample(cfg)?;
                let y = f.eval(&s);
                if !y.is_rational() {
                    return None;
                }
                s.push(y.a);
                Some(s)
            }
            StrongCell::Band { base, lo, hi } => {
                let mut s = base.sample(cfg)?;
                let lo = lo.as_ref().map(|g| g.eval(&s));
                let hi = hi.as_ref().map(|g| g.eval(&s));
                s.push(rational_between(lo.as_ref(), hi.as_ref(), cfg));
                Some(s)
            }
        }
    }

    /// The iterative convex hull as a quantifier-free formula over `F` in
    /// the first `dim` of `vars`. Read over `Q` it defines the cell itself.
    pub fn hull(&self, vars: &[Var]) -> Formula {
        self.describe(vars, false)
    }

    /// The closure of the hull in `F^n`.
    pub fn closure(&self, vars: &[Var]) -> Formula {
        self.describe(vars, true)
    }

    fn describe(&self, vars: &[Var], closed: bool) -> Formula {
        match self {
            StrongCell::Point { coords } => Formula::and(
                coords
                    .iter()
                    .zip(vars)
                    .map(|(c, v)| Formula::eq(Term::var(v), Term::rat(c.clone())))
                    .collect(),
            ),
            StrongCell::Interval { piece } => {
                let mut p = piece.clone();
                if closed {
                    p.lo_open = p.lo.finite().is_none();
                    p.hi_open = p.hi.finite().is_none();
                }
                p.to_formula(&vars[0])
            }
            StrongCell::Graph { base, f, .. } => {
                let k = base.dim();
                let e = LinExpr::var(&vars[k]).minus(&f.to_lin(&vars[..k]));
                Formula::and(vec![base.describe(vars, closed), Formula::eq0(e)])
            }
            StrongCell::Band { base, lo, hi } => {
                let k = base.dim();
                let x = LinExpr::var(&vars[k]);
                let bound = |e: LinExpr| {
                    if closed {
                        Formula::le0(e)
                    } else {
                        Formula::lt0(e)
                    }
                };
                let mut parts = vec![base.describe(vars, closed)];
                if let Some(g) = lo {
                    parts.push(bound(g.to_lin(&vars[..k]).minus(&x)));
                }
                if let Some(g) = hi {
                    parts.push(bound(x.minus(&g.to_lin(&vars[..k]))));
                }
                Formula::and(parts)
            }
        }
    }

    /// Decides the defining conditions of a strong cell over `F`: open
    /// intervals are nonempty, graphs satisfy the rational/irrational
    /// dichotomy on the base hull, and band bounds are strictly separated
    /// on the whole base hull.
    pub fn validate(&self, ctx: &Context) -> Result<()> {
        if let StrongCell::Graph { base, .. } | StrongCell::Band { base, .. } = self {
            base.validate(ctx)?;
        }
        self.validate_top(ctx)
    }

    /// The conditions of `validate` at the last coordinate only.
    pub fn validate_top(&self, ctx: &Context) -> Result<()> {
        let vars = default_vars(self.dim());
        let fail = |what: &str| {
            Err(Error::CheckFailed(format!(
                "{what} in cell {}",
                self.summary()
            )))
        };
        match self {
            StrongCell::Point { .. } => Ok(()),
            StrongCell::Interval { piece } => match (piece.lo.finite(), piece.hi.finite()) {
                (Some(l), Some(h)) if !l.lt(h, &ctx.config) => fail("empty interval"),
                _ if !piece.lo_open || !piece.hi_open => fail("interval not open"),
                _ => Ok(()),
            },
            StrongCell::Graph { base, f, in_m } => {
                let k = base.dim();
                let v = BoundaryFn::rational(f.v.clone()).to_lin(&vars[..k]);
                let vanishes = Formula::eq0(v);
                let cond = if *in_m {
                    vanishes
                } else {
                    Formula::not(vanishes)
                };
                if holds_on(base, &vars, cond, ctx)? {
                    Ok(())
                } else {
                    fail("boundary function breaks the rational/irrational dichotomy")
                }
            }
            StrongCell::Band { base, lo, hi } => {
                let k = base.dim();
                if let (Some(l), Some(h)) = (lo, hi) {
                    let gap = Formula::lt0(l.to_lin(&vars[..k]).minus(&h.to_lin(&vars[..k])));
                    if !holds_on(base, &vars, gap, ctx)? {
                        return fail("band bounds not strictly separated on the base hull");
                    }
                }
                Ok(())
            }
        }
    }

    /// A compact one-line description.
    pub fn summary(&self) -> String {
        let vars = default_vars(self.dim());
        self.hull(&vars).to_string()
    }
}

/// Whether `cond` holds on the whole hull of `base` (over `F`).
fn holds_on(base: &StrongCell, vars: &[Var], cond: Formula, ctx: &Context) -> Result<bool> {
    let s = Formula::implies(base.hull(vars), cond).universal_closure();
    decide(&s, StructureKind::Vstar, ctx)
}

/// The fiber `C_a` over a rational point `a` of the projection of `c` to
/// its first `a.len()` coordinates. The hull identity
/// `hull(C_a) = hull(C)_a` is decided before returning.
pub fn fiber(c: &StrongCell, a: &[Rat], ctx: &Context) -> Result<StrongCell> {
    let n = c.dim();
    let k = a.len();
    if k >= n {
        return Err(Error::IllFormed(format!(
            "a fiber over {k} coordinates needs a cell of dimension above {k}, found {n}"
        )));
    }
    if !c.prefix(k).contains(a, &ctx.config) {
        return Err(Error::NotInBase);
    }
    let fc = fiber_of(c, a)?;
    let vars = default_vars(n);
    let fixed: BTreeMap<Var, Term> = vars[..k]
        .iter()
        .cloned()
        .zip(a.iter().map(|r| Term::rat(r.clone())))
        .collect();
    let lhs = c.hull(&vars).substitute(&fixed, &ctx.config);
    let rhs = fc.hull(&vars[k..]);
    if !equiv(&lhs, &rhs, StructureKind::Vstar, ctx)? {
        return Err(Error::CheckFailed(format!(
            "hull of the fiber {} differs from the fiber of the hull {}",
            rhs, lhs
        )));
    }
    Ok(fc)
}

fn fiber_of(c: &StrongCell, a: &[Rat]) -> Result<StrongCell> {
    let k = a.len();
    if k == 0 {
        return Ok(c.clone());
    }
    Ok(match c {
        StrongCell::Point { coords } => StrongCell::Point {
            coords: coords[k..].to_vec(),
        },
        StrongCell::Interval { .. } => StrongCell::Point { coords: vec![] },
        StrongCell::Graph { base, f, .. } if base.dim() == k => {
            let y = f.eval(a);
            if !y.is_rational() {
                return Err(Error::IllFormed("the graph has no rational points".into()));
            }
            StrongCell::Point { coords: vec![y.a] }
        }
        StrongCell::Band { base, lo, hi } if base.dim() == k => StrongCell::Interval {
            piece: open_piece(
                lo.as_ref().map(|g| g.eval(a)),
                hi.as_ref().map(|g| g.eval(a)),
            ),
        },
        StrongCell::Graph { base, f, in_m } => StrongCell::Graph {
            base: Box::new(fiber_of(base, a)?),
            f: f.restrict(a),
            in_m: *in_m,
        },
        StrongCell::Band { base, lo, hi } => StrongCell::Band {
            base: Box::new(fiber_of(base, a)?),
            lo: lo.as_ref().map(|g| g.restrict(a)),
            hi: hi.as_ref().map(|g| g.restrict(a)),
        },
    })
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: Serializer>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[cfg(test)]
mod tests;
