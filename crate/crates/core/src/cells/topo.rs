//! Closure, interior and boundary of sets definable over `F`, and the
//! normal form as a boolean combination of closures of open sets.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::serialize_display;
use crate::arith::Config;
use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{fresh_name, Atom, Formula, LinAtom, Rel, StructureKind, Term, Var};
use crate::qe::{dnf, equiv, qe_vstar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TopoOp {
    Cl,
    Int,
    Bd,
}

impl std::str::FromStr for TopoOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cl" => Ok(TopoOp::Cl),
            "int" => Ok(TopoOp::Int),
            "bd" => Ok(TopoOp::Bd),
            _ => Err(Error::IllFormed(format!(
                "unknown operator {s}; expected cl, int or bd"
            ))),
        }
    }
}

/// `A e. 0 < e -> E y. (f(y) & |x_i - y_i| < e for all i)`, not yet
/// eliminated.
pub fn closure_formula(f: &Formula, vars: &[Var], cfg: &Config) -> Formula {
    let mut avoid = f.all_vars();
    avoid.extend(vars.iter().cloned());
    let eps = fresh_name("e", &avoid);
    avoid.insert(eps.clone());
    let mut ys = Vec::new();
    let mut rename = BTreeMap::new();
    for x in vars {
        let y = fresh_name(&format!("{x}_"), &avoid);
        avoid.insert(y.clone());
        rename.insert(x.clone(), Term::var(&y));
        ys.push(y);
    }
    let mut near = vec![f.substitute(&rename, cfg)];
    let e = Term::var(&eps);
    for (x, y) in vars.iter().zip(&ys) {
        let (x, y) = (Term::var(x), Term::var(y));
        near.push(Formula::lt(x.minus(&y), e.clone()));
        near.push(Formula::lt(y.minus(&x), e.clone()));
    }
    Formula::forall(
        &eps,
        Formula::implies(
            Formula::lt(Term::zero(), e.clone()),
            Formula::exists_many(&ys, Formula::and(near)),
        ),
    )
}

/// `topo_in` over the free variables of `f`.
pub fn topo(f: &Formula, op: TopoOp, ctx: &Context) -> Result<Formula> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    topo_in(f, &vars, op, ctx)
}

/// Closure, interior or boundary in `F^n` of the set `f` defines over
/// `vars`, as a quantifier-free formula. The interior is the complement of
/// the closure of the complement, and the boundary is `cl(X) & cl(~X)`.
pub fn topo_in(f: &Formula, vars: &[Var], op: TopoOp, ctx: &Context) -> Result<Formula> {
    let g = match op {
        TopoOp::Cl => closure_qf(f, vars, ctx)?,
        TopoOp::Int => Formula::not(closure_qf(&Formula::not(f.clone()), vars, ctx)?),
        TopoOp::Bd => Formula::and(vec![
            closure_qf(f, vars, ctx)?,
            closure_qf(&Formula::not(f.clone()), vars, ctx)?,
        ]),
    };
    Ok(qe_vstar(&g, ctx)?.formula)
}

/// The closure commutes with finite unions, so the first-order definition
/// is eliminated one disjunct (a relatively open polyhedron) at a time.
fn closure_qf(f: &Formula, vars: &[Var], ctx: &Context) -> Result<Formula> {
    let g = qe_vstar(f, ctx)?.formula;
    let mut parts = Vec::new();
    for c in dnf(&g, StructureKind::Vstar, ctx)? {
        let piece = Formula::and(c.into_atoms().into_iter().map(Formula::lin).collect());
        parts.push(qe_vstar(&closure_formula(&piece, vars, &ctx.config), ctx)?.formula);
    }
    Ok(Formula::or(parts))
}

/// A closure of an open set, kept with the open set it closes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureTerm {
    #[serde(serialize_with = "serialize_display")]
    pub open: Formula,
    #[serde(serialize_with = "serialize_display")]
    pub closure: Formula,
}

/// A boolean combination of numbered closure terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    True,
    False,
    Term(usize),
    Not(Box<Shape>),
    And(Vec<Shape>),
    Or(Vec<Shape>),
}

impl Shape {
    fn expand(&self, terms: &[ClosureTerm]) -> Formula {
        match self {
            Shape::True => Formula::True,
            Shape::False => Formula::False,
            Shape::Term(i) => terms[*i].closure.clone(),
            Shape::Not(s) => Formula::not(s.expand(terms)),
            Shape::And(v) => Formula::and(v.iter().map(|s| s.expand(terms)).collect()),
            Shape::Or(v) => Formula::or(v.iter().map(|s| s.expand(terms)).collect()),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let (prec, sep, v) = match self {
            Shape::True => return write!(f, "true"),
            Shape::False => return write!(f, "false"),
            Shape::Term(i) => return write!(f, "C{i}"),
            Shape::Not(s) => {
                write!(f, "~")?;
                return s.write(f, 3);
            }
            Shape::And(v) => (2, " & ", v),
            Shape::Or(v) => (1, " | ", v),
        };
        if prec <= parent {
            write!(f, "(")?;
        }
        for (i, s) in v.iter().enumerate() {
            if i > 0 {
                write!(f, "{sep}")?;
            }
            s.write(f, prec)?;
        }
        if prec <= parent {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl Serialize for Shape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedNormalForm {
    pub vars: Vec<Var>,
    pub terms: Vec<ClosureTerm>,
    pub shape: Shape,
    /// The shape with every term replaced by its closure formula.
    #[serde(serialize_with = "serialize_display")]
    pub formula: Formula,
}

struct Builder<'a> {
    vars: &'a [Var],
    ctx: &'a Context,
    terms: Vec<ClosureTerm>,
}

impl Builder<'_> {
    fn term(&mut self, open: Formula) -> Result<Shape> {
        if let Some(i) = self.terms.iter().position(|t| t.open == open) {
            return Ok(Shape::Term(i));
        }
        let closure = topo_in(&open, self.vars, TopoOp::Cl, self.ctx)?;
        self.terms.push(ClosureTerm { open, closure });
        Ok(Shape::Term(self.terms.len() - 1))
    }

    /// `X = cl(X) \ (cl(X) & cl(Y))` for an open `X`, where `Y` is the
    /// complement of `cl(X)`.
    fn open_set(&mut self, x: Formula, y: Formula) -> Result<Shape> {
        let c0 = self.term(x)?;
        let c1 = self.term(y)?;
        Ok(Shape::And(vec![
            c0.clone(),
            Shape::Not(Box::new(Shape::And(vec![c0, c1]))),
        ]))
    }

    /// Atom by atom: a strict half-space is open, and a hyperplane is the
    /// complement of the two open half-spaces it separates.
    fn atomwise(&mut self, g: &Formula) -> Result<Shape> {
        Ok(match g {
            Formula::True => Shape::True,
            Formula::False => Shape::False,
            Formula::Atom(Atom::Lin(a)) => {
                let below = Formula::lin(LinAtom::lt(a.expr.clone()));
                let above = Formula::lin(LinAtom::lt(a.expr.neg()));
                match a.rel {
                    Rel::Lt => self.open_set(below, above)?,
                    Rel::Eq => Shape::And(vec![self.term(below)?, self.term(above)?]),
                }
            }
            Formula::Not(h) => Shape::Not(Box::new(self.atomwise(h)?)),
            Formula::And(v) => {
                Shape::And(v.iter().map(|h| self.atomwise(h)).collect::<Result<_>>()?)
            }
            Formula::Or(v) => Shape::Or(v.iter().map(|h| self.atomwise(h)).collect::<Result<_>>()?),
            other => {
                return Err(Error::IllFormed(format!(
                    "expected a quantifier-free formula over linear atoms, found {other}"
                )))
            }
        })
    }
}

/// Writes `f` as a boolean combination of closures of open sets. A regular
/// closed set is a single closure term; an open set is its closure minus
/// its boundary; otherwise every atom is rewritten. The result is decided
/// equivalent to `f` before returning.
pub fn closed_normal_form(f: &Formula, ctx: &Context) -> Result<ClosedNormalForm> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    let g = qe_vstar(f, ctx)?.formula;
    let mut b = Builder {
        vars: &vars,
        ctx,
        terms: Vec::new(),
    };
    let same = |h: &Formula| equiv(h, &g, StructureKind::Vstar, ctx);
    let mut shape = None;
    if matches!(g, Formula::True | Formula::False) {
        shape = Some(if g == Formula::True {
            Shape::True
        } else {
            Shape::False
        });
    }
    if shape.is_none() {
        let int_g = topo_in(&g, &vars, TopoOp::Int, ctx)?;
        let cl_int = topo_in(&int_g, &vars, TopoOp::Cl, ctx)?;
        if same(&cl_int)? {
            shape = Some(b.term(int_g.clone())?);
        } else if same(&int_g)? {
            let cl_g = topo_in(&g, &vars, TopoOp::Cl, ctx)?;
            let s = b.open_set(g.clone(), Formula::not(cl_g))?;
            if same(&s.expand(&b.terms))? {
                shape = Some(s);
            }
        }
    }
    let shape = match shape {
        Some(s) => s,
        None => {
            b.terms.clear();
            b.atomwise(&g)?
        }
    };
    let terms = b.terms;
    let formula = shape.expand(&terms);
    if !equiv(&formula, f, StructureKind::Vstar, ctx)? {
        return Err(Error::CheckFailed(format!(
            "closed normal form {shape} is not equivalent to the input"
        )));
    }
    Ok(ClosedNormalForm {
        vars,
        terms,
        shape,
        formula,
    })
}
