//! The dense pair `(V, Q)` in the tight case. Every element of `F` is
//! `x1 + rt*x2` for unique rationals, so a pair formula becomes an L-formula
//! over doubled coordinates and is decided by elimination in `M`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{Config, Quad, Rat};
use crate::cells::{cell_decompose, serialize_display};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{fresh_name, or, Atom, Formula, LinExpr, Rel, StructureKind, Term, Var};
use crate::qe::{decide, qe_m, qe_vstar, to_surface};

mod axioms;
mod open_core;

pub use axioms::{axioms_pair_check, infimum};
pub use open_core::{extract_open_core, topo_pair, OpenCore};

/// The coordinates standing for one pair variable. A variable read over
/// `M` has no second coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coord {
    pub var: Var,
    pub rational: Var,
    pub irrational: Option<Var>,
}

/// A pair formula rewritten over rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordFormula {
    #[serde(serialize_with = "serialize_display")]
    pub formula: Formula,
    pub coords: Vec<Coord>,
}

impl CoordFormula {
    /// Coordinates of an assignment to the pair variables.
    pub fn encode(&self, env: &BTreeMap<Var, Quad>) -> Result<BTreeMap<Var, Quad>> {
        let mut out = BTreeMap::new();
        for c in &self.coords {
            let x = env
                .get(&c.var)
                .ok_or_else(|| Error::UnboundVariable(c.var.clone()))?;
            out.insert(c.rational.clone(), Quad::rational(x.a.clone()));
            match &c.irrational {
                Some(v) => {
                    out.insert(v.clone(), Quad::rational(x.b.clone()));
                }
                None if !x.b.is_zero() => {
                    return Err(Error::SortViolation(format!(
                        "{} = {x} is not rational",
                        c.var
                    )))
                }
                None => {}
            }
        }
        Ok(out)
    }
}

/// `U + rt*W` with rational-linear `U`, `W`.
struct Split {
    u: Term,
    w: Term,
}

impl Split {
    fn minus(&self, o: &Split) -> Split {
        Split {
            u: self.u.minus(&o.u),
            w: self.w.minus(&o.w),
        }
    }

    fn lt0(&self) -> Formula {
        if self.w.is_zero() {
            Formula::lt(self.u.clone(), Term::zero())
        } else {
            Formula::psq(self.w.scale(&-Rat::one()), self.u.clone())
        }
    }

    fn eq0(&self) -> Formula {
        let u = Formula::eq(self.u.clone(), Term::zero());
        if self.w.is_zero() {
            u
        } else {
            Formula::and(vec![u, Formula::eq(self.w.clone(), Term::zero())])
        }
    }
}

pub(crate) struct Interp<'a> {
    cfg: &'a Config,
    map: BTreeMap<Var, (Var, Option<Var>)>,
    avoid: BTreeSet<Var>,
}

impl<'a> Interp<'a> {
    pub(crate) fn new(f: &Formula, cfg: &'a Config) -> Self {
        Interp {
            cfg,
            map: BTreeMap::new(),
            avoid: f.all_vars(),
        }
    }

    pub(crate) fn fresh(&mut self, base: &str) -> Var {
        let v = fresh_name(base, &self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    /// Gives `v` two fresh coordinates.
    pub(crate) fn double(&mut self, v: &str) -> (Var, Var) {
        let a = self.fresh(&format!("{v}1"));
        let b = self.fresh(&format!("{v}2"));
        self.map.insert(v.to_string(), (a.clone(), Some(b.clone())));
        (a, b)
    }

    /// Reads `v` over `M`, keeping its name.
    pub(crate) fn restrict(&mut self, v: &str) {
        self.avoid.insert(v.to_string());
        self.map.insert(v.to_string(), (v.to_string(), None));
    }

    fn coord(&self, v: &str) -> Result<&(Var, Option<Var>)> {
        self.map
            .get(v)
            .ok_or_else(|| Error::UnboundVariable(v.to_string()))
    }

    fn split_term(&self, t: &Term) -> Result<Split> {
        let mut u = Term::rat(t.constant.a.clone());
        let mut w = Term::rat(t.constant.b.clone());
        for (v, c) in &t.coeffs {
            let (a, b) = self.coord(v)?;
            u.add_var(a, c);
            if let Some(b) = b {
                w.add_var(b, c);
            }
        }
        Ok(Split { u, w })
    }

    /// `(al + be rt)(x1 + rt x2) = al x1 + d be x2 + rt (be x1 + al x2)`.
    fn split_lin(&self, e: &LinExpr) -> Result<Split> {
        let d = self.cfg.d_rat();
        let mut u = Term::rat(e.constant.a.clone());
        let mut w = Term::rat(e.constant.b.clone());
        for (v, g) in &e.coeffs {
            let (a, b) = self.coord(v)?;
            u.add_var(a, &g.a);
            w.add_var(a, &g.b);
            if let Some(b) = b {
                u.add_var(b, &(d * &g.b));
                w.add_var(b, &g.a);
            }
        }
        Ok(Split { u, w })
    }

    fn atom(&self, a: &Atom) -> Result<Formula> {
        Ok(match a {
            Atom::Lt(s, t) => self.split_term(s)?.minus(&self.split_term(t)?).lt0(),
            Atom::Le(s, t) => Formula::not(self.split_term(t)?.minus(&self.split_term(s)?).lt0()),
            Atom::Eq(s, t) => self.split_term(s)?.minus(&self.split_term(t)?).eq0(),
            Atom::Psq(s, t) => {
                // t < rt*s  iff  (t1 - d s2) + rt (t2 - s1) < 0.
                let (s, t) = (self.split_term(s)?, self.split_term(t)?);
                Formula::psq(s.u.minus(&t.w), t.u.minus(&s.w.scale(self.cfg.d_rat())))
            }
            Atom::PMem(t) => {
                let w = self.split_term(t)?.w;
                Formula::eq(w, Term::zero())
            }
            Atom::Lin(l) => {
                let s = self.split_lin(&l.expr)?;
                match l.rel {
                    Rel::Lt => s.lt0(),
                    Rel::Eq => s.eq0(),
                }
            }
        })
    }

    pub(crate) fn translate(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(a) => self.atom(a)?,
            Formula::Not(g) => Formula::not(self.translate(g)?),
            Formula::And(v) => {
                Formula::And(v.iter().map(|g| self.translate(g)).collect::<Result<_>>()?)
            }
            Formula::Or(v) => {
                Formula::Or(v.iter().map(|g| self.translate(g)).collect::<Result<_>>()?)
            }
            Formula::Implies(a, b) => Formula::implies(self.translate(a)?, self.translate(b)?),
            Formula::Iff(a, b) => Formula::iff(self.translate(a)?, self.translate(b)?),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let saved = self.map.get(v).cloned();
                let (a, b) = self.double(v);
                let body = self.translate(g);
                match saved {
                    Some(s) => self.map.insert(v.clone(), s),
                    None => self.map.remove(v),
                };
                let pair = [a, b];
                if matches!(f, Formula::Exists(..)) {
                    Formula::exists_many(&pair, body?)
                } else {
                    Formula::forall_many(&pair, body?)
                }
            }
        })
    }

    pub(crate) fn coords(&self, vars: &[Var]) -> Vec<Coord> {
        vars.iter()
            .map(|v| {
                let (a, b) = &self.map[v];
                Coord {
                    var: v.clone(),
                    rational: a.clone(),
                    irrational: b.clone(),
                }
            })
            .collect()
    }
}

/// The parameter-free interpretation: every variable `v` becomes
/// `(v1, v2)` with value `v1 + rt*v2`, and `P(v)` becomes `v2 = 0`.
pub fn interpret(f: &Formula, cfg: &Config) -> Result<CoordFormula> {
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    interpret_over(f, &free, cfg)
}

/// `interpret` with coordinates for each of `vars`, which must include
/// the free variables of `f`.
pub fn interpret_over(f: &Formula, vars: &[Var], cfg: &Config) -> Result<CoordFormula> {
    if let Some(x) = f.free_vars().iter().find(|x| !vars.contains(x)) {
        return Err(Error::UnboundVariable(x.clone()));
    }
    let mut it = Interp::new(f, cfg);
    it.avoid.extend(vars.iter().cloned());
    for v in vars {
        it.double(v);
    }
    Ok(CoordFormula {
        formula: it.translate(f)?,
        coords: it.coords(vars),
    })
}

/// Truth of a pair sentence.
pub fn decide_pair(sentence: &Formula, ctx: &Context) -> Result<bool> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(Error::NotASentence(free.into_iter().collect()));
    }
    decide(
        &interpret(sentence, &ctx.config)?.formula,
        StructureKind::M,
        ctx,
    )
}

/// Whether two pair formulas define the same set.
pub fn equiv_pair(f: &Formula, g: &Formula, ctx: &Context) -> Result<bool> {
    let differs = |a: &Formula, b: &Formula| {
        let diff = Formula::and(vec![a.clone(), Formula::not(b.clone())]);
        decide_pair(&diff.existential_closure(), ctx)
    };
    Ok(!differs(f, g)? && !differs(g, f)?)
}

/// The L-formula defining the rational points of `f`: free variables are
/// read over `M`.
pub fn trace(f: &Formula, ctx: &Context) -> Result<Formula> {
    let mut it = Interp::new(f, &ctx.config);
    for v in f.free_vars() {
        it.restrict(&v);
    }
    let g = it.translate(f)?;
    Ok(to_surface(&qe_m(&g, ctx)?.formula, StructureKind::M))
}

/// A single block `E p1..p2n. (P(p_i) for all i) & phi`, where the
/// pairs `(p_{2j-1}, p_{2j})` are the coordinates of the free variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpfForm {
    pub vars: Vec<Var>,
    pub p_vars: Vec<Var>,
    /// The L-formula over the `p` variables.
    #[serde(serialize_with = "serialize_display")]
    pub body: Formula,
    #[serde(serialize_with = "serialize_display")]
    pub formula: Formula,
}

/// `v - p = rt*q`, written with `P2` and negation only.
fn decomp(v: &Var, p: &Var, q: &Var) -> Formula {
    let (v, p, q) = (Term::var(v), Term::var(p), Term::var(q));
    Formula::and(vec![
        Formula::not(Formula::psq(q.clone(), v.minus(&p))),
        Formula::not(Formula::psq(q.scale(&-Rat::one()), p.minus(&v))),
    ])
}

/// An equivalent formula with all uses of `P` gathered in one leading
/// existential block, checked equivalent before returning. Quantifier-free
/// inputs over the order and `F`-scalars alone are returned with an empty
/// block; `P2` atoms are rewritten through the coordinates.
pub fn epf_normal_form(f: &Formula, ctx: &Context) -> Result<EpfForm> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    let mut has_psq = false;
    f.visit(&mut |g| has_psq |= matches!(g, Formula::Atom(Atom::Psq(..))));
    let out = if f.is_quantifier_free() && !f.has_pmem() && !has_psq {
        EpfForm {
            vars,
            p_vars: Vec::new(),
            body: f.clone(),
            formula: f.clone(),
        }
    } else {
        let mut it = Interp::new(f, &ctx.config);
        let mut p_vars = Vec::new();
        let mut parts = Vec::new();
        let mut coords = BTreeMap::new();
        for v in &vars {
            let p = it.fresh(&format!("p{}", p_vars.len() + 1));
            let q = it.fresh(&format!("p{}", p_vars.len() + 2));
            it.map.insert(v.clone(), (p.clone(), Some(q.clone())));
            coords.insert(v.clone(), (p.clone(), q.clone()));
            p_vars.push(p);
            p_vars.push(q);
        }
        let g = it.translate(f)?;
        let body = to_surface(&qe_m(&g, ctx)?.formula, StructureKind::M);
        parts.extend(p_vars.iter().map(|p| Formula::pmem(Term::var(p))));
        for (v, (p, q)) in &coords {
            parts.push(decomp(v, p, q));
        }
        parts.push(body.clone());
        EpfForm {
            formula: Formula::exists_many(&p_vars, Formula::and(parts)),
            vars,
            p_vars,
            body,
        }
    };
    if !equiv_pair(&out.formula, f, ctx)? {
        return Err(Error::CheckFailed(format!(
            "normal form {} is not equivalent to the input",
            out.formula
        )));
    }
    Ok(out)
}

/// A formula over `F` whose rational points are those of `f`: the union
/// of the hulls of a strong cell decomposition of `f`.
pub fn lift_trace(f: &Formula, ctx: &Context) -> Result<Formula> {
    if f.has_pmem() {
        return Err(Error::IllFormed("lift_trace expects an L-formula".into()));
    }
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    let dec = cell_decompose(f, Some(&vars), ctx)?;
    let y = or(dec.cells.iter().map(|c| c.hull(&vars)).collect());
    let y = qe_vstar(&y, ctx)?.formula;
    let rational = Formula::and(vars.iter().map(|v| Formula::pmem(Term::var(v))).collect());
    let claim = Formula::forall_many(
        &vars,
        Formula::implies(rational, Formula::iff(f.relativize_to_p(&[]), y.clone())),
    );
    if !decide_pair(&claim, ctx)? {
        return Err(Error::CheckFailed(format!(
            "lifted set {y} does not have the given trace"
        )));
    }
    Ok(y)
}

/// `max_i |x_i - y_i| < e`, as a conjunction.
pub(crate) fn near(xs: &[Var], ys: &[Var], e: &Term) -> Formula {
    let mut parts = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        let (x, y) = (Term::var(x), Term::var(y));
        parts.push(Formula::lt(x.minus(&y), e.clone()));
        parts.push(Formula::lt(y.minus(&x), e.clone()));
    }
    Formula::and(parts)
}

#[cfg(test)]
mod tests;
