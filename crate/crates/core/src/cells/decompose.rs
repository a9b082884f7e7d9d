//! Strong cell decomposition by linear cylindrical projection.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{serialize_display, BoundaryFn, StrongCell};
use crate::arith::cf::rational_between;
use crate::arith::{Config, Quad, Rat};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{eval_qf, or, Atom, Formula, LinExpr, Structure, StructureKind, Var};
use crate::qe::{decide, equiv, qe_m, qe_vstar};

/// A decomposition of the rational points of `source` into strong cells,
/// read over `vars` in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDecomp {
    pub vars: Vec<Var>,
    pub cells: Vec<StrongCell>,
    #[serde(serialize_with = "serialize_display")]
    pub source: Formula,
}

impl CellDecomp {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("decomposition serializes");
        v["schema"] = "quadcut.cells.v1".into();
        v
    }
}

/// Root functions `x_k = rho(x_1, ..., x_{k-1})`, bucketed by `k`.
struct Projection<'a> {
    vars: &'a [Var],
    roots: Vec<Vec<LinExpr>>,
    cfg: &'a Config,
}

impl Projection<'_> {
    /// Records the zero set of `e` as a root function of its last variable.
    fn add(&mut self, e: &LinExpr) {
        let Some(k) = (0..self.vars.len())
            .rev()
            .find(|&i| e.mentions(&self.vars[i]))
        else {
            return;
        };
        let x = &self.vars[k];
        let c = e.coeff(x).expect("mentioned").clone();
        let mut rest = e.clone();
        rest.coeffs.remove(x);
        let inv = c.inv(self.cfg).expect("nonzero coefficient");
        let rho = rest.scale(&(-&inv), self.cfg);
        if !self.roots[k].contains(&rho) {
            self.roots[k].push(rho);
        }
    }

    /// Closes the root sets downward: over each projected cell, the root
    /// functions of the next variable are ordered consistently and have
    /// `v` parts of constant sign.
    fn close(&mut self) {
        for k in (1..self.vars.len()).rev() {
            let rs = self.roots[k].clone();
            for (i, a) in rs.iter().enumerate() {
                for b in &rs[i + 1..] {
                    self.add(&a.minus(b));
                }
                let (_, w) = a.split();
                self.add(&w.to_lin());
            }
        }
    }
}

fn env_of(vars: &[Var], s: &[Rat]) -> BTreeMap<Var, Quad> {
    vars.iter()
        .cloned()
        .zip(s.iter().map(|r| Quad::rational(r.clone())))
        .collect()
}

/// Sorted distinct values of the root functions at `s`, each with one
/// representative function.
fn ordered_roots(roots: &[LinExpr], vars: &[Var], s: &[Rat], cfg: &Config) -> Vec<(Quad, LinExpr)> {
    let env = env_of(vars, s);
    let mut vals: Vec<(Quad, LinExpr)> = roots
        .iter()
        .map(|r| (r.eval(&env, cfg).expect("bound"), r.clone()))
        .collect();
    vals.sort_by(|a, b| a.0.cmp_in(&b.0, cfg).then_with(|| a.1.structural_cmp(&b.1)));
    vals.dedup_by(|b, a| a.0 == b.0);
    vals
}

/// Strong cells of the rational points of `f`, in variables `vars`
/// (default: the free variables in name order).
pub fn cell_decompose(f: &Formula, vars: Option<&[Var]>, ctx: &Context) -> Result<CellDecomp> {
    let free = f.free_vars();
    let vars: Vec<Var> = match vars {
        Some(v) => {
            if let Some(x) = free.iter().find(|x| !v.contains(x)) {
                return Err(Error::IllFormed(format!(
                    "free variable {x} is not among the cell variables"
                )));
            }
            v.to_vec()
        }
        None if free.is_empty() => vec!["x".to_string()],
        None => free.into_iter().collect(),
    };
    let n = vars.len();
    if n > ctx.limits.dim_limit {
        return Err(Error::DimensionLimit {
            n,
            max: ctx.limits.dim_limit,
        });
    }
    let cfg = &ctx.config;
    let g = qe_m(f, ctx)?.formula;
    let mut proj = Projection {
        vars: &vars,
        roots: vec![Vec::new(); n],
        cfg,
    };
    g.visit(&mut |h| {
        if let Formula::Atom(Atom::Lin(a)) = h {
            proj.add(&a.expr);
        }
    });
    proj.close();
    let roots = proj.roots;

    let limit = ctx.limits.branch_limit;
    let mut count = 0usize;
    let mut bump = |k: usize| -> Result<()> {
        count += k;
        if count > limit {
            Err(Error::ResourceLimit {
                what: "cells",
                limit,
            })
        } else {
            Ok(())
        }
    };

    let mut level: Vec<(StrongCell, Vec<Rat>)> =
        vec![(StrongCell::Point { coords: vec![] }, vec![])];
    for k in 0..n {
        let mut next = Vec::new();
        for (base, s) in &level {
            let rs = ordered_roots(&roots[k], &vars[..k], s, cfg);
            bump(2 * rs.len() + 1)?;
            let bf = |e: &LinExpr| BoundaryFn::from_lin(e, &vars[..k]);
            let mut lo: Option<(Quad, LinExpr)> = None;
            for r in rs.iter().map(Some).chain([None]) {
                let hi = r.cloned();
                let y = rational_between(lo.as_ref().map(|p| &p.0), hi.as_ref().map(|p| &p.0), cfg);
                let cell = if k == 0 {
                    StrongCell::interval(
                        lo.as_ref().map(|p| p.0.clone()),
                        hi.as_ref().map(|p| p.0.clone()),
                    )
                } else {
                    StrongCell::Band {
                        base: Box::new(base.clone()),
                        lo: lo.as_ref().map(|p| bf(&p.1)),
                        hi: hi.as_ref().map(|p| bf(&p.1)),
                    }
                };
                next.push((cell, [s.as_slice(), &[y]].concat()));
                let Some((val, rho)) = hi else { break };
                // Sections through irrational values carry no rational points.
                if val.is_rational() {
                    let cell = if k == 0 {
                        StrongCell::Point {
                            coords: vec![val.a.clone()],
                        }
                    } else {
                        StrongCell::Graph {
                            base: Box::new(base.clone()),
                            f: bf(&rho),
                            in_m: true,
                        }
                    };
                    next.push((cell, [s.as_slice(), std::slice::from_ref(&val.a)].concat()));
                }
                lo = Some((val, rho));
            }
        }
        level = next;
    }

    let m = Structure::m(cfg);
    let mut cells = Vec::new();
    for (cell, s) in level {
        if eval_qf(&g, &m, &env_of(&vars, &s))? {
            cells.push(cell);
        }
    }
    let mut checked: Vec<StrongCell> = Vec::new();
    for c in &cells {
        validate_cached(c, &mut checked, ctx)?;
    }
    Ok(CellDecomp {
        vars,
        cells,
        source: f.clone(),
    })
}

fn validate_cached(c: &StrongCell, done: &mut Vec<StrongCell>, ctx: &Context) -> Result<()> {
    if done.contains(c) {
        return Ok(());
    }
    if let StrongCell::Graph { base, .. } | StrongCell::Band { base, .. } = c {
        validate_cached(base, done, ctx)?;
    }
    c.validate_top(ctx)?;
    done.push(c.clone());
    Ok(())
}

/// Decides that the cells are pairwise disjoint and that their union is
/// the source set over `Q^n`.
pub fn verify_partition(dec: &CellDecomp, ctx: &Context) -> Result<bool> {
    let hulls: Vec<Formula> = dec.cells.iter().map(|c| c.hull(&dec.vars)).collect();
    for (i, a) in hulls.iter().enumerate() {
        for b in &hulls[i + 1..] {
            let meet = Formula::exists_many(&dec.vars, Formula::and(vec![a.clone(), b.clone()]));
            if decide(&meet, StructureKind::M, ctx)? {
                return Ok(false);
            }
        }
    }
    equiv(&or(hulls), &dec.source, StructureKind::M, ctx)
}

/// The closure in `F^n` of the rational points of `f`: the union of the
/// closures of the cells of a decomposition.
pub fn closure_set(f: &Formula, vars: Option<&[Var]>, ctx: &Context) -> Result<Formula> {
    let dec = cell_decompose(f, vars, ctx)?;
    let u = Formula::or(dec.cells.iter().map(|c| c.closure(&dec.vars)).collect());
    Ok(qe_vstar(&u, ctx)?.formula)
}
