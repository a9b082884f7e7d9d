//! Closures of pair-definable sets and the reduction of open ones to the
//! completion.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{decide_pair, equiv_pair, near, trace, CoordFormula, Interp};
use crate::cells::{closure_set, serialize_display};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{Formula, StructureKind, Term, Var};
use crate::qe::{dnf, qe_m, qe_vstar, to_surface};

const MAX_DIM: usize = 2;

fn free_upto(f: &Formula, max: usize) -> Result<Vec<Var>> {
    let vars: Vec<Var> = f.free_vars().into_iter().collect();
    if vars.len() > max {
        return Err(Error::DimensionLimit { n: vars.len(), max });
    }
    Ok(vars)
}

/// The closure in `F^n` of the set `f` defines, over the coordinates of
/// its free variables. The closure formula is eliminated one disjunct of
/// the interpreted set at a time.
pub fn topo_pair(f: &Formula, ctx: &Context) -> Result<CoordFormula> {
    let vars = free_upto(f, MAX_DIM)?;
    let cfg = &ctx.config;
    let mut it = Interp::new(f, cfg);
    let mut xs = Vec::new();
    for v in &vars {
        let (a, b) = it.double(v);
        xs.push((a, b));
    }
    let coords = it.coords(&vars);
    let psi = qe_m(&it.translate(f)?, ctx)?.formula;

    let e = it.fresh("e");
    let ys: Vec<Var> = vars.iter().map(|v| it.fresh(&format!("{v}_"))).collect();
    let (e1, e2) = it.double(&e);
    let mut y_coords = Vec::new();
    let mut rename = BTreeMap::new();
    for (y, (a, b)) in ys.iter().zip(&xs) {
        let (y1, y2) = it.double(y);
        rename.insert(a.clone(), Term::var(&y1));
        rename.insert(b.clone(), Term::var(&y2));
        y_coords.push(y1);
        y_coords.push(y2);
    }
    let e_pos = it.translate(&Formula::lt(Term::zero(), Term::var(&e)))?;
    let close = it.translate(&near(&vars, &ys, &Term::var(&e)))?;

    let mut parts = Vec::new();
    for c in dnf(&psi, StructureKind::M, ctx)? {
        let piece = Formula::and(c.into_atoms().into_iter().map(Formula::lin).collect());
        let moved = piece.substitute(&rename, cfg);
        let g = Formula::forall_many(
            &[e1.clone(), e2.clone()],
            Formula::implies(
                e_pos.clone(),
                Formula::exists_many(&y_coords, Formula::and(vec![moved, close.clone()])),
            ),
        );
        parts.push(qe_m(&g, ctx)?.formula);
    }
    let out = qe_m(&Formula::or(parts), ctx)?.formula;
    Ok(CoordFormula {
        formula: to_surface(&out, StructureKind::M),
        coords,
    })
}

/// An open pair-definable set written over the completion, with the
/// intermediate sets of the reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenCore {
    pub vars: Vec<Var>,
    /// The closure of the set, from its trace.
    #[serde(serialize_with = "serialize_display")]
    pub closure: Formula,
    /// `{(x, t) : t <= d(x, C)}` for the complement `C`.
    #[serde(serialize_with = "serialize_display")]
    pub distance: Formula,
    #[serde(serialize_with = "serialize_display")]
    pub formula: Formula,
}

/// Rewrites an open pair-definable set as a quantifier-free formula over
/// `F`. The complement `C` is closed, so it is the zero set of the
/// distance `d(x, C)` in the sup norm; the region below the graph of the
/// distance is the closure of an open set, which the trace determines.
pub fn extract_open_core(f: &Formula, ctx: &Context) -> Result<OpenCore> {
    let vars = free_upto(f, MAX_DIM)?;
    let cfg = &ctx.config;
    let mut avoid = f.all_vars();
    let mut fresh = |base: &str| {
        let v = crate::formula::fresh_name(base, &avoid);
        avoid.insert(v.clone());
        v
    };
    let ys: Vec<Var> = vars.iter().map(|v| fresh(&format!("{v}_"))).collect();
    let e = fresh("e");
    let t = fresh("t");
    let rename: BTreeMap<Var, Term> = vars
        .iter()
        .cloned()
        .zip(ys.iter().map(|y| Term::var(y)))
        .collect();
    let at_y = f.substitute(&rename, cfg);

    let interior = Formula::forall_many(
        &vars,
        Formula::implies(
            f.clone(),
            Formula::exists(
                &e,
                Formula::and(vec![
                    Formula::lt(Term::zero(), Term::var(&e)),
                    Formula::forall_many(
                        &ys,
                        Formula::implies(near(&vars, &ys, &Term::var(&e)), at_y.clone()),
                    ),
                ]),
            ),
        ),
    );
    if !decide_pair(&interior, ctx)? {
        return Err(Error::NotOpen);
    }

    let closure = closure_set(&trace(f, ctx)?, Some(&vars), ctx)?;

    // t < d(x, C): every point of the complement is farther than t.
    let far = Formula::not(near(&vars, &ys, &Term::var(&t)));
    let below = Formula::forall_many(&ys, Formula::implies(Formula::not(at_y), far));
    let mut xt = vars.clone();
    xt.push(t.clone());
    let distance = closure_set(&trace(&below, ctx)?, Some(&xt), ctx)?;
    let core = Formula::exists(
        &t,
        Formula::and(vec![
            Formula::lt(Term::zero(), Term::var(&t)),
            distance.clone(),
        ]),
    );
    let formula = qe_vstar(&core, ctx)?.formula;
    if !equiv_pair(&formula, f, ctx)? {
        return Err(Error::CheckFailed(format!(
            "{formula} does not define the input set"
        )));
    }
    Ok(OpenCore {
        vars,
        closure,
        distance,
        formula,
    })
}
