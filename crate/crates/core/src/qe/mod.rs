//! Quantifier elimination over `F` and over `Q`, back-translation into the
//! surface language, and sentence decision.

mod engine;
mod linear;
mod lra;
mod smt;

use serde::Serialize;

pub use engine::canonical_order;
pub use linear::Clause;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::formula::{
    and, eval_qf, or, Atom, Formula, LinAtom, Rel, Structure, StructureKind, Term,
};
use engine::{Domain, Engine};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QeStats {
    /// DNF branches explored.
    pub branches: usize,
    /// Atoms in the output.
    pub atoms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QeResult {
    /// Quantifier-free, over canonical linear atoms.
    pub formula: Formula,
    pub stats: QeStats,
}

fn run(f: &Formula, dom: Domain, ctx: &Context) -> Result<QeResult> {
    if f.has_pmem() {
        return Err(Error::IllFormed(
            "the predicate P cannot be eliminated here; interpret the pair formula first".into(),
        ));
    }
    let mut eng = Engine::new(&ctx.config, dom, ctx.limits.branch_limit);
    let g = eng.prep(f);
    let r = eng.elim(&g)?;
    let formula = eng.simplify(r);
    let formula = polish(formula, &mut eng);
    let stats = QeStats {
        branches: eng.branches,
        atoms: formula.atom_count(),
    };
    Ok(QeResult { formula, stats })
}

/// Eliminates quantifiers with variables ranging over `F`.
pub fn qe_vstar(f: &Formula, ctx: &Context) -> Result<QeResult> {
    run(f, Domain::F, ctx)
}

/// Eliminates quantifiers with variables ranging over `Q`.
pub fn qe_m(f: &Formula, ctx: &Context) -> Result<QeResult> {
    run(f, Domain::Q, ctx)
}

pub fn qe(f: &Formula, kind: StructureKind, ctx: &Context) -> Result<QeResult> {
    match kind {
        StructureKind::M => qe_m(f, ctx),
        StructureKind::Vstar => qe_vstar(f, ctx),
        StructureKind::Pair => Err(Error::IllFormed(
            "pair formulas are decided through their interpretation".into(),
        )),
    }
}

/// Disjunctive forms at most this long are tried as the output.
const POLISH_CLAUSES: usize = 64;

/// Replaces `f` by its pruned disjunctive form when that is smaller; this
/// also recognizes unsatisfiable outputs that contextual simplification
/// leaves alone, such as `x <= 1 & 1 <= x & ~x = 1`.
fn polish(f: Formula, eng: &mut Engine) -> Formula {
    if matches!(f, Formula::True | Formula::False | Formula::Atom(_)) {
        return f;
    }
    let Ok(mut cs) = dnf_of(&f, eng, POLISH_CLAUSES) else {
        return f;
    };
    if cs.len() > POLISH_CLAUSES {
        return f;
    }
    cs.sort_by_key(Clause::len);
    let mut kept: Vec<Clause> = Vec::new();
    for c in cs {
        if !kept
            .iter()
            .any(|k| k.atoms().iter().all(|a| c.atoms().contains(a)))
        {
            kept.push(c);
        }
    }
    let g = or(kept
        .into_iter()
        .map(|c| and(c.into_atoms().into_iter().map(Formula::lin).collect()))
        .collect());
    let g = eng.simplify(g);
    if g.atom_count() < f.atom_count() {
        g
    } else {
        f
    }
}

/// The satisfiable disjuncts of a disjunctive normal form of the
/// quantifier-free `f`, read over `F` (kind `Vstar`) or `Q` (kind `M`).
pub fn dnf(f: &Formula, kind: StructureKind, ctx: &Context) -> Result<Vec<Clause>> {
    if !f.is_quantifier_free() {
        return Err(Error::NotQuantifierFree);
    }
    if f.has_pmem() {
        return Err(Error::IllFormed(
            "the predicate P has no linear normal form".into(),
        ));
    }
    let dom = match kind {
        StructureKind::M => Domain::Q,
        _ => Domain::F,
    };
    let limit = ctx.limits.branch_limit;
    let mut eng = Engine::new(&ctx.config, dom, limit);
    let g = eng.prep(f);
    let mut out = dnf_of(&g, &mut eng, limit)?;
    out.dedup();
    Ok(out)
}

fn dnf_of(f: &Formula, eng: &mut Engine, limit: usize) -> Result<Vec<Clause>> {
    let cfg = eng.config();
    Ok(match f {
        Formula::True => vec![Clause::new()],
        Formula::False => vec![],
        Formula::Atom(Atom::Lin(a)) => Clause::from_atoms([a], cfg).into_iter().collect(),
        Formula::Or(v) => {
            let mut out = Vec::new();
            for g in v {
                out.extend(dnf_of(g, eng, limit)?);
            }
            out
        }
        Formula::And(v) => {
            let mut acc = vec![Clause::new()];
            for g in v {
                let parts = dnf_of(g, eng, limit)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &parts {
                        let mut c = a.clone();
                        if b.atoms().iter().all(|x| c.insert(x.clone(), cfg)) && eng.feasible(&c) {
                            next.push(c);
                        }
                    }
                }
                if next.len() > limit {
                    return Err(Error::ResourceLimit {
                        what: "DNF branches",
                        limit,
                    });
                }
                acc = next;
            }
            acc
        }
        other => {
            return Err(Error::IllFormed(format!(
                "expected linear atoms, found {other}"
            )))
        }
    })
}

/// `lhs < rhs` (or `=`) for a rational-linear `t`, with negative terms
/// moved to the right so the atom reads naturally.
fn surface_cmp(t: &Term, rel: Rel) -> Formula {
    let mut lhs = Term::zero();
    let mut rhs = Term::rat(-t.constant.a.clone());
    for (v, c) in &t.coeffs {
        if c.signum() > 0 {
            lhs.add_var(v, c);
        } else {
            rhs.add_var(v, &-c);
        }
    }
    if lhs.is_ground() && !rhs.is_ground() {
        // keep a variable on the left: c < t becomes -t < -c
        std::mem::swap(&mut lhs, &mut rhs);
        lhs = lhs.scale(&-crate::arith::Rat::one());
        rhs = rhs.scale(&-crate::arith::Rat::one());
    }
    match rel {
        Rel::Lt => Formula::lt(lhs, rhs),
        Rel::Eq => Formula::eq(lhs, rhs),
    }
}

fn surface_atom(a: &LinAtom, kind: StructureKind) -> Formula {
    let (u, w) = a.expr.split();
    let neg = |t: &Term| t.scale(&-crate::arith::Rat::one());
    match a.rel {
        Rel::Lt if w.is_zero() => surface_cmp(&u, Rel::Lt),
        // u + rt*w < 0 iff u < rt*(-w)
        Rel::Lt => Formula::psq(neg(&w), u),
        Rel::Eq if w.is_zero() => surface_cmp(&u, Rel::Eq),
        Rel::Eq => match kind {
            StructureKind::M => and(vec![surface_cmp(&u, Rel::Eq), surface_cmp(&w, Rel::Eq)]),
            _ => and(vec![
                Formula::not(Formula::psq(neg(&w), u.clone())),
                Formula::not(Formula::psq(w, neg(&u))),
            ]),
        },
    }
}

/// Rewrites every linear atom `u + rt*v ~ 0` into the signature of L:
/// strict atoms become `P2(-v, u)`; equalities become `u = 0 & v = 0` over
/// `M` and the trichotomy form `~P2(-v, u) & ~P2(v, -u)` otherwise.
pub fn to_surface(f: &Formula, kind: StructureKind) -> Formula {
    match f {
        Formula::Atom(Atom::Lin(a)) => surface_atom(a, kind),
        Formula::Not(g) => Formula::not(to_surface(g, kind)),
        Formula::And(v) => Formula::And(v.iter().map(|g| to_surface(g, kind)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|g| to_surface(g, kind)).collect()),
        Formula::Implies(a, b) => Formula::implies(to_surface(a, kind), to_surface(b, kind)),
        Formula::Iff(a, b) => Formula::iff(to_surface(a, kind), to_surface(b, kind)),
        Formula::Exists(v, g) => Formula::exists(v, to_surface(g, kind)),
        Formula::Forall(v, g) => Formula::forall(v, to_surface(g, kind)),
        other => other.clone(),
    }
}

fn check_sentence(f: &Formula) -> Result<()> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::NotASentence(free.into_iter().collect()));
    }
    Ok(())
}

/// Truth of a sentence in `M` or in the completion.
pub fn decide(sentence: &Formula, kind: StructureKind, ctx: &Context) -> Result<bool> {
    check_sentence(sentence)?;
    let r = qe(sentence, kind, ctx)?;
    let s = Structure::new(kind, ctx.config.clone());
    eval_qf(&r.formula, &s, &Default::default())
}

/// Whether `f` and `g` define the same set in the given structure.
/// Each inclusion is decided on its own, which keeps the disjunctive forms
/// of the two differences apart.
pub fn equiv(f: &Formula, g: &Formula, kind: StructureKind, ctx: &Context) -> Result<bool> {
    let differs = |a: &Formula, b: &Formula| {
        let diff = Formula::and(vec![a.clone(), Formula::not(b.clone())]);
        decide(&diff.existential_closure(), kind, ctx)
    };
    Ok(!differs(f, g)? && !differs(g, f)?)
}

#[cfg(test)]
mod tests;
