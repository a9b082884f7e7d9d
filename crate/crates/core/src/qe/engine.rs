use std::collections::HashMap;

use super::linear::Clause;
use super::smt::Skeleton;
use crate::arith::Config;
use crate::error::{Error, Result};
use crate::formula::{and, normalize, or, Atom, Formula, LinAtom, Rel, Var};

/// Where the variables live. Over `Q` every equality is first split into
/// its rational and irrational parts; after that, satisfiability over `Q`
/// and over `F` coincide (a relatively open piece of a rational affine
/// subspace has rational points as soon as it is nonempty).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Q,
    F,
}

pub struct Engine<'a> {
    cfg: &'a Config,
    dom: Domain,
    limit: usize,
    pub branches: usize,
    cache: HashMap<Vec<LinAtom>, bool>,
}

impl<'a> Engine<'a> {
    pub fn new(cfg: &'a Config, dom: Domain, limit: usize) -> Self {
        Engine {
            cfg,
            dom,
            limit,
            branches: 0,
            cache: HashMap::new(),
        }
    }

    pub fn config(&self) -> &'a Config {
        self.cfg
    }

    /// Normal form used throughout: NNF over canonical atoms, and over `Q`
    /// only rational equalities.
    pub fn prep(&self, f: &Formula) -> Formula {
        let n = normalize(f, self.cfg);
        match self.dom {
            Domain::F => n,
            Domain::Q => self.split_eqs(n),
        }
    }

    fn split_eqs(&self, f: Formula) -> Formula {
        match f {
            Formula::Atom(Atom::Lin(a)) if a.rel == Rel::Eq && !a.expr.is_rational() => {
                let (u, w) = a.expr.split();
                normalize(
                    &and(vec![Formula::eq0(u.to_lin()), Formula::eq0(w.to_lin())]),
                    self.cfg,
                )
            }
            Formula::And(fs) => and(fs.into_iter().map(|g| self.split_eqs(g)).collect()),
            Formula::Or(fs) => or(fs.into_iter().map(|g| self.split_eqs(g)).collect()),
            Formula::Exists(v, g) => Formula::exists(&v, self.split_eqs(*g)),
            Formula::Forall(v, g) => Formula::forall(&v, self.split_eqs(*g)),
            other => other,
        }
    }

    pub fn negate(&self, f: &Formula) -> Formula {
        self.prep(&Formula::not(f.clone()))
    }

    /// Eliminates all quantifiers of a prepared formula, innermost first.
    pub fn elim(&mut self, f: &Formula) -> Result<Formula> {
        match f {
            Formula::Exists(..) | Formula::Forall(..) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut vars = Vec::new();
                let mut body = f;
                while let (Formula::Exists(v, b), false) | (Formula::Forall(v, b), true) =
                    (body, universal)
                {
                    vars.push(v.clone());
                    body = b;
                }
                let inner = self.elim(body)?;
                if universal {
                    let neg = self.negate(&inner);
                    let r = self.exists_block(&vars, neg)?;
                    Ok(self.negate(&r))
                } else {
                    self.exists_block(&vars, inner)
                }
            }
            Formula::And(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for g in fs {
                    let e = self.elim(g)?;
                    if e == Formula::False {
                        return Ok(Formula::False);
                    }
                    out.push(e);
                }
                Ok(and(out))
            }
            Formula::Or(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for g in fs {
                    let e = self.elim(g)?;
                    if e == Formula::True {
                        return Ok(Formula::True);
                    }
                    out.push(e);
                }
                Ok(or(out))
            }
            other => Ok(other.clone()),
        }
    }

    /// `exists vars. phi` for quantifier-free prepared `phi`.
    ///
    /// The projection is built piece by piece: search for a satisfiable
    /// conjunction of literals of `phi` lying outside the pieces found so
    /// far, and add its projection. Each piece covers a new point, and
    /// there are finitely many conjunctions, so this stops; usually long
    /// before the disjunctive form of `phi` is exhausted.
    pub fn exists_block(&mut self, vars: &[Var], phi: Formula) -> Result<Formula> {
        let phi = self.simplify(phi);
        let mentions = |g: &Formula| {
            let fv = g.free_vars();
            vars.iter().any(|v| fv.contains(v))
        };
        let conjuncts = match phi {
            Formula::And(v) => v,
            other => vec![other],
        };
        let (inside, outside): (Vec<Formula>, Vec<Formula>) =
            conjuncts.into_iter().partition(|g| mentions(g));
        if inside.is_empty() {
            return Ok(and(outside));
        }
        let mut sk = Skeleton::new(self.cfg);
        for g in &inside {
            sk.add(g, true)?;
        }
        let mut pieces: Vec<Formula> = Vec::new();
        while let Some(own) = sk.next(&mut self.branches, self.limit)? {
            let rest = own.eliminate(vars, self.cfg).ok_or_else(|| {
                Error::CheckFailed("a satisfiable conjunction has an empty projection".into())
            })?;
            let piece = and(rest.into_atoms().into_iter().map(Formula::lin).collect());
            if piece == Formula::True {
                pieces = vec![piece];
                break;
            }
            sk.add(&self.negate(&piece), false)?;
            pieces.push(piece);
        }
        let mut parts = outside;
        parts.push(or(pieces));
        Ok(self.simplify(and(parts)))
    }

    pub fn feasible(&mut self, c: &Clause) -> bool {
        let key = c.sorted_atoms();
        if let Some(&b) = self.cache.get(&key) {
            return b;
        }
        let b = c.feasible(self.cfg);
        self.cache.insert(key, b);
        b
    }

    fn with(&mut self, ctx: &Clause, atoms: &[LinAtom]) -> bool {
        let mut c = ctx.clone();
        for a in atoms {
            if !c.insert(a.clone(), self.cfg) {
                return false;
            }
        }
        self.feasible(&c)
    }

    /// Literals of the negation of an atom, as alternatives.
    fn negation(&self, a: &LinAtom) -> Vec<Vec<LinAtom>> {
        let e = &a.expr;
        match a.rel {
            Rel::Lt => {
                let eqs = match self.dom {
                    Domain::Q if !e.is_rational() => {
                        let (u, w) = e.split();
                        vec![LinAtom::eq(u.to_lin()), LinAtom::eq(w.to_lin())]
                    }
                    _ => vec![LinAtom::eq(e.clone())],
                };
                vec![vec![LinAtom::lt(e.neg())], eqs]
            }
            Rel::Eq => vec![vec![LinAtom::lt(e.clone())], vec![LinAtom::lt(e.neg())]],
        }
    }

    fn entails(&mut self, ctx: &Clause, a: &LinAtom) -> bool {
        self.negation(a).iter().all(|alt| !self.with(ctx, alt))
    }

    /// Contextual simplification: atoms implied by or inconsistent with the
    /// surrounding conjunction are folded, redundant conjuncts and
    /// subsumed disjuncts dropped, and children put in a canonical order.
    pub fn simplify(&mut self, f: Formula) -> Formula {
        let g = self.simp(f, &Clause::new());
        canonical_order(g)
    }

    fn simp(&mut self, f: Formula, ctx: &Clause) -> Formula {
        match f {
            Formula::Atom(Atom::Lin(a)) => {
                if !self.with(ctx, std::slice::from_ref(&a)) {
                    Formula::False
                } else if self.entails(ctx, &a) {
                    Formula::True
                } else {
                    Formula::lin(a)
                }
            }
            Formula::And(parts) => {
                let (atoms, others): (Vec<Formula>, Vec<Formula>) = parts
                    .into_iter()
                    .partition(|g| matches!(g, Formula::Atom(Atom::Lin(_))));
                let mut inner = ctx.clone();
                let mut kept: Vec<LinAtom> = Vec::new();
                for g in atoms {
                    let Formula::Atom(Atom::Lin(a)) = g else {
                        unreachable!()
                    };
                    if !inner.insert(a.clone(), self.cfg) {
                        return Formula::False;
                    }
                    kept.push(a);
                }
                if !self.feasible(&inner) {
                    return Formula::False;
                }
                let mut i = 0;
                while i < kept.len() {
                    let mut others_ctx = ctx.clone();
                    for (j, b) in kept.iter().enumerate() {
                        if j != i {
                            others_ctx.insert(b.clone(), self.cfg);
                        }
                    }
                    if self.entails(&others_ctx, &kept[i]) {
                        kept.remove(i);
                    } else {
                        i += 1;
                    }
                }
                let mut out: Vec<Formula> = kept.into_iter().map(Formula::lin).collect();
                for g in others {
                    let s = self.simp(g, &inner);
                    if s == Formula::False {
                        return Formula::False;
                    }
                    out.push(s);
                }
                and(out)
            }
            Formula::Or(parts) => {
                let mut out = Vec::new();
                for g in parts {
                    let s = self.simp(g, ctx);
                    if s == Formula::True {
                        return Formula::True;
                    }
                    out.push(s);
                }
                or(drop_subsumed(out))
            }
            other => other,
        }
    }
}

fn conj_atoms(f: &Formula) -> Option<Vec<&LinAtom>> {
    match f {
        Formula::Atom(Atom::Lin(a)) => Some(vec![a]),
        Formula::And(v) => v
            .iter()
            .map(|g| match g {
                Formula::Atom(Atom::Lin(a)) => Some(a),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

/// In a disjunction, a conjunction of atoms containing all atoms of
/// another disjunct is redundant.
fn drop_subsumed(parts: Vec<Formula>) -> Vec<Formula> {
    let sets: Vec<Option<Vec<&LinAtom>>> = parts.iter().map(conj_atoms).collect();
    let mut keep = vec![true; parts.len()];
    for i in 0..parts.len() {
        let Some(si) = &sets[i] else { continue };
        for j in 0..parts.len() {
            if i == j || !keep[j] {
                continue;
            }
            let Some(sj) = &sets[j] else { continue };
            let subset = sj.iter().all(|a| si.contains(a));
            if subset && (sj.len() < si.len() || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    parts
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// Sorts the children of every conjunction and disjunction so that the
/// output does not depend on the order in which branches were explored.
pub fn canonical_order(f: Formula) -> Formula {
    let is_and = matches!(f, Formula::And(_));
    match f {
        Formula::And(v) | Formula::Or(v) if v.len() > 1 => {
            let mut kids: Vec<(String, Formula)> = v
                .into_iter()
                .map(canonical_order)
                .map(|g| (g.to_string(), g))
                .collect();
            kids.sort_by(|a, b| a.0.cmp(&b.0));
            let kids = kids.into_iter().map(|(_, g)| g).collect();
            if is_and {
                Formula::And(kids)
            } else {
                Formula::Or(kids)
            }
        }
        Formula::Not(g) => Formula::not(canonical_order(*g)),
        Formula::Exists(v, g) => Formula::exists(&v, canonical_order(*g)),
        Formula::Forall(v, g) => Formula::forall(&v, canonical_order(*g)),
        other => other,
    }
}
