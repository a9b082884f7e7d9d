use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::term::{LinAtom, LinExpr, Term, Var};
use crate::arith::Config;
use crate::error::{Error, Result};

/// The three signatures: L (ordered Q-vector space with `P2`), L* (its
/// completion over `F`, same symbols) and L^P (L* plus the unary `P`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lang {
    L,
    Lstar,
    LP,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Lt(Term, Term),
    Le(Term, Term),
    Eq(Term, Term),
    /// `P2(s, t)`: `t < sqrt(d) * s`.
    Psq(Term, Term),
    /// `P(t)`: `t` lies in the rational subspace.
    PMem(Term),
    Lin(LinAtom),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[allow(clippy::large_enum_variant)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn lin(a: LinAtom) -> Self {
        Formula::Atom(Atom::Lin(a))
    }

    /// `e < 0`
    pub fn lt0(e: LinExpr) -> Self {
        Formula::lin(LinAtom::lt(e))
    }

    /// `e = 0`
    pub fn eq0(e: LinExpr) -> Self {
        Formula::lin(LinAtom::eq(e))
    }

    /// `e <= 0`
    pub fn le0(e: LinExpr) -> Self {
        Formula::Or(vec![Formula::lt0(e.clone()), Formula::eq0(e)])
    }

    pub fn lt(s: Term, t: Term) -> Self {
        Formula::Atom(Atom::Lt(s, t))
    }

    pub fn eq(s: Term, t: Term) -> Self {
        Formula::Atom(Atom::Eq(s, t))
    }

    pub fn psq(s: Term, t: Term) -> Self {
        Formula::Atom(Atom::Psq(s, t))
    }

    pub fn pmem(t: Term) -> Self {
        Formula::Atom(Atom::PMem(t))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::True,
            1 => fs.into_iter().next().expect("len 1"),
            _ => Formula::And(fs),
        }
    }

    pub fn or(fs: Vec<Formula>) -> Self {
        match fs.len() {
            0 => Formula::False,
            1 => fs.into_iter().next().expect("len 1"),
            _ => Formula::Or(fs),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn exists_many(vs: &[Var], f: Formula) -> Self {
        vs.iter().rev().fold(f, |acc, v| Formula::exists(v, acc))
    }

    pub fn forall_many(vs: &[Var], f: Formula) -> Self {
        vs.iter().rev().fold(f, |acc, v| Formula::forall(v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut add = |vs: &mut dyn Iterator<Item = &Var>, bound: &Vec<Var>| {
            for v in vs {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => match a {
                Atom::Lt(s, t) | Atom::Le(s, t) | Atom::Eq(s, t) | Atom::Psq(s, t) => {
                    add(&mut s.vars().chain(t.vars()), bound)
                }
                Atom::PMem(t) => add(&mut t.vars(), bound),
                Atom::Lin(l) => add(&mut l.expr.vars(), bound),
            },
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            Formula::Atom(a) => {
                out.extend(a.vars());
            }
            _ => {}
        });
        out
    }

    pub fn visit(&self, g: &mut dyn FnMut(&Formula)) {
        g(self);
        match self {
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.visit(g),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit(g)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(g);
                b.visit(g);
            }
            _ => {}
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn has_pmem(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(Atom::PMem(_))) {
                found = true;
            }
        });
        found
    }

    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(_)) {
                n += 1;
            }
        });
        n
    }

    /// Checks that the formula only uses symbols of `lang`: `P` only in
    /// L^P, and in L every term constant is rational.
    pub fn check_lang(&self, lang: Lang) -> Result<()> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            if let Formula::Atom(a) = f {
                if matches!(a, Atom::PMem(_)) && lang != Lang::LP {
                    err = Some(Error::IllFormed(
                        "the predicate P is only available in L^P".into(),
                    ));
                }
                if lang == Lang::L {
                    for t in a.terms() {
                        if !t.constant.is_rational() {
                            err = Some(Error::IllFormed(format!(
                                "irrational constant {} is not allowed in L",
                                t.constant
                            )));
                        }
                    }
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Capture-avoiding simultaneous substitution of terms for free
    /// variables.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Term>, cfg: &Config) -> Formula {
        if bindings.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.substitute(bindings, cfg)),
            Formula::Not(f) => Formula::not(f.substitute(bindings, cfg)),
            Formula::And(fs) => {
                Formula::And(fs.iter().map(|f| f.substitute(bindings, cfg)).collect())
            }
            Formula::Or(fs) => {
                Formula::Or(fs.iter().map(|f| f.substitute(bindings, cfg)).collect())
            }
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(bindings, cfg), b.substitute(bindings, cfg))
            }
            Formula::Iff(a, b) => {
                Formula::iff(a.substitute(bindings, cfg), b.substitute(bindings, cfg))
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let is_exists = matches!(self, Formula::Exists(..));
                let mut inner = bindings.clone();
                inner.remove(v);
                let body_free = f.free_vars();
                inner.retain(|k, _| body_free.contains(k));
                let captures = inner.values().any(|t| t.coeffs.contains_key(v));
                let (v2, body) = if captures {
                    let mut avoid = f.all_vars();
                    for t in inner.values() {
                        avoid.extend(t.vars().cloned());
                    }
                    avoid.extend(inner.keys().cloned());
                    let fresh = fresh_name(v, &avoid);
                    let mut rename = BTreeMap::new();
                    rename.insert(v.clone(), Term::var(&fresh));
                    (fresh, f.substitute(&rename, cfg))
                } else {
                    (v.clone(), (**f).clone())
                };
                let body = body.substitute(&inner, cfg);
                if is_exists {
                    Formula::exists(&v2, body)
                } else {
                    Formula::forall(&v2, body)
                }
            }
        }
    }

    pub fn substitute_one(&self, v: &str, t: Term, cfg: &Config) -> Formula {
        let mut b = BTreeMap::new();
        b.insert(v.to_string(), t);
        self.substitute(&b, cfg)
    }

    /// Universal closure over the free variables (in name order).
    pub fn universal_closure(&self) -> Formula {
        let vs: Vec<Var> = self.free_vars().into_iter().collect();
        Formula::forall_many(&vs, self.clone())
    }

    pub fn existential_closure(&self) -> Formula {
        let vs: Vec<Var> = self.free_vars().into_iter().collect();
        Formula::exists_many(&vs, self.clone())
    }

    /// Relativizes every quantifier to `P` and conjoins `P(v)` for the
    /// given free variables: the L^P formula whose points are the rational
    /// points of `self` read in L.
    pub fn relativize_to_p(&self, free: &[Var]) -> Formula {
        let mut parts: Vec<Formula> = free.iter().map(|v| Formula::pmem(Term::var(v))).collect();
        parts.push(self.relativized());
        Formula::and(parts)
    }

    fn relativized(&self) -> Formula {
        match self {
            Formula::Exists(v, f) => Formula::exists(
                v,
                Formula::And(vec![Formula::pmem(Term::var(v)), f.relativized()]),
            ),
            Formula::Forall(v, f) => Formula::forall(
                v,
                Formula::implies(Formula::pmem(Term::var(v)), f.relativized()),
            ),
            Formula::Not(f) => Formula::not(f.relativized()),
            Formula::And(fs) => Formula::And(fs.iter().map(Formula::relativized).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(Formula::relativized).collect()),
            Formula::Implies(a, b) => Formula::implies(a.relativized(), b.relativized()),
            Formula::Iff(a, b) => Formula::iff(a.relativized(), b.relativized()),
            _ => self.clone(),
        }
    }
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Lt(s, t) | Atom::Le(s, t) | Atom::Eq(s, t) | Atom::Psq(s, t) => vec![s, t],
            Atom::PMem(t) => vec![t],
            Atom::Lin(_) => vec![],
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Atom::Lin(l) => l.vars(),
            _ => self
                .terms()
                .into_iter()
                .flat_map(|t| t.vars().cloned())
                .collect(),
        }
    }

    pub fn substitute(&self, b: &BTreeMap<Var, Term>, cfg: &Config) -> Atom {
        let st = |t: &Term| subst_term(t, b);
        match self {
            Atom::Lt(s, t) => Atom::Lt(st(s), st(t)),
            Atom::Le(s, t) => Atom::Le(st(s), st(t)),
            Atom::Eq(s, t) => Atom::Eq(st(s), st(t)),
            Atom::Psq(s, t) => Atom::Psq(st(s), st(t)),
            Atom::PMem(t) => Atom::PMem(st(t)),
            Atom::Lin(l) => {
                let mut e = LinExpr::constant(l.expr.constant.clone());
                for (v, c) in &l.expr.coeffs {
                    match b.get(v) {
                        Some(t) => e = e.plus(&t.to_lin().scale(c, cfg)),
                        None => e.add_term(v, c),
                    }
                }
                Atom::Lin(LinAtom {
                    expr: e,
                    rel: l.rel,
                })
            }
        }
    }
}

fn subst_term(t: &Term, b: &BTreeMap<Var, Term>) -> Term {
    let mut out = Term::constant(t.constant.clone());
    for (v, c) in &t.coeffs {
        match b.get(v) {
            Some(r) => out = out.plus(&r.scale(c)),
            None => out.add_var(v, c),
        }
    }
    out
}

/// `base` if unused, otherwise `base_1`, `base_2`, ...
pub fn fresh_name(base: &str, avoid: &BTreeSet<Var>) -> Var {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !avoid.contains(n))
        .expect("infinitely many candidates")
}
