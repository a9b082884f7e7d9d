//! Conjunctions of linear atoms with `F` coefficients: cheap redundancy
//! handling on insertion and Fourier-Motzkin projection.

use std::collections::BTreeMap;

use super::lra::{self, Kind, Lra};
use crate::arith::{Config, Quad};
use crate::formula::{Canon, LinAtom, LinExpr, Rel, Var};

/// Clauses up to this size are projected and tested by elimination alone.
const SMALL: usize = 6;

/// A conjunction of canonical atoms in which no two atoms share a linear
/// part, so parallel constraints are merged into the tightest one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Clause {
    atoms: Vec<LinAtom>,
}

fn negated(c: &BTreeMap<Var, Quad>) -> BTreeMap<Var, Quad> {
    c.iter().map(|(v, q)| (v.clone(), -q)).collect()
}

fn system(atoms: &[LinAtom]) -> Vec<(LinExpr, Kind)> {
    atoms
        .iter()
        .map(|a| {
            let k = match a.rel {
                Rel::Lt => Kind::Lt,
                Rel::Eq => Kind::Eq,
            };
            (a.expr.clone(), k)
        })
        .collect()
}

impl Clause {
    pub fn new() -> Self {
        Clause::default()
    }

    /// Builds a clause, or `None` if the atoms are visibly contradictory.
    pub fn from_atoms<'a>(
        atoms: impl IntoIterator<Item = &'a LinAtom>,
        cfg: &Config,
    ) -> Option<Self> {
        let mut c = Clause::new();
        for a in atoms {
            if !c.insert(a.clone(), cfg) {
                return None;
            }
        }
        Some(c)
    }

    pub fn atoms(&self) -> &[LinAtom] {
        &self.atoms
    }

    pub fn into_atoms(self) -> Vec<LinAtom> {
        self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn sorted_atoms(&self) -> Vec<LinAtom> {
        let mut v = self.atoms.clone();
        v.sort();
        v
    }

    /// Adds an atom. Returns `false` when the clause became unsatisfiable
    /// by a parallel-constraint argument (the clause is then unusable).
    pub fn insert(&mut self, a: LinAtom, cfg: &Config) -> bool {
        let a = match a.canonical(cfg) {
            Canon::True => return true,
            Canon::False => return false,
            Canon::Atom(a) => a,
        };
        let neg = negated(&a.expr.coeffs);
        let ca = a.expr.constant.clone();
        let mut i = 0;
        while i < self.atoms.len() {
            let b = &self.atoms[i];
            let cb = &b.expr.constant;
            let same = b.expr.coeffs == a.expr.coeffs;
            let opposite = !same && b.expr.coeffs == neg;
            if !same && !opposite {
                i += 1;
                continue;
            }
            match (a.rel, b.rel, same) {
                (Rel::Lt, Rel::Lt, true) => {
                    if cb.lt(&ca, cfg) {
                        self.atoms[i] = a;
                    }
                    return true;
                }
                (Rel::Lt, Rel::Lt, false) => {
                    // e + ca < 0 and -e + cb < 0 leave cb < e < -ca.
                    if (&ca + cb).sign(cfg) >= 0 {
                        return false;
                    }
                    i += 1;
                }
                (Rel::Eq, Rel::Eq, _) => {
                    return ca == *cb;
                }
                (Rel::Eq, Rel::Lt, _) => {
                    // b reads `+-e + cb < 0` at e = -ca.
                    let v = if same { cb - &ca } else { cb + &ca };
                    if v.sign(cfg) >= 0 {
                        return false;
                    }
                    self.atoms.remove(i);
                }
                (Rel::Lt, Rel::Eq, _) => {
                    let v = if same { &ca - cb } else { &ca + cb };
                    return v.sign(cfg) < 0;
                }
            }
        }
        self.atoms.push(a);
        true
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.atoms.iter().any(|a| a.mentions(v))
    }

    /// Projects away `vars`: `Some` of a clause over the remaining
    /// variables equivalent (over an ordered `F`-vector space) to
    /// `exists vars. self`, or `None` if that is unsatisfiable.
    pub fn eliminate(mut self, vars: &[Var], cfg: &Config) -> Option<Clause> {
        loop {
            let present: Vec<&Var> = vars.iter().filter(|v| self.mentions(v)).collect();
            if present.is_empty() {
                return Some(self);
            }
            let eq = self.atoms.iter().enumerate().find_map(|(i, a)| {
                if a.rel != Rel::Eq {
                    return None;
                }
                let mut cands = present.iter().filter(|v| a.mentions(v));
                let first = cands.next()?;
                let best = std::iter::once(first)
                    .chain(cands)
                    .find(|v| a.expr.coeffs[v.as_str()].is_rational())
                    .unwrap_or(first);
                Some((i, (*best).clone()))
            });
            self = match eq {
                Some((i, v)) => self.solve_eq(i, &v, cfg)?,
                None => {
                    let v = present
                        .iter()
                        .min_by_key(|v| {
                            let (mut lo, mut up) = (0usize, 0usize);
                            for a in &self.atoms {
                                match a.expr.coeff(v).map(|c| c.sign(cfg)) {
                                    Some(s) if s > 0 => up += 1,
                                    Some(_) => lo += 1,
                                    None => {}
                                }
                            }
                            (lo * up) as isize - (lo + up) as isize
                        })
                        .expect("nonempty")
                        .to_string();
                    self.fourier_motzkin(&v, cfg)?
                }
            };
        }
    }

    fn solve_eq(mut self, i: usize, v: &str, cfg: &Config) -> Option<Clause> {
        let eq = self.atoms.remove(i);
        let c = eq.expr.coeffs[v].clone();
        let mut rest = eq.expr.clone();
        rest.coeffs.remove(v);
        let k = -&c.inv(cfg).expect("nonzero coefficient");
        let sol = rest.scale(&k, cfg);
        let mut out = Clause::new();
        for a in self.atoms {
            let expr = a.expr.substitute(v, &sol, cfg);
            if !out.insert(LinAtom { expr, rel: a.rel }, cfg) {
                return None;
            }
        }
        Some(out)
    }

    fn fourier_motzkin(self, v: &str, cfg: &Config) -> Option<Clause> {
        let mut out = Clause::new();
        let mut lower: Vec<(Quad, LinExpr)> = Vec::new();
        let mut upper: Vec<(Quad, LinExpr)> = Vec::new();
        for a in self.atoms {
            match a.expr.coeff(v).cloned() {
                None => {
                    if !out.insert(a, cfg) {
                        return None;
                    }
                }
                Some(c) => {
                    let mut r = a.expr;
                    r.coeffs.remove(v);
                    if c.sign(cfg) > 0 {
                        upper.push((c, r));
                    } else {
                        lower.push((c, r));
                    }
                }
            }
        }
        for (c1, r1) in &upper {
            for (c2, r2) in &lower {
                // v < -r1/c1 and v > -r2/c2 combine to r2*c1 - r1*c2 < 0.
                let e = r2.scale(c1, cfg).minus(&r1.scale(c2, cfg));
                if !out.insert(LinAtom::lt(e), cfg) {
                    return None;
                }
            }
        }
        if out.len() > SMALL {
            if !out.feasible(cfg) {
                return None;
            }
            out.prune(cfg);
        }
        Some(out)
    }

    fn system(&self) -> Vec<(LinExpr, Kind)> {
        system(&self.atoms)
    }

    /// Drops strict atoms implied by the others.
    fn prune(&mut self, cfg: &Config) {
        let mut l = Lra::new(cfg);
        let ids: Vec<usize> = self.atoms.iter().map(|a| l.atom(a)).collect();
        let mut keep = vec![true; ids.len()];
        for i in 0..ids.len() {
            if self.atoms[i].rel != Rel::Lt {
                continue;
            }
            let flip = l.constraint(&self.atoms[i].expr.neg(), Kind::Le);
            let mut sys: Vec<usize> = (0..ids.len())
                .filter(|&j| j != i && keep[j])
                .map(|j| ids[j])
                .collect();
            sys.push(flip);
            if l.check(&sys).is_err() {
                keep[i] = false;
            }
        }
        let mut k = keep.into_iter();
        self.atoms.retain(|_| k.next().expect("one flag per atom"));
    }

    /// Satisfiability over an ordered `F`-vector space.
    pub fn feasible(&self, cfg: &Config) -> bool {
        if self.atoms.len() > SMALL {
            return lra::feasible(&self.system(), cfg);
        }
        let vars: Vec<Var> = {
            let mut vs: Vec<Var> = self.atoms.iter().flat_map(|a| a.vars()).collect();
            vs.sort();
            vs.dedup();
            vs
        };
        self.clone().eliminate(&vars, cfg).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(pairs: &[(&str, &str)], c: &str) -> LinAtom {
        let mut e = LinExpr::constant(c.parse().unwrap());
        for (v, q) in pairs {
            e.add_term(v, &q.parse().unwrap());
        }
        LinAtom::lt(e)
    }

    fn eq(pairs: &[(&str, &str)], c: &str) -> LinAtom {
        let mut a = lt(pairs, c);
        a.rel = Rel::Eq;
        a
    }

    #[test]
    fn parallel_constraints() {
        let cfg = Config::default();
        // x < 1 and x < 2 keep x < 1
        let c =
            Clause::from_atoms(&[lt(&[("x", "1")], "-1"), lt(&[("x", "1")], "-2")], &cfg).unwrap();
        assert_eq!(c.atoms(), &[lt(&[("x", "1")], "-1")]);
        // x < 1 and x > 1 clash
        assert!(
            Clause::from_atoms(&[lt(&[("x", "1")], "-1"), lt(&[("x", "-1")], "1")], &cfg).is_none()
        );
        // x = rt and x < 2
        let c =
            Clause::from_atoms(&[eq(&[("x", "1")], "-rt"), lt(&[("x", "1")], "-2")], &cfg).unwrap();
        assert_eq!(c.len(), 1);
        assert!(
            Clause::from_atoms(&[eq(&[("x", "1")], "-rt"), lt(&[("x", "-1")], "1")], &cfg)
                .is_some()
        );
        assert!(
            Clause::from_atoms(&[eq(&[("x", "1")], "-rt"), lt(&[("x", "-1")], "3/2")], &cfg)
                .is_none()
        );
    }

    #[test]
    fn dense_interval_projection() {
        let cfg = Config::default();
        // a < x < rt projects to a < rt
        let c = Clause::from_atoms(
            &[
                lt(&[("a", "1"), ("x", "-1")], "0"),
                lt(&[("x", "1")], "-rt"),
            ],
            &cfg,
        )
        .unwrap();
        let p = c.eliminate(&["x".to_string()], &cfg).unwrap();
        assert_eq!(p.atoms(), &[lt(&[("a", "1")], "-rt")]);
        // one-sided bounds vanish
        let c = Clause::from_atoms(&[lt(&[("x", "1")], "-3")], &cfg).unwrap();
        assert!(c.eliminate(&["x".to_string()], &cfg).unwrap().is_empty());
    }

    #[test]
    fn equality_substitution() {
        let cfg = Config::default();
        // x = y + 1 and x < 0 gives y + 1 < 0
        let c = Clause::from_atoms(
            &[eq(&[("x", "1"), ("y", "-1")], "-1"), lt(&[("x", "1")], "0")],
            &cfg,
        )
        .unwrap();
        let p = c.eliminate(&["x".to_string()], &cfg).unwrap();
        assert_eq!(p.atoms(), &[lt(&[("y", "1")], "1")]);
    }

    #[test]
    fn feasibility() {
        let cfg = Config::default();
        let c = Clause::from_atoms(
            &[
                lt(&[("x", "1"), ("y", "1")], "0"),
                lt(&[("x", "-1")], "0"),
                lt(&[("y", "-1")], "0"),
            ],
            &cfg,
        )
        .unwrap();
        assert!(!c.feasible(&cfg));
        let c = Clause::from_atoms(
            &[lt(&[("x", "1"), ("y", "1")], "0"), lt(&[("x", "-1")], "0")],
            &cfg,
        )
        .unwrap();
        assert!(c.feasible(&cfg));
    }
}
