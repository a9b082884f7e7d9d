use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{Config, Quad, Rat};
use crate::error::{Error, Result};

pub type Var = String;

/// A surface term: a rational-linear combination of variables plus a
/// constant from `F`. In the language L the constant must be rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Term {
    pub coeffs: BTreeMap<Var, Rat>,
    pub constant: Quad,
}

impl Term {
    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rat::one());
        Term {
            coeffs,
            constant: Quad::zero(),
        }
    }

    pub fn constant(c: Quad) -> Self {
        Term {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn rat(c: Rat) -> Self {
        Term::constant(Quad::rational(c))
    }

    pub fn zero() -> Self {
        Term::default()
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn add_var(&mut self, name: &str, c: &Rat) {
        let slot = self
            .coeffs
            .entry(name.to_string())
            .or_insert_with(Rat::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(name);
        }
    }

    pub fn plus(&self, other: &Term) -> Term {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_var(v, c);
        }
        out.constant = &out.constant + &other.constant;
        out
    }

    pub fn minus(&self, other: &Term) -> Term {
        self.plus(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Term {
        if k.is_zero() {
            return Term::zero();
        }
        Term {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c * k))
                .collect(),
            constant: self.constant.scale(k),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn eval(&self, env: &BTreeMap<Var, Quad>) -> Result<Quad> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = env
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            acc = &acc + &x.scale(c);
        }
        Ok(acc)
    }

    pub fn to_lin(&self) -> LinExpr {
        LinExpr {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), Quad::rational(c.clone())))
                .collect(),
            constant: self.constant.clone(),
        }
    }
}

/// An `F`-affine expression `sum c_i x_i + c_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<Var, Quad>,
    pub constant: Quad,
}

impl LinExpr {
    pub fn constant(c: Quad) -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Quad::one());
        LinExpr {
            coeffs,
            constant: Quad::zero(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: &str) -> Option<&Quad> {
        self.coeffs.get(v)
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn add_term(&mut self, v: &str, c: &Quad) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(v.to_string()).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(v);
        }
    }

    pub fn plus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_term(v, c);
        }
        out.constant = &out.constant + &other.constant;
        out
    }

    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        self.plus(&other.neg())
    }

    pub fn neg(&self) -> LinExpr {
        LinExpr {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            constant: -&self.constant,
        }
    }

    pub fn scale_rat(&self, k: &Rat) -> LinExpr {
        if k.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.scale(k)))
                .collect(),
            constant: self.constant.scale(k),
        }
    }

    pub fn scale(&self, k: &Quad, cfg: &Config) -> LinExpr {
        if k.is_zero() {
            return LinExpr::default();
        }
        LinExpr {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.mul(k, cfg)))
                .collect(),
            constant: self.constant.mul(k, cfg),
        }
    }

    /// Replaces `v` by `e`.
    pub fn substitute(&self, v: &str, e: &LinExpr, cfg: &Config) -> LinExpr {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let mut base = self.clone();
                let c = c.clone();
                base.coeffs.remove(v);
                base.plus(&e.scale(&c, cfg))
            }
        }
    }

    pub fn eval(&self, env: &BTreeMap<Var, Quad>, cfg: &Config) -> Result<Quad> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = env
                .get(v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            acc = &acc + &c.mul(x, cfg);
        }
        Ok(acc)
    }

    /// Splits into `u + sqrt(d) * w` with `u`, `w` rational-linear: the
    /// identity holds for any values of the variables.
    pub fn split(&self) -> (Term, Term) {
        let mut u = Term::rat(self.constant.a.clone());
        let mut w = Term::rat(self.constant.b.clone());
        for (v, c) in &self.coeffs {
            u.add_var(v, &c.a);
            w.add_var(v, &c.b);
        }
        (u, w)
    }

    pub fn is_rational(&self) -> bool {
        self.constant.is_rational() && self.coeffs.values().all(Quad::is_rational)
    }

    pub fn structural_cmp(&self, other: &LinExpr) -> Ordering {
        let mut a = self.coeffs.iter();
        let mut b = other.coeffs.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => break,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ca)), Some((vb, cb))) => {
                    let o = va.cmp(vb).then_with(|| ca.structural_cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
        self.constant.structural_cmp(&other.constant)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Eq,
}

/// A normalized atom `expr < 0` or `expr = 0` with coefficients in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinAtom {
    pub expr: LinExpr,
    pub rel: Rel,
}

/// Result of putting an atom in canonical form: ground atoms fold away.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canon {
    True,
    False,
    Atom(LinAtom),
}

impl LinAtom {
    pub fn lt(expr: LinExpr) -> Self {
        LinAtom { expr, rel: Rel::Lt }
    }

    pub fn eq(expr: LinExpr) -> Self {
        LinAtom { expr, rel: Rel::Eq }
    }

    pub fn eval(&self, env: &BTreeMap<Var, Quad>, cfg: &Config) -> Result<bool> {
        let s = self.expr.eval(env, cfg)?.sign(cfg);
        Ok(match self.rel {
            Rel::Lt => s < 0,
            Rel::Eq => s == 0,
        })
    }

    pub fn ground_value(&self, cfg: &Config) -> Option<bool> {
        if !self.expr.is_ground() {
            return None;
        }
        let s = self.expr.constant.sign(cfg);
        Some(match self.rel {
            Rel::Lt => s < 0,
            Rel::Eq => s == 0,
        })
    }

    /// Scales so that the first variable (in name order) has coefficient
    /// `+-1` for `<` (positive factor only) and `1` for `=`.
    pub fn canonical(&self, cfg: &Config) -> Canon {
        if let Some(v) = self.ground_value(cfg) {
            return if v { Canon::True } else { Canon::False };
        }
        let lead = self
            .expr
            .coeffs
            .values()
            .next()
            .expect("non-ground")
            .clone();
        let factor = match self.rel {
            Rel::Lt => lead.abs(cfg),
            Rel::Eq => lead,
        };
        if factor == Quad::one() {
            return Canon::Atom(self.clone());
        }
        let inv = factor.inv(cfg).expect("nonzero coefficient");
        Canon::Atom(LinAtom {
            expr: self.expr.scale(&inv, cfg),
            rel: self.rel,
        })
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.expr.mentions(v)
    }

    pub fn structural_cmp(&self, other: &LinAtom) -> Ordering {
        self.rel
            .cmp(&other.rel)
            .then_with(|| self.expr.structural_cmp(&other.expr))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.expr.coeffs.keys().cloned().collect()
    }
}

impl PartialOrd for LinAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.structural_cmp(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_recombines() {
        let cfg = Config::default();
        let mut e = LinExpr::constant("1/2 - rt".parse().unwrap());
        e.add_term("x", &"3 + 2*rt".parse().unwrap());
        e.add_term("y", &"-rt".parse().unwrap());
        let (u, w) = e.split();
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), "7/3".parse().unwrap());
        env.insert("y".to_string(), "-1/5".parse().unwrap());
        let lhs = e.eval(&env, &cfg).unwrap();
        let rhs = &u.eval(&env).unwrap() + &w.eval(&env).unwrap().mul(&Quad::sqrt_d(), &cfg);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_scaling() {
        let cfg = Config::default();
        let mut e = LinExpr::constant(Quad::from_int(4));
        e.add_term("x", &Quad::from_int(-2));
        let Canon::Atom(a) = LinAtom::lt(e.clone()).canonical(&cfg) else {
            panic!()
        };
        assert_eq!(a.expr.coeff("x"), Some(&Quad::from_int(-1)));
        assert_eq!(a.expr.constant, Quad::from_int(2));
        let Canon::Atom(a) = LinAtom::eq(e).canonical(&cfg) else {
            panic!()
        };
        assert_eq!(a.expr.coeff("x"), Some(&Quad::one()));
        assert_eq!(a.expr.constant, Quad::from_int(-2));
        assert_eq!(
            LinAtom::lt(LinExpr::constant("1 - rt".parse().unwrap())).canonical(&cfg),
            Canon::True
        );
    }
}
