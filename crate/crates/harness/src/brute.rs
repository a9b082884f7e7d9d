//! Truth of quantified formulas by evaluation at finitely many test
//! points, without quantifier elimination.
//!
//! Each quantifier is expanded over the roots of the linear forms that
//! matter below it, the points between and beyond them. The forms that
//! matter are the atoms, closed under elimination of the inner bound
//! variables: differences of root functions, and over `Q` also the
//! irrational parts of root functions, whose zeros are where a root
//! becomes a rational point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use quadcut::formula::{Atom, Rel, Var};
use quadcut::{Config, Error, Formula, LinExpr, Quad, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Q,
    F,
}

enum Node {
    Const(bool),
    Lt0(LinExpr),
    Eq0(LinExpr),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant {
        exists: bool,
        var: Var,
        forms: Vec<LinExpr>,
        body: Box<Node>,
    },
}

struct Compiler<'a> {
    cfg: &'a Config,
    domain: Domain,
}

fn insert(forms: &mut Vec<LinExpr>, e: LinExpr, cfg: &Config) {
    let Some(lead) = e.coeffs.values().next().cloned() else {
        return;
    };
    let e = e.scale(&lead.inv(cfg).expect("nonzero"), cfg);
    if let Err(i) = forms.binary_search_by(|f| f.structural_cmp(&e)) {
        forms.insert(i, e);
    }
}

impl Compiler<'_> {
    fn atom(&self, a: &Atom, forms: &mut Vec<LinExpr>) -> Result<Node> {
        let cfg = self.cfg;
        let (node, e) = match a {
            Atom::Lt(s, t) => {
                let e = s.minus(t).to_lin();
                (Node::Lt0(e.clone()), e)
            }
            Atom::Le(s, t) => {
                let e = t.minus(s).to_lin();
                (Node::Not(Box::new(Node::Lt0(e.clone()))), e)
            }
            Atom::Eq(s, t) => {
                let e = s.minus(t).to_lin();
                (Node::Eq0(e.clone()), e)
            }
            Atom::Psq(s, t) => {
                let e = t.to_lin().minus(&s.to_lin().scale(cfg.slope(), cfg));
                (Node::Lt0(e.clone()), e)
            }
            Atom::Lin(l) => match l.rel {
                Rel::Lt => (Node::Lt0(l.expr.clone()), l.expr.clone()),
                Rel::Eq => (Node::Eq0(l.expr.clone()), l.expr.clone()),
            },
            Atom::PMem(_) => {
                return Err(Error::IllFormed(
                    "no test points for P; interpret first".into(),
                ))
            }
        };
        insert(forms, e, cfg);
        Ok(node)
    }

    /// The node and the forms whose signs determine it, with the variables
    /// bound inside already eliminated.
    fn compile(&self, f: &Formula, forms: &mut Vec<LinExpr>) -> Result<Node> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => self.atom(a, forms)?,
            Formula::Not(g) => Node::Not(Box::new(self.compile(g, forms)?)),
            Formula::And(v) => Node::And(
                v.iter()
                    .map(|g| self.compile(g, forms))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(v) => Node::Or(
                v.iter()
                    .map(|g| self.compile(g, forms))
                    .collect::<Result<_>>()?,
            ),
            Formula::Implies(a, b) => Node::Or(vec![
                Node::Not(Box::new(self.compile(a, forms)?)),
                self.compile(b, forms)?,
            ]),
            Formula::Iff(a, b) => Node::Iff(
                Box::new(self.compile(a, forms)?),
                Box::new(self.compile(b, forms)?),
            ),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let mut inner = Vec::new();
                let body = self.compile(g, &mut inner)?;
                for e in self.eliminate(&inner, v) {
                    insert(forms, e, self.cfg);
                }
                let mine = inner.into_iter().filter(|e| e.mentions(v)).collect();
                Node::Quant {
                    exists: matches!(f, Formula::Exists(..)),
                    var: v.clone(),
                    forms: mine,
                    body: Box::new(body),
                }
            }
        })
    }

    fn eliminate(&self, forms: &[LinExpr], v: &str) -> Vec<LinExpr> {
        let cfg = self.cfg;
        let mut out = Vec::new();
        let mut roots = Vec::new();
        for e in forms {
            match e.coeff(v) {
                None => out.push(e.clone()),
                Some(c) => {
                    let mut rest = e.clone();
                    rest.coeffs.remove(v);
                    roots.push(rest.scale(&-c.inv(cfg).expect("nonzero"), cfg));
                }
            }
        }
        for (i, a) in roots.iter().enumerate() {
            for b in &roots[i + 1..] {
                out.push(a.minus(b));
            }
            if self.domain == Domain::Q {
                out.push(a.split().1.to_lin());
            }
        }
        out
    }
}

/// A rational strictly between `a < b`: the first dyadic above `a`
/// that is fine enough.
fn rational_between(a: &Quad, b: &Quad, cfg: &Config) -> Rat {
    let mut den = BigInt::from(1);
    loop {
        let q = Rat::new(
            a.scale(&Rat::from_int(den.clone())).floor(cfg) + 1,
            den.clone(),
        )
        .expect("positive");
        if Quad::rational(q.clone()).lt(b, cfg) {
            return q;
        }
        den *= 2;
    }
}

struct Evaluator<'a> {
    cfg: &'a Config,
    domain: Domain,
}

impl Evaluator<'_> {
    fn points(&self, var: &str, forms: &[LinExpr], env: &BTreeMap<Var, Quad>) -> Result<Vec<Quad>> {
        let cfg = self.cfg;
        let mut roots = Vec::new();
        for e in forms {
            let c = e.coeff(var).expect("mentions var");
            let mut rest = e.clone();
            rest.coeffs.remove(var);
            let r = rest.eval(env, cfg)?.div(c, cfg)?;
            roots.push(Quad::zero() - r);
        }
        roots.sort_by(|a, b| a.cmp_in(b, cfg));
        roots.dedup();
        let Some(first) = roots.first() else {
            return Ok(vec![Quad::zero()]);
        };
        let mut out = vec![Quad::rational(Rat::from_int(first.floor(cfg) - 1))];
        for (i, r) in roots.iter().enumerate() {
            if self.domain == Domain::F || r.is_rational() {
                out.push(r.clone());
            }
            match roots.get(i + 1) {
                Some(s) => out.push(match self.domain {
                    Domain::Q => Quad::rational(rational_between(r, s, cfg)),
                    Domain::F => (r + s).scale(&Rat::new(1, 2).expect("ok")),
                }),
                None => out.push(Quad::rational(Rat::from_int(r.floor(cfg) + 1))),
            }
        }
        Ok(out)
    }

    fn eval(&self, n: &Node, env: &mut BTreeMap<Var, Quad>) -> Result<bool> {
        let cfg = self.cfg;
        Ok(match n {
            Node::Const(b) => *b,
            Node::Lt0(e) => e.eval(env, cfg)?.sign(cfg) < 0,
            Node::Eq0(e) => e.eval(env, cfg)?.is_zero(),
            Node::Not(g) => !self.eval(g, env)?,
            Node::And(v) => {
                for g in v {
                    if !self.eval(g, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(v) => {
                for g in v {
                    if self.eval(g, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Node::Quant {
                exists,
                var,
                forms,
                body,
            } => {
                let saved = env.remove(var);
                let mut found = !*exists;
                for x in self.points(var, forms, env)? {
                    env.insert(var.clone(), x);
                    if self.eval(body, env)? == *exists {
                        found = *exists;
                        break;
                    }
                }
                match saved {
                    Some(x) => env.insert(var.clone(), x),
                    None => env.remove(var),
                };
                found
            }
        })
    }
}

/// A formula prepared for repeated evaluation.
pub struct Prepared {
    root: Node,
    domain: Domain,
}

impl Prepared {
    pub fn new(f: &Formula, domain: Domain, cfg: &Config) -> Result<Self> {
        let c = Compiler { cfg, domain };
        let root = c.compile(f, &mut Vec::new())?;
        Ok(Prepared { root, domain })
    }

    /// Truth at an assignment of the free variables. Over `Q` the values
    /// must be rational.
    pub fn holds(&self, env: &BTreeMap<Var, Quad>, cfg: &Config) -> Result<bool> {
        if self.domain == Domain::Q {
            if let Some((v, x)) = env.iter().find(|(_, x)| !x.is_rational()) {
                return Err(Error::SortViolation(format!("{v} = {x} is not rational")));
            }
        }
        let ev = Evaluator {
            cfg,
            domain: self.domain,
        };
        ev.eval(&self.root, &mut env.clone())
    }
}

/// Truth of `f` at `env`, with quantifiers ranging over `domain`.
pub fn holds(f: &Formula, env: &BTreeMap<Var, Quad>, domain: Domain, cfg: &Config) -> Result<bool> {
    Prepared::new(f, domain, cfg)?.holds(env, cfg)
}
