use std::collections::BTreeMap;

use super::ast::{Atom, Formula};
use super::term::Var;
use super::Structure;
use super::StructureKind;
use crate::arith::Quad;
use crate::error::{Error, Result};

/// Truth of a quantifier-free formula at an assignment, with exact
/// arithmetic. In `M` every value the formula looks at must be rational.
pub fn eval_qf(f: &Formula, s: &Structure, env: &BTreeMap<Var, Quad>) -> Result<bool> {
    if !f.is_quantifier_free() {
        return Err(Error::NotQuantifierFree);
    }
    if s.kind == StructureKind::M {
        for v in f.free_vars() {
            if let Some(x) = env.get(&v) {
                if !x.is_rational() {
                    return Err(Error::SortViolation(format!(
                        "{v} = {x} is not rational, but M only has rational points"
                    )));
                }
            }
        }
    }
    eval(f, s, env)
}

fn eval(f: &Formula, s: &Structure, env: &BTreeMap<Var, Quad>) -> Result<bool> {
    let cfg = &s.config;
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => match a {
            Atom::Lt(x, y) => x.eval(env)?.lt(&y.eval(env)?, cfg),
            Atom::Le(x, y) => !y.eval(env)?.lt(&x.eval(env)?, cfg),
            Atom::Eq(x, y) => x.eval(env)? == y.eval(env)?,
            Atom::Psq(x, y) => y.eval(env)?.lt(&cfg.slope().mul(&x.eval(env)?, cfg), cfg),
            Atom::PMem(t) => t.eval(env)?.is_rational(),
            Atom::Lin(l) => l.eval(env, cfg)?,
        },
        Formula::Not(g) => !eval(g, s, env)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval(g, s, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval(g, s, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval(a, s, env)? || eval(b, s, env)?,
        Formula::Iff(a, b) => eval(a, s, env)? == eval(b, s, env)?,
        Formula::Exists(..) | Formula::Forall(..) => return Err(Error::NotQuantifierFree),
    })
}
