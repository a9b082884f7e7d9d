use super::ast::{Atom, Formula};
use super::term::{Canon, LinAtom, LinExpr, Rel};
use crate::arith::Config;

/// Negation normal form over canonical [`LinAtom`]s.
///
/// `->` and `<->` are expanded, `<=` becomes `<` or `=`, `P2(s, t)` becomes
/// `t - sqrt(d)*s < 0`, negated linear atoms are replaced by the other two
/// cases of trichotomy, ground atoms are folded and `P` atoms are kept
/// (negated ones as `~P(t)`). The result only contains `True`, `False`,
/// atoms, `~P(t)`, `And`, `Or`, `Exists` and `Forall`, and normalizing it
/// again returns it unchanged.
pub fn normalize(f: &Formula, cfg: &Config) -> Formula {
    nnf(f, true, cfg)
}

fn lin(a: LinAtom, cfg: &Config) -> Formula {
    match a.canonical(cfg) {
        Canon::True => Formula::True,
        Canon::False => Formula::False,
        Canon::Atom(a) => Formula::lin(a),
    }
}

fn lin_lit(a: &LinAtom, positive: bool, cfg: &Config) -> Formula {
    if positive {
        return lin(a.clone(), cfg);
    }
    let e = &a.expr;
    match a.rel {
        Rel::Lt => or(vec![
            lin(LinAtom::lt(e.neg()), cfg),
            lin(LinAtom::eq(e.clone()), cfg),
        ]),
        Rel::Eq => or(vec![
            lin(LinAtom::lt(e.clone()), cfg),
            lin(LinAtom::lt(e.neg()), cfg),
        ]),
    }
}

fn atom_lin(a: &Atom, cfg: &Config) -> Option<Vec<LinAtom>> {
    let diff = |s: &super::term::Term, t: &super::term::Term| s.to_lin().minus(&t.to_lin());
    Some(match a {
        Atom::Lt(s, t) => vec![LinAtom::lt(diff(s, t))],
        Atom::Eq(s, t) => vec![LinAtom::eq(diff(s, t))],
        Atom::Le(s, t) => vec![LinAtom::lt(diff(s, t)), LinAtom::eq(diff(s, t))],
        Atom::Psq(s, t) => {
            let e: LinExpr = t.to_lin().minus(&s.to_lin().scale(cfg.slope(), cfg));
            vec![LinAtom::lt(e)]
        }
        Atom::Lin(l) => vec![l.clone()],
        Atom::PMem(_) => return None,
    })
}

fn nnf(f: &Formula, pos: bool, cfg: &Config) -> Formula {
    match f {
        Formula::True => bool_f(pos),
        Formula::False => bool_f(!pos),
        Formula::Atom(a) => match atom_lin(a, cfg) {
            None => {
                let Atom::PMem(t) = a else { unreachable!() };
                if t.is_ground() {
                    return bool_f(pos == t.constant.is_rational());
                }
                let at = Formula::pmem(t.clone());
                if pos {
                    at
                } else {
                    Formula::not(at)
                }
            }
            Some(parts) if parts.len() == 1 => lin_lit(&parts[0], pos, cfg),
            Some(parts) => {
                // `s <= t` as a disjunction of its strict and equality cases.
                let lits: Vec<Formula> = parts.iter().map(|p| lin_lit(p, pos, cfg)).collect();
                if pos {
                    or(lits)
                } else {
                    and(lits)
                }
            }
        },
        Formula::Not(g) => nnf(g, !pos, cfg),
        Formula::Or(gs) if !pos => negated_or(gs, cfg),
        Formula::And(gs) | Formula::Or(gs) => {
            let kids: Vec<Formula> = gs.iter().map(|g| nnf(g, pos, cfg)).collect();
            if matches!(f, Formula::And(_)) == pos {
                and(kids)
            } else {
                or(kids)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                or(vec![nnf(a, false, cfg), nnf(b, true, cfg)])
            } else {
                and(vec![nnf(a, true, cfg), nnf(b, false, cfg)])
            }
        }
        Formula::Iff(a, b) => {
            let (ap, an) = (nnf(a, true, cfg), nnf(a, false, cfg));
            let (bp, bn) = (nnf(b, true, cfg), nnf(b, false, cfg));
            if pos {
                or(vec![and(vec![ap, bp]), and(vec![an, bn])])
            } else {
                or(vec![and(vec![ap, bn]), and(vec![an, bp])])
            }
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let body = nnf(g, pos, cfg);
            if matches!(body, Formula::True | Formula::False) {
                return body;
            }
            if matches!(f, Formula::Exists(..)) == pos {
                Formula::exists(v, body)
            } else {
                Formula::forall(v, body)
            }
        }
    }
}

fn canon_eq(e: &LinExpr, cfg: &Config) -> Option<LinAtom> {
    match LinAtom::eq(e.clone()).canonical(cfg) {
        Canon::Atom(a) => Some(a),
        _ => None,
    }
}

fn lin_atom(f: &Formula) -> Option<&LinAtom> {
    match f {
        Formula::Atom(Atom::Lin(a)) => Some(a),
        _ => None,
    }
}

/// Whether `f` is `e = 0`, possibly split into rational and irrational
/// parts.
fn is_zero_of(f: &Formula, e: &LinExpr, cfg: &Config) -> bool {
    let Some(eq) = canon_eq(e, cfg) else {
        return false;
    };
    match f {
        Formula::Atom(Atom::Lin(b)) => *b == eq,
        Formula::And(v) if v.len() == 2 => {
            let (u, w) = eq.expr.split();
            let (Some(cu), Some(cw)) = (canon_eq(&u.to_lin(), cfg), canon_eq(&w.to_lin(), cfg))
            else {
                return false;
            };
            let has = |a: &LinAtom| v.iter().any(|g| lin_atom(g) == Some(a));
            has(&cu) && has(&cw)
        }
        _ => false,
    }
}

/// The negation of a disjunction, disjunct by disjunct, except that the
/// expansions of negated literals are recognized and negated back: `a < 0`
/// next to `a = 0` gives `-a < 0`, and `p < 0` next to `-p < 0` gives
/// `p = 0`. Negating the expansions literally would keep both cases of
/// every comparison around.
fn negated_or(parts: &[Formula], cfg: &Config) -> Formula {
    let mut used = vec![false; parts.len()];
    let mut out = Vec::new();
    for i in 0..parts.len() {
        let Some(a) = lin_atom(&parts[i]).filter(|a| a.rel == Rel::Lt && !used[i]) else {
            continue;
        };
        let opposite = lin(LinAtom::lt(a.expr.neg()), cfg);
        let free = |j: usize, used: &[bool]| j != i && !used[j];
        if let Some(j) = (0..parts.len()).find(|&j| free(j, &used) && parts[j] == opposite) {
            used[i] = true;
            used[j] = true;
            out.push(lin(LinAtom::eq(a.expr.clone()), cfg));
        } else if let Some(j) =
            (0..parts.len()).find(|&j| free(j, &used) && is_zero_of(&parts[j], &a.expr, cfg))
        {
            used[i] = true;
            used[j] = true;
            out.push(lin(LinAtom::lt(a.expr.neg()), cfg));
        }
    }
    for (g, u) in parts.iter().zip(used) {
        if !u {
            out.push(nnf(g, false, cfg));
        }
    }
    and(out)
}

fn bool_f(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

/// Flattening conjunction with constant folding and duplicate removal.
pub fn and(parts: Vec<Formula>) -> Formula {
    let mut out: Vec<Formula> = Vec::new();
    for p in parts {
        match p {
            Formula::True => {}
            Formula::False => return Formula::False,
            Formula::And(inner) => {
                for q in inner {
                    if !out.contains(&q) {
                        out.push(q);
                    }
                }
            }
            q => {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    Formula::and(out)
}

/// Flattening disjunction with constant folding and duplicate removal.
pub fn or(parts: Vec<Formula>) -> Formula {
    let mut out: Vec<Formula> = Vec::new();
    for p in parts {
        match p {
            Formula::False => {}
            Formula::True => return Formula::True,
            Formula::Or(inner) => {
                for q in inner {
                    if !out.contains(&q) {
                        out.push(q);
                    }
                }
            }
            q => {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    Formula::or(out)
}
