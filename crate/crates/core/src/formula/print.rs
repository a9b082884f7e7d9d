use std::fmt::{self, Display, Formatter, Write};

use super::ast::{Atom, Formula};
use super::term::{LinAtom, LinExpr, Rel, Term};
use crate::arith::{Quad, Rat};

/// Writes a signed sum of monomials `c*x`, then the constant, so that
/// `Term` and `LinExpr` print in the same reparseable way.
fn write_sum<'a>(
    f: &mut Formatter<'_>,
    monos: impl Iterator<Item = (&'a str, Quad)>,
    constant: &Quad,
) -> fmt::Result {
    let mut first = true;
    fn sep(f: &mut Formatter<'_>, first: &mut bool, neg: bool) -> fmt::Result {
        let r = match (*first, neg) {
            (true, false) => Ok(()),
            (true, true) => f.write_char('-'),
            (false, false) => f.write_str(" + "),
            (false, true) => f.write_str(" - "),
        };
        *first = false;
        r
    }
    for (v, c) in monos {
        if c.is_rational() {
            sep(f, &mut first, c.a.signum() < 0)?;
            let m = c.a.abs();
            if m != Rat::one() {
                write!(f, "{m}*")?;
            }
        } else if c.a.is_zero() {
            sep(f, &mut first, c.b.signum() < 0)?;
            let m = c.b.abs();
            if m != Rat::one() {
                write!(f, "{m}*")?;
            }
            f.write_str("rt*")?;
        } else {
            sep(f, &mut first, false)?;
            write!(f, "({c})*")?;
        }
        f.write_str(v)?;
    }
    if !constant.a.is_zero() || constant.is_zero() && first {
        sep(f, &mut first, constant.a.signum() < 0)?;
        write!(f, "{}", constant.a.abs())?;
    }
    if !constant.b.is_zero() {
        sep(f, &mut first, constant.b.signum() < 0)?;
        let m = constant.b.abs();
        if m != Rat::one() {
            write!(f, "{m}*")?;
        }
        f.write_str("rt")?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.coeffs
                .iter()
                .map(|(v, c)| (v.as_str(), Quad::rational(c.clone()))),
            &self.constant,
        )
    }
}

impl Display for LinExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.coeffs.iter().map(|(v, c)| (v.as_str(), c.clone())),
            &self.constant,
        )
    }
}

impl Display for LinAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Rel::Lt => "<",
            Rel::Eq => "=",
        };
        write!(f, "[{} {rel} 0]", self.expr)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Lt(s, t) => write!(f, "{s} < {t}"),
            Atom::Le(s, t) => write!(f, "{s} <= {t}"),
            Atom::Eq(s, t) => write!(f, "{s} = {t}"),
            Atom::Psq(s, t) => write!(f, "P2({s}, {t})"),
            Atom::PMem(t) => write!(f, "P({t})"),
            Atom::Lin(l) => write!(f, "{l}"),
        }
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(v) if v.len() > 1 => 3,
        Formula::And(v) if v.len() > 1 => 4,
        Formula::Or(v) | Formula::And(v) => v.first().map_or(6, prec),
        Formula::Not(_) => 5,
        _ => 6,
    }
}

fn child(f: &mut Formatter<'_>, g: &Formula, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_char('~')?;
                child(f, g, prec(g) < 5)
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let (op, p, empty) = match self {
                    Formula::And(_) => (" & ", 4, "true"),
                    _ => (" | ", 3, "false"),
                };
                if gs.is_empty() {
                    return f.write_str(empty);
                }
                if gs.len() == 1 {
                    return write!(f, "{}", gs[0]);
                }
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    child(f, g, prec(g) <= p)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                child(f, a, prec(a) <= 2)?;
                f.write_str(" -> ")?;
                child(f, b, prec(b) < 2)
            }
            Formula::Iff(a, b) => {
                child(f, a, prec(a) < 1)?;
                f.write_str(" <-> ")?;
                child(f, b, prec(b) <= 1)
            }
            Formula::Exists(v, g) => write!(f, "E {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "A {v}. {g}"),
        }
    }
}
