//! Recursive-descent parser for the formula grammar.
//!
//! Precedence from loosest to tightest: quantifiers (which extend as far
//! right as possible), `<->` (left associative), `->` (right associative),
//! `|`, `&`, `~`.

use num_bigint::BigInt;

use super::ast::{Atom, Formula, Lang};
use super::term::{LinAtom, LinExpr, Rel, Term};
use crate::arith::{Quad, Rat};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &["E", "A", "P", "P2", "rt", "true", "false"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rat),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let num: BigInt = src[i..j].parse().expect("digits");
            let mut value = Rat::from(num);
            if j + 1 < bytes.len() && bytes[j] == b'/' && bytes[j + 1].is_ascii_digit() {
                let mut k = j + 1;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let den: BigInt = src[j + 1..k].parse().expect("digits");
                value = value
                    .checked_div(&Rat::from(den))
                    .map_err(|_| syntax(j, "zero denominator"))?;
                j = k;
            }
            (Tok::Num(value), j - i)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(src[i..j].to_string()), j - i)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBrack,
                b']' => Tok::RBrack,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                b'=' => Tok::Eq,
                b'~' | b'!' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                _ => {
                    let ch = rest.chars().next().expect("nonempty");
                    return Err(syntax(start, &format!("unexpected character `{ch}`")));
                }
            };
            (t, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    lang: Lang,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.is_keyword("E") || self.is_keyword("A") {
            return self.quantified();
        }
        self.iff()
    }

    fn quantified(&mut self) -> Result<Formula> {
        let exists = self.is_keyword("E");
        self.bump();
        let mut vars = vec![self.binder()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            vars.push(self.binder()?);
        }
        self.expect(Tok::Dot, "`.` after bound variables")?;
        let body = self.formula()?;
        Ok(if exists {
            Formula::exists_many(&vars, body)
        } else {
            Formula::forall_many(&vars, body)
        })
    }

    fn binder(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected a variable name"),
        }
    }

    /// Parses an operand of a binary connective: either a quantifier,
    /// which swallows the rest of the input, or the next tighter level.
    fn operand(&mut self, next: fn(&mut Self) -> Result<Formula>) -> Result<Formula> {
        if self.is_keyword("E") || self.is_keyword("A") {
            self.quantified()
        } else {
            next(self)
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.operand(Self::implies)?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.operand(Self::implies)?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.operand(Self::or)?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.operand(Self::implies)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.operand(Self::and)?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.operand(Self::and)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one")
        } else {
            Formula::Or(parts)
        })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.operand(Self::unary)?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.operand(Self::unary)?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one")
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                let inner = self.operand(Self::unary)?;
                Ok(Formula::not(inner))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.is_keyword("true") {
            self.bump();
            return Ok(Formula::True);
        }
        if self.is_keyword("false") {
            self.bump();
            return Ok(Formula::False);
        }
        if self.is_keyword("P2") {
            self.bump();
            self.expect(Tok::LParen, "`(` after P2")?;
            let s = self.term()?;
            self.expect(Tok::Comma, "`,` between the arguments of P2")?;
            let t = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Formula::psq(s, t));
        }
        if self.is_keyword("P") {
            let at = self.offset();
            self.bump();
            self.expect(Tok::LParen, "`(` after P")?;
            let t = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            if self.lang != Lang::LP {
                return Err(Error::IllFormed(format!(
                    "the predicate P (at byte {at}) is only available in L^P"
                )));
            }
            return Ok(Formula::pmem(t));
        }
        if *self.peek() == Tok::LBrack {
            self.bump();
            let lhs = self.lin_expr()?;
            let rel = match self.bump() {
                Tok::Lt => Rel::Lt,
                Tok::Eq => Rel::Eq,
                _ => {
                    self.pos -= 1;
                    return self.err("expected `<` or `=` in a bracketed atom");
                }
            };
            let rhs = self.lin_expr()?;
            self.expect(Tok::RBrack, "`]`")?;
            return Ok(Formula::lin(LinAtom {
                expr: lhs.minus(&rhs),
                rel,
            }));
        }
        if *self.peek() == Tok::LParen {
            // Either a parenthesized formula or a comparison whose left
            // side starts with a parenthesized term.
            let save = self.pos;
            if let Ok(f) = self.comparison() {
                return Ok(f);
            }
            self.pos = save;
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Formula> {
        let start = self.offset();
        let lhs = self.lin_expr()?;
        let op = self.bump();
        let rhs = self.lin_expr()?;
        let (s, t) = match op {
            Tok::Lt | Tok::Le | Tok::Eq => (lhs, rhs),
            Tok::Gt | Tok::Ge => (rhs, lhs),
            _ => {
                self.pos -= 1;
                return self.err("expected a comparison `<`, `<=`, `=`, `>` or `>=`");
            }
        };
        match (to_term(&s), to_term(&t)) {
            (Some(s), Some(t)) => Ok(Formula::Atom(match op {
                Tok::Lt | Tok::Gt => Atom::Lt(s, t),
                Tok::Le | Tok::Ge => Atom::Le(s, t),
                _ => Atom::Eq(s, t),
            })),
            _ if self.lang == Lang::L => Err(Error::IllFormed(format!(
                "irrational coefficient in the comparison at byte {start}; L only has rational scalars"
            ))),
            _ => {
                let e = s.minus(&t);
                Ok(match op {
                    Tok::Lt | Tok::Gt => Formula::lt0(e),
                    Tok::Le | Tok::Ge => Formula::le0(e),
                    _ => Formula::eq0(e),
                })
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let at = self.offset();
        let e = self.lin_expr()?;
        to_term(&e).ok_or_else(|| Error::Syntax {
            pos: at,
            msg: "irrational coefficient on a variable; use a bracketed atom".into(),
        })
    }

    fn lin_expr(&mut self) -> Result<LinExpr> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.product()?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.plus(&self.product()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.minus(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<LinExpr> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let at = self.offset();
            let rhs = self.factor()?;
            let prod = if acc.is_ground() {
                scale(&rhs, &acc.constant)
            } else if rhs.is_ground() {
                scale(&acc, &rhs.constant)
            } else {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "product of two variables is not linear".into(),
                });
            };
            acc = prod.ok_or_else(|| Error::Syntax {
                pos: at,
                msg: "product of two irrational constants".into(),
            })?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LinExpr> {
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(LinExpr::constant(Quad::rational(q)))
            }
            Tok::Minus => {
                self.bump();
                Ok(self.factor()?.neg())
            }
            Tok::LParen => {
                self.bump();
                let e = self.lin_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "rt" => {
                self.bump();
                Ok(LinExpr::constant(Quad::sqrt_d()))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(LinExpr::var(&s))
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Scales by a constant. Both factors irrational would need `d`, which
/// the grammar does not know about, so that case is refused.
fn scale(e: &LinExpr, k: &Quad) -> Option<LinExpr> {
    if k.is_rational() {
        return Some(e.scale_rat(&k.a));
    }
    if !e.is_rational() {
        return None;
    }
    let mul = |c: &Quad| k.scale(&c.a);
    Some(LinExpr {
        coeffs: e
            .coeffs
            .iter()
            .map(|(v, c)| (v.clone(), mul(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect(),
        constant: mul(&e.constant),
    })
}

fn to_term(e: &LinExpr) -> Option<Term> {
    if !e.coeffs.values().all(Quad::is_rational) {
        return None;
    }
    Some(Term {
        coeffs: e
            .coeffs
            .iter()
            .map(|(v, c)| (v.clone(), c.a.clone()))
            .collect(),
        constant: e.constant.clone(),
    })
}

/// Parses a formula of the given language. Syntax errors carry a byte
/// offset; atoms outside the language are reported as `IllFormed`.
pub fn parse(text: &str, lang: Lang) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        lang,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    f.check_lang(lang)?;
    Ok(f)
}

/// Parses a term such as `2*x - 1/3*y + rt`.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        lang: Lang::Lstar,
    };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}
