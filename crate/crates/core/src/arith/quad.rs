use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::Rat;
use crate::error::{Error, Result};

/// The real quadratic field `F = Q(sqrt d)` for one square-free `d >= 2`.
///
/// Every [`Quad`] taking part in one computation is read against the same
/// `Config`. The `slope` is the number the binary predicate `P2` compares
/// against (`P2(s, t)` holds iff `t < slope * s`); it is `sqrt d` unless a
/// caller deliberately installs a different one to test the axiom harness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    d: u64,
    d_rat: Rat,
    slope: Quad,
}

impl Config {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidConfig(format!("d = {d} must be at least 2")));
        }
        let mut k = 2u64;
        while k * k <= d {
            if d.is_multiple_of(k * k) {
                return Err(Error::InvalidConfig(format!(
                    "d = {d} is not square-free ({k}^2 divides it)"
                )));
            }
            k += 1;
        }
        Ok(Config {
            d,
            d_rat: Rat::from_int(d),
            slope: Quad::sqrt_d(),
        })
    }

    /// Replaces the slope used to interpret `P2`. Only meant for mutation
    /// testing of the axiom checks.
    pub fn with_psq_slope(mut self, slope: Quad) -> Self {
        self.slope = slope;
        self
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn d_rat(&self) -> &Rat {
        &self.d_rat
    }

    pub fn slope(&self) -> &Quad {
        &self.slope
    }

    pub fn has_standard_slope(&self) -> bool {
        self.slope == Quad::sqrt_d()
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::new(2).expect("2 is square-free")
    }
}

/// An element `a + b*sqrt(d)` of `F`. The representation is unique because
/// `sqrt d` is irrational, so equality is structural.
///
/// `Quad` deliberately has no `Ord`: the real order depends on `d`, so use
/// [`Quad::cmp_in`] or [`Quad::sign`] with a [`Config`].
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Quad {
    pub a: Rat,
    pub b: Rat,
}

impl Quad {
    pub fn new(a: Rat, b: Rat) -> Self {
        Quad { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        Quad { a, b: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Quad::rational(Rat::from_int(n))
    }

    pub fn zero() -> Self {
        Quad::default()
    }

    pub fn one() -> Self {
        Quad::from_int(1)
    }

    pub fn sqrt_d() -> Self {
        Quad {
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, k: &Rat) -> Quad {
        Quad {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    pub fn mul(&self, rhs: &Quad, cfg: &Config) -> Quad {
        let a = &self.a * &rhs.a + &(&self.b * &rhs.b) * cfg.d_rat();
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Quad { a, b }
    }

    /// `a^2 - d b^2`, the field norm.
    pub fn norm(&self, cfg: &Config) -> Rat {
        &self.a * &self.a - &(&self.b * &self.b) * cfg.d_rat()
    }

    pub fn conj(&self) -> Quad {
        Quad {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// `1/(a + b sqrt d) = (a - b sqrt d) / (a^2 - d b^2)`.
    pub fn inv(&self, cfg: &Config) -> Result<Quad> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(Quad::rational(self.a.recip()?));
        }
        let n = self.norm(cfg).recip()?;
        Ok(self.conj().scale(&n))
    }

    pub fn div(&self, rhs: &Quad, cfg: &Config) -> Result<Quad> {
        if rhs.b.is_zero() {
            let k = rhs.a.recip()?;
            return Ok(self.scale(&k));
        }
        Ok(self.mul(&rhs.inv(cfg)?, cfg))
    }

    /// Sign of the real number `a + b sqrt d`. When the parts disagree in
    /// sign the answer comes from comparing `a^2` with `d b^2` exactly.
    pub fn sign(&self, cfg: &Config) -> i8 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let aa = &self.a * &self.a;
        let dbb = &(&self.b * &self.b) * cfg.d_rat();
        match aa.cmp(&dbb) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a^2 = d b^2 with b != 0 would make sqrt d rational
            Ordering::Equal => unreachable!("d is square-free"),
        }
    }

    /// The real order on `F`.
    pub fn cmp_in(&self, other: &Quad, cfg: &Config) -> Ordering {
        match (self - other).sign(cfg) {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn lt(&self, other: &Quad, cfg: &Config) -> bool {
        self.cmp_in(other, cfg) == Ordering::Less
    }

    pub fn abs(&self, cfg: &Config) -> Quad {
        if self.sign(cfg) < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact floor of the real number.
    pub fn floor(&self, cfg: &Config) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor();
        }
        // b sqrt d = sgn(b) * sqrt(p^2 d) / q with b = p/q
        let p = self.b.numer();
        let q = self.b.denom();
        let s = (p * p * BigInt::from(cfg.d())).sqrt();
        let s = if p.is_negative() { -s - 1 } else { s };
        let estimate = &self.a + &Rat::new(s, q.clone()).expect("q > 0");
        let mut n = estimate.floor();
        loop {
            let nq = Quad::rational(Rat::from_int(n.clone()));
            if self.cmp_in(&nq, cfg) == Ordering::Less {
                n -= 1;
                continue;
            }
            let n1 = Quad::rational(Rat::from_int(n.clone() + 1));
            if self.cmp_in(&n1, cfg) != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Lexicographic comparison of the coordinates `(a, b)`. This is NOT
    /// the real order; it only gives canonical orderings of syntax.
    pub fn structural_cmp(&self, other: &Quad) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }

    pub fn to_f64(&self, cfg: &Config) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (cfg.d() as f64).sqrt()
    }
}

impl From<Rat> for Quad {
    fn from(a: Rat) -> Self {
        Quad::rational(a)
    }
}

impl Add<&Quad> for &Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        Quad {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        &self + &rhs
    }
}

impl Sub<&Quad> for &Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        Quad {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        &self - &rhs
    }
}

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        -&self
    }
}

impl fmt::Display for Quad {
    /// Literal syntax `p/q + r/s*rt`, where `rt` stands for `sqrt d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rt = |f: &mut fmt::Formatter<'_>, b: &Rat| -> fmt::Result {
            if *b == Rat::one() {
                write!(f, "rt")
            } else {
                write!(f, "{b}*rt")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => {
                if self.b == -Rat::one() {
                    write!(f, "-rt")
                } else {
                    rt(f, &self.b)
                }
            }
            (false, false) => {
                write!(f, "{}", self.a)?;
                if self.b.signum() < 0 {
                    write!(f, " - ")?;
                    rt(f, &-&self.b)
                } else {
                    write!(f, " + ")?;
                    rt(f, &self.b)
                }
            }
        }
    }
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Quad {
    type Err = Error;

    /// Parses sums of monomials `q`, `q*rt`, `rt`, e.g. `1/2 - 3*rt`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: "empty quad literal".into(),
            });
        }
        let mut out = Quad::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            let at_end = i == bytes.len();
            if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            let term = if body == "rt" {
                Quad::sqrt_d()
            } else if let Some(coef) = body.strip_suffix("*rt") {
                Quad::new(Rat::zero(), coef.parse()?)
            } else {
                Quad::rational(body.parse()?)
            };
            out = if neg { &out - &term } else { &out + &term };
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(Config::new(2).is_ok());
        assert!(Config::new(6).is_ok());
        assert!(matches!(Config::new(8), Err(Error::InvalidConfig(_))));
        assert!(matches!(Config::new(1), Err(Error::InvalidConfig(_))));
        assert!(matches!(Config::new(18), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn field_ops() {
        let c = Config::default();
        assert_eq!(&q("1 + rt") + &q("2 - rt"), q("3"));
        assert_eq!(q("1 + rt").mul(&q("1 - rt"), &c), q("-1"));
        let inv = q("1 + rt").inv(&c).unwrap();
        assert_eq!(inv, q("-1 + rt"));
        assert_eq!(inv.mul(&q("1 + rt"), &c), Quad::one());
        assert!(matches!(Quad::zero().inv(&c), Err(Error::DivisionByZero)));
    }

    #[test]
    fn signs() {
        let c = Config::default();
        assert_eq!(Quad::zero().sign(&c), 0);
        assert_eq!(q("1 + rt").sign(&c), 1);
        assert_eq!(q("3 - 2*rt").sign(&c), 1);
        assert_eq!(q("1 - rt").sign(&c), -1);
        assert_eq!(q("-3 + 2*rt").sign(&c), -1);
    }

    #[test]
    fn floors() {
        let c = Config::default();
        assert_eq!(q("rt").floor(&c), BigInt::from(1));
        assert_eq!(q("-rt").floor(&c), BigInt::from(-2));
        assert_eq!(q("100*rt").floor(&c), BigInt::from(141));
        assert_eq!(q("1/3 - 1/7*rt").floor(&c), BigInt::from(0));
        let c3 = Config::new(3).unwrap();
        assert_eq!(q("-1/2*rt").floor(&c3), BigInt::from(-1));
    }

    #[test]
    fn literal_round_trip() {
        for s in [
            "0",
            "3",
            "-1/2",
            "rt",
            "-rt",
            "2*rt",
            "1/2 + 3/4*rt",
            "1 - rt",
            "-5/3 - 7*rt",
        ] {
            assert_eq!(q(s).to_string(), s);
        }
    }
}
