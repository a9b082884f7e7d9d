//! Continued fractions of elements of `F` and rational probes between them.

use std::cmp::Ordering;

use super::{Config, Quad, Rat};

/// Convergents `p_k/q_k` of the regular continued fraction of `x`, at most
/// `count` of them. Rational inputs have a finite expansion and may yield
/// fewer. Complete quotients stay exact in `F`, so nothing is lost to
/// rounding.
pub fn convergents(x: &Quad, cfg: &Config, count: usize) -> Vec<Rat> {
    use num_bigint::BigInt;
    let mut out = Vec::with_capacity(count);
    let (mut p2, mut p1) = (BigInt::from(0), BigInt::from(1));
    let (mut q2, mut q1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = x.clone();
    while out.len() < count {
        let a = rest.floor(cfg);
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        out.push(Rat::new(p.clone(), q.clone()).expect("q_k >= 1"));
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        let frac = &rest - &Quad::rational(Rat::from_int(a));
        if frac.is_zero() {
            break;
        }
        rest = frac.inv(cfg).expect("nonzero fractional part");
    }
    out
}

/// A bound of an interval of `F`; `None` is the corresponding infinity.
pub type Bound<'a> = Option<&'a Quad>;

/// A rational strictly between `lo` and `hi` (which must satisfy `lo < hi`).
///
/// Finite endpoints are replaced by convergents (starting at the tenth)
/// and the midpoint of the two approximants is taken; if that midpoint is
/// not strictly inside, deeper convergents are tried.
pub fn rational_between(lo: Bound<'_>, hi: Bound<'_>, cfg: &Config) -> Rat {
    match (lo, hi) {
        (None, None) => Rat::zero(),
        (Some(l), None) => Rat::from_int(l.floor(cfg) + 1),
        (None, Some(h)) => {
            let f = h.floor(cfg);
            Rat::from_int(f - 1)
        }
        (Some(l), Some(h)) => {
            debug_assert_eq!(l.cmp_in(h, cfg), Ordering::Less);
            let mut depth = 10;
            loop {
                let al = approximant(l, cfg, depth);
                let ah = approximant(h, cfg, depth);
                let mid = (&al + &ah) * Rat::new(1, 2).expect("2 != 0");
                let m = Quad::rational(mid.clone());
                if l.lt(&m, cfg) && m.lt(h, cfg) {
                    return mid;
                }
                depth += 10;
            }
        }
    }
}

/// The `depth`-th convergent of `x`, or `x` itself when the expansion is
/// shorter (rational `x`).
pub fn approximant(x: &Quad, cfg: &Config, depth: usize) -> Rat {
    if x.is_rational() {
        return x.a.clone();
    }
    convergents(x, cfg, depth)
        .pop()
        .expect("irrational numbers have infinite expansions")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Quad {
        s.parse().unwrap()
    }

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn sqrt2_convergents() {
        let cfg = Config::default();
        let cs = convergents(&Quad::sqrt_d(), &cfg, 6);
        let want: Vec<Rat> = ["1", "3/2", "7/5", "17/12", "41/29", "99/70"]
            .iter()
            .map(|s| r(s))
            .collect();
        assert_eq!(cs, want);
    }

    #[test]
    fn rational_expansion_terminates() {
        let cfg = Config::default();
        let cs = convergents(&q("43/19"), &cfg, 20);
        assert_eq!(cs.last().unwrap(), &r("43/19"));
        assert!(cs.len() < 20);
    }

    #[test]
    fn probes_land_inside() {
        let cfg = Config::default();
        let cases = [
            (q("0"), q("rt")),
            (q("rt"), q("3/2")),
            (q("41/29"), q("rt")),
            (q("rt"), q("99/70")),
            (q("-rt"), q("-1")),
            (q("1/3"), q("1/3 + 1/1000000*rt")),
        ];
        for (l, h) in cases {
            let m = Quad::rational(rational_between(Some(&l), Some(&h), &cfg));
            assert!(l.lt(&m, &cfg) && m.lt(&h, &cfg), "{l} < {m} < {h}");
        }
        let m = Quad::rational(rational_between(Some(&q("rt")), None, &cfg));
        assert!(q("rt").lt(&m, &cfg));
        let m = Quad::rational(rational_between(None, Some(&q("-rt")), &cfg));
        assert!(m.lt(&q("-rt"), &cfg));
    }
}
