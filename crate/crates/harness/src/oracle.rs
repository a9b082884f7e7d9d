//! Sign of `a + b sqrt d` by fixed-point interval arithmetic, independent
//! of the exact comparison in the core crate.

use num_bigint::BigInt;
use num_traits::Signed;
use quadcut::Quad;

/// Bits of `sqrt d` kept after the binary point.
pub const PRECISION: u32 = 200;

/// `floor(sqrt(d) * 2^bits)`.
fn sqrt_floor(d: u64, bits: u32) -> BigInt {
    (BigInt::from(d) << (2 * bits)).sqrt()
}

/// The sign of `x`, or `None` when the enclosure of `x` contains 0 but `x`
/// is not known to be 0.
pub fn interval_sign(x: &Quad, d: u64) -> Option<i8> {
    let (a, b) = (&x.a, &x.b);
    if b.is_zero() {
        return Some(a.signum());
    }
    // x * qa * qb * 2^P = pa qb 2^P + pb qa s with s in [lo, lo + 1].
    let (pa, qa) = (a.numer(), a.denom());
    let (pb, qb) = (b.numer(), b.denom());
    let lo = sqrt_floor(d, PRECISION);
    let base = (pa * qb) << PRECISION;
    let k = pb * qa;
    let e1 = &base + &k * &lo;
    let e2 = &base + &k * (&lo + 1);
    let (min, max) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    if min.is_positive() {
        Some(1)
    } else if max.is_negative() {
        Some(-1)
    } else {
        None
    }
}
