//! Simplest-fraction search in a closed rational interval.

use num_bigint::BigInt;

use crate::numeric::Rational;

/// The fraction with the smallest denominator in `[u, v]`.
///
/// Walks the Stern–Brocot tree using continued-fraction strides: whenever an
/// integer lies in the interval it is returned, otherwise the integer part is
/// peeled off and the search continues on the reciprocal interval.
pub fn simplest_in(u: &Rational, v: &Rational) -> Rational {
    assert!(u <= v, "simplest_in: empty interval [{u}, {v}]");
    let c = u.ceil();
    if &c <= v {
        return c;
    }
    // u, v both in (n, n + 1)
    let n = u.floor();
    let lo = (v - &n).recip();
    let hi = (u - &n).recip();
    n + simplest_in(&lo, &hi).recip()
}

/// Smallest `q >= 1` such that some `p/q` in lowest terms lies in `[u, v]`.
pub fn min_denominator(u: &Rational, v: &Rational) -> BigInt {
    simplest_in(u, v).denom().clone()
}
