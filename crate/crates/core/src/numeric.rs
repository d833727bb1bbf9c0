//! Exact rational scalars and closed-interval enclosures.
//!
//! Every quantity in the crate is a finite rational number stored in lowest
//! terms. Enclosures are closed intervals `[lo, hi]` with a conservative
//! `tight` flag that is only set when both endpoints are known to be the exact
//! infimum and supremum of the set they enclose.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

/// An exact rational number `num / den` with `den > 0` and `gcd(|num|, den) = 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num / den` in lowest terms.
    ///
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always strictly positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rational(self.0.ceil())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn min_of(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max_of(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Self {
        (self + other) / Rational::from_integer(2)
    }

    /// Lossy conversion for display and sampling only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering with `digits` significant digits, rounded half to even.
    ///
    /// The output has the shape `d.ddddde<exp>` (or `0` for zero) and is
    /// computed exactly from the stored fraction.
    pub fn to_scientific(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        let ten = BigInt::from(10);

        // Find exponent e with 10^e <= |x| < 10^(e+1).
        let mut exp: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
        let scaled_cmp = |e: i64| -> Ordering {
            // compare num/den with 10^e
            if e >= 0 {
                num.cmp(&(&den * ten.pow(e as u32)))
            } else {
                (&num * ten.pow((-e) as u32)).cmp(&den)
            }
        };
        while scaled_cmp(exp) == Ordering::Less {
            exp -= 1;
        }
        while scaled_cmp(exp + 1) != Ordering::Less {
            exp += 1;
        }

        // mantissa integer m = round(|x| * 10^(digits-1-exp))
        let shift = digits as i64 - 1 - exp;
        let (n, d) = if shift >= 0 {
            (&num * ten.pow(shift as u32), den.clone())
        } else {
            (num.clone(), &den * ten.pow((-shift) as u32))
        };
        let (q, r): (BigInt, BigInt) = n.div_rem(&d);
        let twice: BigInt = &r * 2;
        let mut mant = match twice.cmp(&d) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal => {
                if q.is_even() {
                    q
                } else {
                    q + 1
                }
            }
        };
        if mant.to_string().len() > digits {
            mant /= 10;
            exp += 1;
        }
        let s = mant.to_string();
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p`, `p/q` and decimal notation such as `-0.25`, all exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRationalError(s.to_string());
        if t.is_empty() {
            return Err(err());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = parse_int(p).ok_or_else(err)?;
            let q: BigInt = parse_int(q).ok_or_else(err)?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Rational::new(p, q));
        }
        if let Some((whole, frac)) = t.split_once('.') {
            let (neg, whole) = match whole.strip_prefix('-') {
                Some(w) => (true, w),
                None => (false, whole.strip_prefix('+').unwrap_or(whole)),
            };
            if whole.is_empty() && frac.is_empty() {
                return Err(err());
            }
            let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
            if !digits_ok(whole) || !digits_ok(frac) {
                return Err(err());
            }
            let mut all = String::with_capacity(whole.len() + frac.len());
            all.push_str(whole);
            all.push_str(frac);
            let n: BigInt = if all.is_empty() {
                BigInt::zero()
            } else {
                all.parse().map_err(|_| err())?
            };
            let d = BigInt::from(10).pow(frac.len() as u32);
            let n = if neg { -n } else { n };
            return Ok(Rational::new(n, d));
        }
        parse_int(t).map(Rational::from_integer).ok_or_else(err)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

/// Shorthand for `Rational::new(p, q)` on machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(x: &Rational) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Closed rational interval `[lo, hi]`.
///
/// `tight` means `lo` and `hi` are exactly the infimum and supremum of the
/// enclosed set; operations that cannot prove this clear the flag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
    tight: bool,
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational, tight: bool) -> Self {
        assert!(lo <= hi, "enclosure with lo {lo} > hi {hi}");
        Enclosure { lo, hi, tight }
    }

    /// A single exactly known value; always tight.
    pub fn point(x: Rational) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x,
            tight: true,
        }
    }

    pub fn zero() -> Self {
        Enclosure::point(Rational::zero())
    }

    /// Orders the endpoints.
    pub fn hull_of(a: Rational, b: Rational, tight: bool) -> Self {
        if a <= b {
            Enclosure::new(a, b, tight)
        } else {
            Enclosure::new(b, a, tight)
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_tight(&self) -> bool {
        self.tight
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn with_tight(mut self, tight: bool) -> Self {
        self.tight = tight;
        self
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Intersection, or `None` when disjoint. The result is never tight
    /// unless it coincides with a tight operand.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        if !self.intersects(other) {
            return None;
        }
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        let tight = (self.tight && lo == self.lo && hi == self.hi)
            || (other.tight && lo == other.lo && hi == other.hi);
        Some(Enclosure { lo, hi, tight })
    }

    /// Smallest interval containing both. Tight for tight operands, since it
    /// then bounds the union of the two enclosed sets exactly.
    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = std::cmp::min(&self.lo, &other.lo).clone();
        let hi = std::cmp::max(&self.hi, &other.hi).clone();
        let tight = self.tight && other.tight;
        Enclosure { lo, hi, tight }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
            tight: self.tight,
        }
    }

    pub fn shift(&self, c: &Rational) -> Enclosure {
        Enclosure {
            lo: &self.lo + c,
            hi: &self.hi + c,
            tight: self.tight,
        }
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)?;
        if self.tight {
            write!(f, "!")?;
        }
        Ok(())
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `[e1.lo + e2.lo, e1.hi + e2.hi]`. Tightness survives only when one operand
/// is a single point, in which case the other operand's flag carries over.
pub fn enc_add(e1: &Enclosure, e2: &Enclosure) -> Enclosure {
    let tight = (e1.is_degenerate() || e2.is_degenerate()) && e1.tight && e2.tight;
    Enclosure {
        lo: &e1.lo + &e2.lo,
        hi: &e1.hi + &e2.hi,
        tight,
    }
}

pub fn enc_sub(e1: &Enclosure, e2: &Enclosure) -> Enclosure {
    enc_add(e1, &e2.neg())
}

/// Scales by an exact constant; preserves tightness.
pub fn enc_scale(c: &Rational, e: &Enclosure) -> Enclosure {
    let a = c * &e.lo;
    let b = c * &e.hi;
    Enclosure::hull_of(a, b, e.tight)
}

/// Hull of the four endpoint products. Tight only when one factor is a
/// single point (then it reduces to [`enc_scale`]).
pub fn enc_mul(e1: &Enclosure, e2: &Enclosure) -> Enclosure {
    if e1.is_degenerate() && e1.tight {
        return enc_scale(&e1.lo, e2);
    }
    if e2.is_degenerate() && e2.tight {
        return enc_scale(&e2.lo, e1);
    }
    let products = [
        &e1.lo * &e2.lo,
        &e1.lo * &e2.hi,
        &e1.hi * &e2.lo,
        &e1.hi * &e2.hi,
    ];
    let lo = products.iter().min().unwrap().clone();
    let hi = products.iter().max().unwrap().clone();
    Enclosure {
        lo,
        hi,
        tight: false,
    }
}

/// Divides by a strictly positive constant.
pub fn enc_div_pos(e: &Enclosure, d: &Rational) -> Enclosure {
    debug_assert!(d.is_positive());
    Enclosure {
        lo: &e.lo / d,
        hi: &e.hi / d,
        tight: e.tight,
    }
}
