//! Dense rational polynomials with exact range computation.
//!
//! The range on `[u, v]` is exact whenever every critical point inside the
//! interval is rational: rational roots of the derivative are found with the
//! rational root theorem and a Sturm sequence proves the deflated remainder
//! has no further roots in the interval. Otherwise a conservative enclosure
//! is built from interval Horner evaluation around the irrational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{enc_add, enc_mul, Enclosure, Rational};

/// Largest constant/leading coefficient whose divisors we are willing to enumerate.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

/// Minimum width (relative to the query interval) below which root-bearing
/// pieces are enclosed by interval evaluation instead of further bisection.
const ISOLATION_STEPS: u32 = 16;

/// `c0 + c1 x + ... + cn x^n`, trailing zeros trimmed (the zero polynomial is `[]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Polynomial {
        let mut out = vec![Rational::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / Rational::from_integer(k as i64 + 1)),
        );
        Polynomial::new(out)
    }

    /// Exact `∫_u^v p(x) dx`.
    pub fn integral(&self, u: &Rational, v: &Rational) -> Rational {
        let anti = self.antiderivative();
        anti.eval(v) - anti.eval(u)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    fn leading(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    /// Euclidean division `(quotient, remainder)`; `divisor` must be nonzero.
    fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::new(vec![]), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        let lead = divisor.leading();
        for k in (0..quot.len()).rev() {
            let coef = &rem[k + dd] / lead;
            if !coef.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let t = &coef * dc;
                    rem[k + j] -= t;
                }
            }
            quot[k] = coef;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Interval Horner evaluation; contains `{p(x) : x ∈ [s, t]}`.
    fn eval_enclosure(&self, s: &Rational, t: &Rational) -> Enclosure {
        let x = Enclosure::new(s.clone(), t.clone(), false);
        let mut acc = Enclosure::zero();
        for c in self.coeffs.iter().rev() {
            acc = enc_add(&enc_mul(&acc, &x), &Enclosure::point(c.clone()));
        }
        acc.with_tight(false)
    }

    /// Enclosure of `{p(x) : x ∈ [u, v]}`; tight when all interior critical
    /// points are rational.
    pub fn range(&self, u: &Rational, v: &Rational) -> Enclosure {
        assert!(u <= v);
        if u == v || self.degree().unwrap_or(0) <= 1 {
            let a = self.eval(u);
            let b = self.eval(v);
            return Enclosure::hull_of(a, b, true);
        }
        let deriv = self.derivative();
        let (roots, rest) = rational_roots(&deriv);

        let mut lo = std::cmp::min(self.eval(u), self.eval(v));
        let mut hi = std::cmp::max(self.eval(u), self.eval(v));
        for r in roots.iter().filter(|r| u <= *r && *r <= v) {
            let y = self.eval(r);
            if y < lo {
                lo = y.clone();
            }
            if y > hi {
                hi = y;
            }
        }
        let exact = Enclosure::new(lo, hi, true);
        if rest.degree().unwrap_or(0) == 0 {
            return exact;
        }
        let sturm = SturmChain::new(&rest);
        if sturm.roots_in_open(u, v) == Some(0) {
            return exact;
        }

        // Irrational critical points present: enclose the pieces carrying them.
        let mut out = exact.with_tight(false);
        let min_width = (v - u) / Rational::from_integer(1i64 << ISOLATION_STEPS);
        let mut stack = vec![(u.clone(), v.clone())];
        while let Some((s, t)) = stack.pop() {
            match sturm.roots_in_open(&s, &t) {
                Some(0) => {
                    // Monotone on the piece: endpoint values suffice.
                    let e = Enclosure::hull_of(self.eval(&s), self.eval(&t), false);
                    out = out.hull(&e).with_tight(false);
                }
                _ if (&t - &s) <= min_width => {
                    out = out.hull(&self.eval_enclosure(&s, &t)).with_tight(false);
                }
                _ => {
                    let m = s.midpoint(&t);
                    stack.push((m.clone(), t));
                    stack.push((s, m));
                }
            }
        }
        out
    }
}

/// Rational roots of `p` (distinct, ascending) and the deflated cofactor that
/// carries the remaining roots. Gives up on enumeration for huge coefficients
/// and then returns the polynomial itself as the cofactor.
pub(crate) fn rational_roots(p: &Polynomial) -> (Vec<Rational>, Polynomial) {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    if rest.degree().unwrap_or(0) == 0 {
        return (roots, rest);
    }
    // Strip x factors.
    if rest.coeffs[0].is_zero() {
        roots.push(Rational::zero());
        while rest.coeffs.first().is_some_and(Rational::is_zero) {
            rest.coeffs.remove(0);
        }
    }
    let mut found = true;
    while found && rest.degree().unwrap_or(0) >= 1 {
        found = false;
        let ints = integer_coeffs(&rest);
        let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
        let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
            break;
        };
        'search: for q in &qs {
            for p in &ps {
                for sign in [1i64, -1] {
                    let cand = Rational::new(BigInt::from(sign) * p, q.clone());
                    if rest.eval(&cand).is_zero() {
                        let factor = Polynomial::new(vec![-&cand, Rational::one()]);
                        while rest.degree().unwrap_or(0) >= 1 && rest.eval(&cand).is_zero() {
                            rest = rest.div_rem(&factor).0;
                        }
                        roots.push(cand);
                        found = true;
                        break 'search;
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    (roots, rest)
}

fn integer_coeffs(p: &Polynomial) -> Vec<BigInt> {
    let lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    scaled.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64().filter(|&n| n > 0 && n <= DIVISOR_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Sturm chain of a polynomial, for counting distinct real roots.
struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Polynomial::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<i32> = self
            .chain
            .iter()
            .map(|p| crate::numeric::signum(&p.eval(x)))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in the open interval `(s, t)`, or `None` if an endpoint
    /// is itself a root (the count would be ambiguous).
    fn roots_in_open(&self, s: &Rational, t: &Rational) -> Option<usize> {
        let p = &self.chain[0];
        if p.eval(s).is_zero() || p.eval(t).is_zero() {
            return None;
        }
        Some(self.variations(s).saturating_sub(self.variations(t)))
    }
}
