#![allow(dead_code)]

use darboux_core::{rat, Domain, Owner, Rational, StepFn};
use rand::Rng;

pub fn random_rational<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    max_den: i64,
) -> Rational {
    let q = rng.random_range(1..=max_den);
    let qr = Rational::from_integer(q);
    let p_lo = (lo * &qr).ceil();
    let p_hi = (hi * &qr).floor();
    if p_lo > p_hi {
        return lo.midpoint(hi);
    }
    let span = (&p_hi - &p_lo).to_f64() as i64;
    (p_lo + Rational::from_integer(rng.random_range(0..=span))) / qr
}

/// `lo <= u < v <= hi`.
pub fn random_interval<R: Rng>(rng: &mut R, dom: &Domain, max_den: i64) -> (Rational, Rational) {
    loop {
        let a = random_rational(rng, &dom.lo, &dom.hi, max_den);
        let b = random_rational(rng, &dom.lo, &dom.hi, max_den);
        if a != b {
            return (std::cmp::min(a.clone(), b.clone()), std::cmp::max(a, b));
        }
    }
}

pub fn random_step<R: Rng>(rng: &mut R, dom: &Domain, max_breaks: usize) -> StepFn {
    let n = rng.random_range(1..=max_breaks);
    let mut breaks: Vec<Rational> = (0..n)
        .map(|_| random_rational(rng, &dom.lo, &dom.hi, 12))
        .filter(|b| b > &dom.lo && b < &dom.hi)
        .collect();
    breaks.sort();
    breaks.dedup();
    let owners = breaks
        .iter()
        .map(|_| {
            if rng.random_bool(0.5) {
                Owner::Left
            } else {
                Owner::Right
            }
        })
        .collect();
    let values = (0..=breaks.len())
        .map(|_| rat(rng.random_range(-4..=4), rng.random_range(1..=3)))
        .collect();
    StepFn::with_owners(breaks, values, owners).unwrap()
}

/// Exact `∫_u^v s` for `u <= v`, summing value times overlap piece by piece.
pub fn step_integral(s: &StepFn, u: &Rational, v: &Rational) -> Rational {
    let mut edges = vec![u.clone()];
    edges.extend(s.breaks().iter().filter(|b| u < *b && *b < v).cloned());
    edges.push(v.clone());
    let mut total = Rational::zero();
    for w in edges.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        // the value at an interior point of the piece
        total += s.eval(&w[0].midpoint(&w[1])) * (&w[1] - &w[0]);
    }
    total
}

/// Smallest `q` with some `p/q` in `[u, v]`, by direct search.
pub fn brute_min_denominator(u: &Rational, v: &Rational) -> i64 {
    (1..)
        .find(|&q| {
            let qr = Rational::from_integer(q);
            &((u * &qr).ceil() / qr) <= v
        })
        .unwrap()
}
