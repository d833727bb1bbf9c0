//! Generalized primitives.
//!
//! A function `F` is a generalized primitive of a bounded `f` when every
//! difference quotient `(F(y) - F(x)) / (y - x)` lies between the infimum and
//! supremum of `f` on `[x, y]`. The indefinite lower and upper integrals are
//! always generalized primitives, and `f` is integrable exactly when any two
//! generalized primitives differ by a constant. This module constructs the
//! canonical ones, verifies candidates against the definition, and turns a
//! pair with a non-constant difference into a non-integrability certificate.

use std::fmt;

use crate::darboux::{
    definite_integral, integral_enclosure, IntegralResult, Partition, Status, DEFAULT_MAX_DEPTH,
};
use crate::error::{Error, Result};
use crate::funcmodel::{FuncSpec, Integrand};
use crate::numeric::{enc_div_pos, enc_sub, Enclosure, Rational};

/// A candidate primitive that can be evaluated (exactly or as an enclosure).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimitiveSpec {
    /// `F` given by an explicit formula.
    ClosedForm(FuncSpec),
    /// `F_*(x)`, the lower integral of `f` from `base` to `x`.
    IndefiniteLower {
        f: FuncSpec,
        base: Rational,
        tol: Rational,
        max_depth: u32,
    },
    /// `F^*(x)`, the upper integral of `f` from `base` to `x`.
    IndefiniteUpper {
        f: FuncSpec,
        base: Rational,
        tol: Rational,
        max_depth: u32,
    },
    /// `F(x) = λ x`.
    Linear(Rational),
}

fn default_tol() -> Rational {
    Rational::new(1, 1000)
}

impl PrimitiveSpec {
    /// `F_*` based at the left end of `f`'s domain.
    pub fn lower_of(f: &FuncSpec) -> Self {
        PrimitiveSpec::IndefiniteLower {
            base: f.domain().lo.clone(),
            f: f.clone(),
            tol: default_tol(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    /// `F^*` based at the left end of `f`'s domain.
    pub fn upper_of(f: &FuncSpec) -> Self {
        PrimitiveSpec::IndefiniteUpper {
            base: f.domain().lo.clone(),
            f: f.clone(),
            tol: default_tol(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    /// Sets the refinement target used by the indefinite kinds; others are unchanged.
    pub fn with_precision(mut self, new_tol: Rational, new_depth: u32) -> Self {
        if let PrimitiveSpec::IndefiniteLower { tol, max_depth, .. }
        | PrimitiveSpec::IndefiniteUpper { tol, max_depth, .. } = &mut self
        {
            *tol = new_tol;
            *max_depth = new_depth;
        }
        self
    }

    pub fn eval(&self, x: &Rational) -> Result<Enclosure> {
        match self {
            PrimitiveSpec::ClosedForm(g) => Ok(Enclosure::point(g.eval_point(x)?)),
            PrimitiveSpec::Linear(l) => Ok(Enclosure::point(l * x)),
            PrimitiveSpec::IndefiniteLower {
                f,
                base,
                tol,
                max_depth,
            } => indefinite_lower(f, base, x, tol, *max_depth),
            PrimitiveSpec::IndefiniteUpper {
                f,
                base,
                tol,
                max_depth,
            } => indefinite_upper(f, base, x, tol, *max_depth),
        }
    }

    /// The value when it is known exactly.
    pub fn eval_exact(&self, x: &Rational) -> Result<Rational> {
        let e = self.eval(x)?;
        if e.is_degenerate() {
            Ok(e.lo().clone())
        } else {
            Err(Error::UndecidedEvaluation(x.clone()))
        }
    }
}

impl fmt::Display for PrimitiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimitiveSpec::ClosedForm(g) => write!(f, "{g}"),
            PrimitiveSpec::Linear(l) => write!(f, "linear:{l}"),
            PrimitiveSpec::IndefiniteLower { .. } => write!(f, "lower"),
            PrimitiveSpec::IndefiniteUpper { .. } => write!(f, "upper"),
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Lower,
    Upper,
}

fn indefinite(
    f: &FuncSpec,
    a: &Rational,
    x: &Rational,
    tol: &Rational,
    max_depth: u32,
    side: Side,
) -> Result<Enclosure> {
    f.domain().check(a)?;
    f.domain().check(x)?;
    if a > x {
        return Err(Error::BadArgs(format!(
            "indefinite integral needs base {a} <= {x}"
        )));
    }
    if a == x {
        return Ok(Enclosure::zero());
    }
    // Exact only where the lower and upper Darboux integrals have closed forms.
    if let Some((lo, hi)) = f.exact_darboux(a, x) {
        return Ok(Enclosure::point(match side {
            Side::Lower => lo,
            Side::Upper => hi,
        }));
    }
    // [L, U] brackets both the lower and the upper integral.
    let r = integral_enclosure(f, a, x, tol, max_depth)?;
    Ok(r.enclosure.with_tight(false))
}

/// Enclosure of `F_*(x) = lower ∫_a^x f`.
pub fn indefinite_lower(
    f: &FuncSpec,
    a: &Rational,
    x: &Rational,
    tol: &Rational,
    max_depth: u32,
) -> Result<Enclosure> {
    indefinite(f, a, x, tol, max_depth, Side::Lower)
}

/// Enclosure of `F^*(x) = upper ∫_a^x f`.
pub fn indefinite_upper(
    f: &FuncSpec,
    a: &Rational,
    x: &Rational,
    tol: &Rational,
    max_depth: u32,
) -> Result<Enclosure> {
    indefinite(f, a, x, tol, max_depth, Side::Upper)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GpVerdict {
    Pass,
    Fail,
    /// Some pair could be neither confirmed nor refuted.
    Undecided,
}

impl fmt::Display for GpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GpVerdict::Pass => "Pass",
            GpVerdict::Fail => "Fail",
            GpVerdict::Undecided => "Undecided",
        })
    }
}

/// A grid pair whose difference quotient provably escapes the range of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: Rational,
    pub y: Rational,
    pub quotient: Enclosure,
    pub range: Enclosure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpReport {
    pub checked_pairs: usize,
    /// Proven violations, sorted by `(x, y)`.
    pub violations: Vec<Violation>,
    pub undecided_pairs: usize,
    pub verdict: GpVerdict,
}

/// Enclosure of `(F(y) - F(x)) / (y - x)` from enclosures of `F(x)`, `F(y)`.
fn quotient(fx: &Enclosure, fy: &Enclosure, x: &Rational, y: &Rational) -> Enclosure {
    enc_div_pos(&enc_sub(fy, fx), &(y - x))
}

/// Checks `inf f ≤ (F(y) - F(x)) / (y - x) ≤ sup f` on `[x, y]` for every
/// pair `x < y` of grid points.
pub fn verify_gp(prim: &PrimitiveSpec, f: &dyn Integrand, grid: &Partition) -> Result<GpReport> {
    let pts = grid.points();
    for x in [grid.start(), grid.end()] {
        f.domain().check(x)?;
    }
    let values = pts
        .iter()
        .map(|x| prim.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    let mut undecided = 0usize;
    let mut checked = 0usize;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            checked += 1;
            let q = quotient(&values[i], &values[j], &pts[i], &pts[j]);
            let range = f.range_on(&pts[i], &pts[j])?;
            if range.contains_enclosure(&q) {
                continue;
            }
            if range.is_tight() && !range.intersects(&q) {
                violations.push(Violation {
                    x: pts[i].clone(),
                    y: pts[j].clone(),
                    quotient: q,
                    range,
                });
            } else {
                undecided += 1;
            }
        }
    }
    let verdict = if !violations.is_empty() {
        GpVerdict::Fail
    } else if undecided > 0 {
        GpVerdict::Undecided
    } else {
        GpVerdict::Pass
    };
    Ok(GpReport {
        checked_pairs: checked,
        violations,
        undecided_pairs: undecided,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarrowVerdict {
    Consistent,
    Inconsistent,
}

impl fmt::Display for BarrowVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BarrowVerdict::Consistent => "Consistent",
            BarrowVerdict::Inconsistent => "Inconsistent",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BarrowReport {
    /// Enclosure of `F(b) - F(a)`.
    pub increment: Enclosure,
    pub integral: IntegralResult,
    pub verdict: BarrowVerdict,
}

/// Compares `F(b) - F(a)` against the Darboux enclosure of `∫_a^b f`.
pub fn barrow_check(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    prim: &PrimitiveSpec,
    tol: &Rational,
    max_depth: u32,
) -> Result<BarrowReport> {
    let integral = integral_enclosure(f, a, b, tol, max_depth)?;
    let increment = enc_sub(&prim.eval(b)?, &prim.eval(a)?);
    let consistent = if integral.status.is_certified() && increment.is_degenerate() {
        integral.enclosure.contains(increment.lo())
    } else {
        integral.enclosure.intersects(&increment)
    };
    Ok(BarrowReport {
        increment,
        integral,
        verdict: if consistent {
            BarrowVerdict::Consistent
        } else {
            BarrowVerdict::Inconsistent
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantDifference {
    /// `max (F - G) - min (F - G)` over the grid.
    pub spread: Rational,
    /// First grid point where `F - G` is largest.
    pub argmax: Rational,
    /// First grid point where `F - G` is smallest.
    pub argmin: Rational,
}

/// Measures how far `F - G` is from constant on the grid.
pub fn constant_difference(
    first: &PrimitiveSpec,
    second: &PrimitiveSpec,
    grid: &Partition,
) -> Result<ConstantDifference> {
    let mut best: Option<(Rational, Rational, Rational, Rational)> = None;
    for x in grid.points() {
        let d = first.eval_exact(x)? - second.eval_exact(x)?;
        best = Some(match best {
            None => (d.clone(), x.clone(), d, x.clone()),
            Some((max, amax, min, amin)) => {
                let (max, amax) = if d > max {
                    (d.clone(), x.clone())
                } else {
                    (max, amax)
                };
                let (min, amin) = if d < min { (d, x.clone()) } else { (min, amin) };
                (max, amax, min, amin)
            }
        });
    }
    let (max, argmax, min, argmin) = best.expect("partition has points");
    Ok(ConstantDifference {
        spread: max - min,
        argmax,
        argmin,
    })
}

/// Two verified generalized primitives whose difference is not constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIntegrabilityWitness {
    pub first: PrimitiveSpec,
    pub second: PrimitiveSpec,
    pub difference: ConstantDifference,
}

/// Searches `family` for two Pass-verified primitives with a non-constant
/// difference on `grid`. Members that fail, stay undecided, or cannot be
/// evaluated exactly are skipped.
pub fn find_witness(
    f: &dyn Integrand,
    family: &[PrimitiveSpec],
    grid: &Partition,
) -> Result<Option<NonIntegrabilityWitness>> {
    let mut verified = Vec::new();
    for p in family {
        if verify_gp(p, f, grid)?.verdict == GpVerdict::Pass {
            verified.push(p);
        }
    }
    for i in 0..verified.len() {
        for j in i + 1..verified.len() {
            match constant_difference(verified[i], verified[j], grid) {
                Ok(d) if d.spread.is_positive() => {
                    return Ok(Some(NonIntegrabilityWitness {
                        first: verified[i].clone(),
                        second: verified[j].clone(),
                        difference: d,
                    }))
                }
                Ok(_) | Err(Error::UndecidedEvaluation(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

/// Integrates `f` over its domain (exactly when a closed form exists); when refinement alone does not certify,
/// looks for a non-integrability certificate among `family` on a uniform
/// grid of `grid_n` pieces.
pub fn decide_integrability(
    f: &FuncSpec,
    family: &[PrimitiveSpec],
    tol: &Rational,
    max_depth: u32,
    grid_n: usize,
) -> Result<IntegralResult> {
    let dom = f.domain();
    let mut result = definite_integral(f, &dom.lo, &dom.hi, tol, max_depth)?;
    if result.status.is_certified() || dom.lo == dom.hi {
        return Ok(result);
    }
    let grid = Partition::uniform(&dom.lo, &dom.hi, grid_n)?;
    if let Some(w) = find_witness(f, family, &grid)? {
        result.status = Status::NotIntegrable(Box::new(w));
    }
    Ok(result)
}

/// Estimates of the four Dini derivatives of a primitive at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiniReport {
    /// `D_+`; `None` at the right end of the domain.
    pub lower_right: Option<Enclosure>,
    /// `D^+`
    pub upper_right: Option<Enclosure>,
    /// `D_-`; `None` at the left end of the domain.
    pub lower_left: Option<Enclosure>,
    /// `D^-`
    pub upper_left: Option<Enclosure>,
    /// Every estimate meets the one-sided range of `f` next to the point.
    pub sandwich_ok: bool,
}

impl DiniReport {
    pub fn estimates(&self) -> impl Iterator<Item = &Enclosure> {
        [
            &self.lower_right,
            &self.upper_right,
            &self.lower_left,
            &self.upper_left,
        ]
        .into_iter()
        .flatten()
    }
}

/// Difference quotients over `h = h0 / 2^k`, `k = 0..=steps`, on each side of
/// `x`. The trailing quarter of the schedule is aggregated: the lower Dini
/// estimate spans the smallest quotients and the upper one the largest. The
/// sandwich compares them with the range of `f` on the one-sided interval
/// covered by that tail.
pub fn dini_estimates(
    prim: &PrimitiveSpec,
    f: &dyn Integrand,
    x: &Rational,
    h0: &Rational,
    steps: u32,
) -> Result<DiniReport> {
    if !h0.is_positive() {
        return Err(Error::BadArgs(format!("h0 must be positive, got {h0}")));
    }
    let dom = f.domain();
    dom.check(x)?;
    let fx = prim.eval(x)?;
    let tail = ((steps as usize + 1) / 4).max(1);
    let two = Rational::from_integer(2);

    let mut sandwich_ok = true;
    let mut side = |reach: Rational, right: bool| -> Result<Option<(Enclosure, Enclosure)>> {
        if !reach.is_positive() {
            return Ok(None);
        }
        let mut h = std::cmp::min(h0.clone(), reach);
        let mut quotients = Vec::with_capacity(steps as usize + 1);
        let mut tail_start = h.clone();
        for k in 0..=steps {
            if k as usize + tail == steps as usize + 1 {
                tail_start = h.clone();
            }
            let q = if right {
                let y = x + &h;
                quotient(&fx, &prim.eval(&y)?, x, &y)
            } else {
                let y = x - &h;
                quotient(&prim.eval(&y)?, &fx, &y, x)
            };
            quotients.push(q);
            h = &h / &two;
        }
        let tail_q = &quotients[quotients.len() - tail..];
        let lower = Enclosure::new(
            tail_q.iter().map(|q| q.lo()).min().unwrap().clone(),
            tail_q.iter().map(|q| q.hi()).min().unwrap().clone(),
            false,
        );
        let upper = Enclosure::new(
            tail_q.iter().map(|q| q.lo()).max().unwrap().clone(),
            tail_q.iter().map(|q| q.hi()).max().unwrap().clone(),
            false,
        );
        // every tail quotient is a slope over a subinterval of this one
        let bound = if right {
            f.range_on(x, &(x + &tail_start))?
        } else {
            f.range_on(&(x - &tail_start), x)?
        };
        sandwich_ok &= lower.intersects(&bound) && upper.intersects(&bound);
        Ok(Some((lower, upper)))
    };
    let right = side(&dom.hi - x, true)?;
    let left = side(x - &dom.lo, false)?;
    let (lower_right, upper_right) = right.map_or((None, None), |(l, u)| (Some(l), Some(u)));
    let (lower_left, upper_left) = left.map_or((None, None), |(l, u)| (Some(l), Some(u)));
    Ok(DiniReport {
        lower_right,
        upper_right,
        lower_left,
        upper_left,
        sandwich_ok,
    })
}

/// `Σ |(F(ξ_i) - F(x_{i-1}))/(ξ_i - x_{i-1}) - (F(x_i) - F(ξ'_i))/(x_i - ξ'_i)| (x_i - x_{i-1})`.
pub fn thomson_sum(
    prim: &PrimitiveSpec,
    subdivision: &Partition,
    xi: &[Rational],
    xi_prime: &[Rational],
) -> Result<Rational> {
    if xi.len() != subdivision.len() || xi_prime.len() != subdivision.len() {
        return Err(Error::BadArgs(format!(
            "need {} associated points per list, got {} and {}",
            subdivision.len(),
            xi.len(),
            xi_prime.len()
        )));
    }
    let mut total = Rational::zero();
    for (((x0, x1), s), t) in subdivision.pieces().zip(xi).zip(xi_prime) {
        if !(x0 < s && s <= t && t < x1) {
            return Err(Error::BadArgs(format!(
                "associated points {s}, {t} must satisfy {x0} < ξ ≤ ξ' < {x1}"
            )));
        }
        let f0 = prim.eval_exact(x0)?;
        let f1 = prim.eval_exact(x1)?;
        let fs = prim.eval_exact(s)?;
        let ft = prim.eval_exact(t)?;
        let left = (fs - f0) / (s - x0);
        let right = (f1 - ft) / (x1 - t);
        total += (left - right).abs() * (x1 - x0);
    }
    Ok(total)
}

/// Ways of picking the associated points in each piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThomsonScheme {
    /// `ξ = ξ'` at the midpoint.
    Midpoint,
    /// `ξ = ξ'` at distance `Δ / 2^k` from the left end.
    LeftBiased(u32),
    /// `ξ = ξ'` at distance `Δ / 2^k` from the right end.
    RightBiased(u32),
    /// `ξ` near the left end and `ξ'` near the right end, both at `Δ / 2^k`.
    Spread(u32),
}

/// The associated points a scheme picks for every piece of `subdivision`.
pub fn associated_points(
    subdivision: &Partition,
    scheme: ThomsonScheme,
) -> (Vec<Rational>, Vec<Rational>) {
    let frac = |k: u32| Rational::new(1, 1i64 << k.clamp(1, 62));
    subdivision
        .pieces()
        .map(|(a, b)| {
            let d = b - a;
            match scheme {
                ThomsonScheme::Midpoint => {
                    let m = a.midpoint(b);
                    (m.clone(), m)
                }
                ThomsonScheme::LeftBiased(k) => {
                    let p = a + &(&d * frac(k));
                    (p.clone(), p)
                }
                ThomsonScheme::RightBiased(k) => {
                    let p = b - &(&d * frac(k));
                    (p.clone(), p)
                }
                ThomsonScheme::Spread(k) => {
                    let k = k.max(2);
                    (a + &(&d * frac(k)), b - &(&d * frac(k)))
                }
            }
        })
        .unzip()
}

/// Largest Thomson sum over the midpoint scheme and the endpoint-biased
/// schemes up to `bias_levels`. A large value falsifies the condition at
/// this mesh; a small one proves nothing.
pub fn thomson_worst(
    prim: &PrimitiveSpec,
    subdivision: &Partition,
    bias_levels: u32,
) -> Result<(Rational, ThomsonScheme)> {
    let mut schemes = vec![ThomsonScheme::Midpoint];
    for k in 1..=bias_levels {
        schemes.push(ThomsonScheme::LeftBiased(k));
        schemes.push(ThomsonScheme::RightBiased(k));
        if k >= 2 {
            schemes.push(ThomsonScheme::Spread(k));
        }
    }
    let mut worst: Option<(Rational, ThomsonScheme)> = None;
    for scheme in schemes {
        let (xi, xi_prime) = associated_points(subdivision, scheme);
        let s = thomson_sum(prim, subdivision, &xi, &xi_prime)?;
        if worst.as_ref().is_none_or(|(w, _)| &s > w) {
            worst = Some((s, scheme));
        }
    }
    Ok(worst.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{Domain, Kind, StepFn};
    use crate::numeric::rat;

    fn poly(c: &[(i64, i64)]) -> FuncSpec {
        FuncSpec::polynomial(c.iter().map(|&(p, q)| rat(p, q)).collect(), Domain::unit())
    }

    fn grid(n: usize) -> Partition {
        Partition::uniform(&rat(0, 1), &rat(1, 1), n).unwrap()
    }

    #[test]
    fn indefinite_examples() {
        let d = FuncSpec::dirichlet();
        let z = rat(0, 1);
        let tol = rat(1, 1000);
        assert_eq!(
            indefinite_lower(&d, &z, &rat(3, 4), &tol, 24).unwrap(),
            Enclosure::point(rat(0, 1))
        );
        assert_eq!(
            indefinite_upper(&d, &z, &rat(3, 4), &tol, 24).unwrap(),
            Enclosure::point(rat(3, 4))
        );
        let e = indefinite_lower(&poly(&[(0, 1), (1, 1)]), &z, &rat(1, 1), &tol, 24).unwrap();
        assert!(e.contains(&rat(1, 2)) && e.width() <= tol);
        assert_eq!(
            indefinite_upper(&d, &rat(1, 3), &rat(1, 3), &tol, 24).unwrap(),
            Enclosure::zero()
        );
        assert!(indefinite_lower(&d, &rat(1, 2), &rat(1, 3), &tol, 24).is_err());
    }

    #[test]
    fn indefinite_without_closed_form_is_an_enclosure() {
        // |x - 1/2| has no closed form here; falls back to refinement
        let f = FuncSpec::on_unit(Kind::Abs(Box::new(Kind::Polynomial(
            crate::funcmodel::Polynomial::new(vec![rat(-1, 2), rat(1, 1)]),
        ))));
        let e = indefinite_lower(&f, &rat(0, 1), &rat(1, 1), &rat(1, 100), 24).unwrap();
        assert!(e.contains(&rat(1, 4)));
        assert!(!e.is_degenerate());
    }

    #[test]
    fn verify_gp_examples() {
        let d = FuncSpec::dirichlet();
        let r = verify_gp(&PrimitiveSpec::Linear(rat(1, 2)), &d, &grid(16)).unwrap();
        assert_eq!(r.verdict, GpVerdict::Pass);
        assert_eq!(r.checked_pairs, 17 * 16 / 2);

        let r = verify_gp(&PrimitiveSpec::Linear(rat(2, 1)), &d, &grid(1)).unwrap();
        assert_eq!(r.verdict, GpVerdict::Fail);
        assert_eq!(r.violations[0].quotient, Enclosure::point(rat(2, 1)));

        let half_square = PrimitiveSpec::ClosedForm(poly(&[(0, 1), (0, 1), (1, 2)]));
        let r = verify_gp(&half_square, &poly(&[(0, 1), (1, 1)]), &grid(16)).unwrap();
        assert_eq!(r.verdict, GpVerdict::Pass);
    }

    #[test]
    fn verify_gp_checks_all_pairs() {
        // f jumps from 0 to 1 at 1/2
        let f = FuncSpec::step(
            StepFn::new(vec![rat(1, 2)], vec![rat(0, 1), rat(1, 1)]).unwrap(),
            Domain::unit(),
        );
        // F = max(0, 2x - 1), written as (x - 1/2) + |x - 1/2|
        let prim = PrimitiveSpec::ClosedForm(FuncSpec::on_unit(Kind::Sum(
            Box::new(Kind::Polynomial(crate::funcmodel::Polynomial::new(vec![
                rat(-1, 2),
                rat(1, 1),
            ]))),
            Box::new(Kind::Abs(Box::new(Kind::Polynomial(
                crate::funcmodel::Polynomial::new(vec![rat(-1, 2), rat(1, 1)]),
            )))),
        )));
        let r = verify_gp(&prim, &f, &grid(2)).unwrap();
        // slope 2 on [1/2, 1] escapes [1, 1]; the pair (0, 1) with slope 1 is fine
        assert_eq!(r.verdict, GpVerdict::Fail);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].x, rat(1, 2));
    }

    #[test]
    fn undecided_when_enclosures_overlap() {
        // a wide primitive enclosure cannot be confirmed or refuted
        let f = FuncSpec::on_unit(Kind::Abs(Box::new(Kind::Polynomial(
            crate::funcmodel::Polynomial::new(vec![rat(-1, 2), rat(1, 1)]),
        ))));
        let prim = PrimitiveSpec::IndefiniteLower {
            f: f.clone(),
            base: rat(0, 1),
            tol: rat(1, 4),
            max_depth: 4,
        };
        let r = verify_gp(&prim, &f, &grid(8)).unwrap();
        assert_eq!(r.verdict, GpVerdict::Undecided);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn barrow_examples() {
        let f = poly(&[(0, 1), (1, 1)]);
        let prim = PrimitiveSpec::ClosedForm(poly(&[(0, 1), (0, 1), (1, 2)]));
        let r = barrow_check(&f, &rat(0, 1), &rat(1, 1), &prim, &rat(1, 1000), 24).unwrap();
        assert_eq!(r.verdict, BarrowVerdict::Consistent);
        assert_eq!(r.increment, Enclosure::point(rat(1, 2)));

        let r = barrow_check(&f, &rat(1, 3), &rat(1, 3), &prim, &rat(1, 1000), 24).unwrap();
        assert_eq!(r.verdict, BarrowVerdict::Consistent);

        let wrong = PrimitiveSpec::Linear(rat(1, 1));
        let r = barrow_check(&f, &rat(0, 1), &rat(1, 1), &wrong, &rat(1, 1000), 24).unwrap();
        assert_eq!(r.verdict, BarrowVerdict::Inconsistent);

        // Dirichlet: each linear primitive alone is compatible with [0, 1] ...
        let d = FuncSpec::dirichlet();
        let f0 = PrimitiveSpec::Linear(rat(0, 1));
        let f1 = PrimitiveSpec::Linear(rat(1, 1));
        let r0 = barrow_check(&d, &rat(0, 1), &rat(1, 1), &f0, &rat(1, 2), 6).unwrap();
        let r1 = barrow_check(&d, &rat(0, 1), &rat(1, 1), &f1, &rat(1, 2), 6).unwrap();
        assert_eq!(r0.verdict, BarrowVerdict::Consistent);
        assert_eq!(r1.verdict, BarrowVerdict::Consistent);
        // ... but their increments disagree, so no single value A serves both
        assert_ne!(r0.increment, r1.increment);
    }

    #[test]
    fn constant_difference_examples() {
        let f1 = PrimitiveSpec::Linear(rat(1, 1));
        let f0 = PrimitiveSpec::Linear(rat(0, 1));
        let d = constant_difference(&f1, &f0, &grid(4)).unwrap();
        assert_eq!(d.spread, rat(1, 1));
        assert_eq!((d.argmax, d.argmin), (rat(1, 1), rat(0, 1)));

        assert_eq!(
            constant_difference(&f1, &f1, &grid(4)).unwrap().spread,
            rat(0, 1)
        );

        let a = PrimitiveSpec::ClosedForm(poly(&[(0, 1), (0, 1), (1, 2)]));
        let b = PrimitiveSpec::ClosedForm(poly(&[(3, 1), (0, 1), (1, 2)]));
        assert_eq!(
            constant_difference(&a, &b, &grid(4)).unwrap().spread,
            rat(0, 1)
        );

        let f = FuncSpec::on_unit(Kind::Abs(Box::new(Kind::Thomae)));
        let wide = PrimitiveSpec::IndefiniteLower {
            f,
            base: rat(0, 1),
            tol: rat(1, 2),
            max_depth: 2,
        };
        assert!(matches!(
            constant_difference(&wide, &f0, &grid(4)),
            Err(Error::UndecidedEvaluation(_))
        ));
    }

    #[test]
    fn dirichlet_is_certified_not_integrable() {
        let d = FuncSpec::dirichlet();
        let family = [PrimitiveSpec::lower_of(&d), PrimitiveSpec::upper_of(&d)];
        let r = decide_integrability(&d, &family, &rat(1, 100), 8, 16).unwrap();
        let Status::NotIntegrable(w) = r.status else {
            panic!("expected a certificate, got {:?}", r.status);
        };
        assert_eq!(w.difference.spread, rat(1, 1));

        let x = poly(&[(0, 1), (1, 1)]);
        let family = [PrimitiveSpec::lower_of(&x), PrimitiveSpec::upper_of(&x)];
        let r = decide_integrability(&x, &family, &rat(1, 100), 24, 16).unwrap();
        assert_eq!(r.status, Status::Certified);
    }

    #[test]
    fn dini_examples() {
        let x = poly(&[(0, 1), (1, 1)]);
        let prim = PrimitiveSpec::ClosedForm(poly(&[(0, 1), (0, 1), (1, 2)]));
        let r = dini_estimates(&prim, &x, &rat(1, 2), &rat(1, 4), 20).unwrap();
        assert_eq!(r.estimates().count(), 4);
        for e in r.estimates() {
            assert!(e.width() < rat(1, 1000));
            assert!((e.lo() - &rat(1, 2)).abs() < rat(1, 1000));
        }
        assert!(r.sandwich_ok);

        let d = FuncSpec::dirichlet();
        let r = dini_estimates(
            &PrimitiveSpec::Linear(rat(0, 1)),
            &d,
            &rat(1, 3),
            &rat(1, 4),
            20,
        )
        .unwrap();
        for e in r.estimates() {
            assert_eq!(e, &Enclosure::new(rat(0, 1), rat(0, 1), false));
        }
        assert!(r.sandwich_ok);

        let kink =
            PrimitiveSpec::ClosedForm(FuncSpec::on_unit(Kind::Abs(Box::new(Kind::Polynomial(
                crate::funcmodel::Polynomial::new(vec![rat(-1, 2), rat(1, 1)]),
            )))));
        let sign = FuncSpec::step(
            StepFn::new(vec![rat(1, 2)], vec![rat(-1, 1), rat(1, 1)]).unwrap(),
            Domain::unit(),
        );
        let r = dini_estimates(&kink, &sign, &rat(1, 2), &rat(1, 4), 10).unwrap();
        assert!(r.lower_right.as_ref().unwrap().contains(&rat(1, 1)));
        assert!(r.upper_left.as_ref().unwrap().contains(&rat(-1, 1)));
        assert!(r.sandwich_ok);

        // one-sided at the ends of the domain
        let r = dini_estimates(&prim, &x, &rat(0, 1), &rat(1, 4), 8).unwrap();
        assert!(r.lower_left.is_none() && r.lower_right.is_some());
        // a non-primitive breaks the sandwich
        let r = dini_estimates(
            &PrimitiveSpec::Linear(rat(2, 1)),
            &d,
            &rat(1, 3),
            &rat(1, 4),
            8,
        )
        .unwrap();
        assert!(!r.sandwich_ok);
    }

    #[test]
    fn thomson_examples() {
        let lin = PrimitiveSpec::Linear(rat(1, 1));
        let p = grid(3);
        let xi = vec![rat(1, 9), rat(4, 9), rat(7, 9)];
        let xp = vec![rat(2, 9), rat(4, 9), rat(8, 9)];
        assert_eq!(thomson_sum(&lin, &p, &xi, &xp).unwrap(), rat(0, 1));

        let square = PrimitiveSpec::ClosedForm(poly(&[(0, 1), (0, 1), (1, 1)]));
        for n in [4usize, 8] {
            let p = grid(n);
            let (xi, xp) = associated_points(&p, ThomsonScheme::Midpoint);
            assert_eq!(
                thomson_sum(&square, &p, &xi, &xp).unwrap(),
                rat(1, n as i64)
            );
        }
        // ordering violations
        assert!(thomson_sum(&lin, &p, &xp, &xi).is_err());
        assert!(thomson_sum(&lin, &p, &xi[..2], &xp[..2]).is_err());
        let bad = vec![rat(0, 1), rat(4, 9), rat(7, 9)];
        assert!(thomson_sum(&lin, &p, &bad, &xp).is_err());
    }

    #[test]
    fn thomson_falsifier_flags_a_jump() {
        // F^* of a step with a jump is a kink; endpoint-biased schemes see it
        let f = FuncSpec::step(
            StepFn::new(vec![rat(1, 3)], vec![rat(0, 1), rat(1, 1)]).unwrap(),
            Domain::unit(),
        );
        let prim = PrimitiveSpec::upper_of(&f);
        let p = grid(4);
        let (worst, _) = thomson_worst(&prim, &p, 6).unwrap();
        let (mid, _) = thomson_worst(&prim, &p, 0).unwrap();
        assert!(worst >= mid);
        assert!(worst.is_positive());
    }
}
