//! Substitutions `G(t) = c + ∫_a^t g` and the change-of-variable identity
//! `∫_{G(a)}^{G(b)} f = ∫_a^b f(G(t)) g(t) dt`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::darboux::{definite_integral, integral_enclosure, IntegralResult, Status};
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, FuncSpec, Integrand, RangeResult};
use crate::numeric::{enc_add, enc_mul, Enclosure, Rational};

/// Bisection levels spent on sign-changing pieces of `g` when enclosing the
/// range of an exactly evaluable `G`.
const RANGE_SPLIT_DEPTH: u32 = 6;

/// `G(t) = c + ∫_a^t g(s) ds` with `a` the left end of `g`'s domain.
///
/// Values of `G` that are not available in closed form are computed by
/// refinement at the substitution's tolerance and cached per point.
pub struct Substitution {
    g: FuncSpec,
    c: Rational,
    tol: Rational,
    max_depth: u32,
    cache: RwLock<BTreeMap<Rational, Enclosure>>,
}

impl Clone for Substitution {
    fn clone(&self) -> Self {
        Substitution {
            g: self.g.clone(),
            c: self.c.clone(),
            tol: self.tol.clone(),
            max_depth: self.max_depth,
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Substitution")
            .field("g", &self.g)
            .field("c", &self.c)
            .finish()
    }
}

impl Substitution {
    pub fn new(g: FuncSpec, c: Rational, tol: Rational, max_depth: u32) -> Result<Self> {
        if !tol.is_positive() {
            return Err(Error::BadArgs(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(Substitution {
            g,
            c,
            tol,
            max_depth,
            cache: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn g(&self) -> &FuncSpec {
        &self.g
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// Base point `a`.
    pub fn base(&self) -> &Rational {
        &self.g.domain().lo
    }

    pub fn domain(&self) -> &Domain {
        self.g.domain()
    }

    /// `G(t)` when `∫_a^t g` has a closed form.
    pub fn exact_at(&self, t: &Rational) -> Option<Rational> {
        match self.g.exact_darboux(self.base(), t) {
            Some((l, u)) if l == u => Some(&self.c + &l),
            _ => None,
        }
    }

    /// Enclosure of `G(t)`; degenerate whenever `∫_a^t g` has a closed form.
    pub fn accumulate_g(&self, t: &Rational, tol: &Rational, max_depth: u32) -> Result<Enclosure> {
        self.g.domain().check(t)?;
        if let Some(v) = self.exact_at(t) {
            return Ok(Enclosure::point(v));
        }
        let r = integral_enclosure(&self.g, self.base(), t, tol, max_depth)?;
        let fresh = r.enclosure.shift(&self.c);
        let mut cache = self.cache.write().unwrap();
        let merged = match cache.get(t) {
            Some(old) => old.intersect(&fresh).unwrap_or(fresh),
            None => fresh,
        };
        cache.insert(t.clone(), merged.clone());
        Ok(merged)
    }

    /// `G(t)` at the substitution's own tolerance.
    pub fn g_at(&self, t: &Rational) -> Result<Enclosure> {
        if let Some(e) = self.cache.read().unwrap().get(t) {
            return Ok(e.clone());
        }
        self.accumulate_g(t, &self.tol.clone(), self.max_depth)
    }

    /// Enclosure of `{G(z) : z ∈ [u, v]}`.
    ///
    /// Splits at the known breakpoints of `g`. Where `g` has constant sign,
    /// `G` is monotone and the hull of the endpoint values is used; elsewhere
    /// the two Lipschitz cones from the endpoints are intersected.
    pub fn g_range(&self, u: &Rational, v: &Rational) -> Result<Enclosure> {
        self.g.check_interval(u, v)?;
        if u == v {
            return self.g_at(u);
        }
        let mut cuts = vec![u.clone()];
        cuts.extend(self.g.breakpoints(u, v));
        cuts.push(v.clone());
        let exact = self.exact_at(u).is_some();
        let mut out: Option<Enclosure> = None;
        for w in cuts.windows(2) {
            let piece =
                self.piece_range(&w[0], &w[1], if exact { RANGE_SPLIT_DEPTH } else { 0 })?;
            out = Some(match out {
                None => piece,
                Some(acc) => acc.hull(&piece),
            });
        }
        Ok(out.unwrap().with_tight(false))
    }

    fn piece_range(&self, u: &Rational, v: &Rational, split: u32) -> Result<Enclosure> {
        let slope = self.g.range_on(u, v)?;
        let gu = self.g_at(u)?;
        let gv = self.g_at(v)?;
        if !slope.lo().is_negative() || !slope.hi().is_positive() {
            return Ok(gu.hull(&gv));
        }
        if split > 0 {
            let m = u.midpoint(v);
            let left = self.piece_range(u, &m, split - 1)?;
            let right = self.piece_range(&m, v, split - 1)?;
            return Ok(left.hull(&right));
        }
        Ok(lipschitz_cone(&gu, &gv, &slope, &(v - u)))
    }
}

/// Range of a function on an interval of length `len` whose endpoint values
/// lie in `gu`, `gv` and whose slopes lie in `slope = [m, M]` with `m < 0 < M`.
fn lipschitz_cone(gu: &Enclosure, gv: &Enclosure, slope: &Enclosure, len: &Rational) -> Enclosure {
    let (m, big_m) = (slope.lo(), slope.hi());
    let spread = big_m - m;
    let clamp = |s: Rational| std::cmp::min(std::cmp::max(s, Rational::zero()), len.clone());
    // highest point: where the rise from u at slope M meets the descent to v at slope m
    let s_hi = clamp((gv.hi() - gu.hi() - m * len) / &spread);
    let hi = gu.hi() + &(big_m * &s_hi);
    // lowest point: the fall from u at slope m meets the climb to v at slope M
    let s_lo = clamp((big_m * len - (gv.lo() - gu.lo())) / &spread);
    let lo = gu.lo() + &(m * &s_lo);
    Enclosure::hull_of(lo, hi, false)
}

/// `t ↦ f(G(t)) g(t)` on the domain of `g`.
#[derive(Clone, Debug)]
pub struct ComposedIntegrand {
    f: FuncSpec,
    sub: Arc<Substitution>,
}

/// Builds `(f ∘ G) g`; fails when the range enclosure of `G` leaves `f`'s domain.
pub fn composed_integrand(f: &FuncSpec, sub: Arc<Substitution>) -> Result<ComposedIntegrand> {
    let dom = sub.domain().clone();
    let hull = sub.g_range(&dom.lo, &dom.hi)?;
    let fd = f.domain();
    if hull.lo() < &fd.lo || hull.hi() > &fd.hi {
        return Err(Error::DomainMismatch {
            g_lo: hull.lo().clone(),
            g_hi: hull.hi().clone(),
            lo: fd.lo.clone(),
            hi: fd.hi.clone(),
        });
    }
    Ok(ComposedIntegrand { f: f.clone(), sub })
}

impl ComposedIntegrand {
    pub fn outer(&self) -> &FuncSpec {
        &self.f
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    fn clip_to_outer(&self, e: &Enclosure) -> Enclosure {
        let fd = self.f.domain();
        let dom = Enclosure::new(fd.lo.clone(), fd.hi.clone(), false);
        // G's true values lie in f's domain, so the clipped enclosure is still sound
        e.intersect(&dom).unwrap_or(dom)
    }
}

impl Integrand for ComposedIntegrand {
    fn domain(&self) -> &Domain {
        self.sub.domain()
    }

    fn eval_point(&self, t: &Rational) -> Result<Rational> {
        self.domain().check(t)?;
        let x = self
            .sub
            .exact_at(t)
            .ok_or_else(|| Error::UndecidedEvaluation(t.clone()))?;
        Ok(self.f.eval_point(&x)? * self.sub.g.eval_point(t)?)
    }

    fn range_on(&self, u: &Rational, v: &Rational) -> Result<RangeResult> {
        self.check_interval(u, v)?;
        if u == v {
            if let Ok(y) = self.eval_point(u) {
                return Ok(Enclosure::point(y));
            }
        }
        let gr = self.clip_to_outer(&self.sub.g_range(u, v)?);
        let fr = self.f.range_on(gr.lo(), gr.hi())?;
        let slope = self.sub.g.range_on(u, v)?;
        Ok(enc_mul(&fr, &slope).with_tight(false))
    }

    fn breakpoints(&self, u: &Rational, v: &Rational) -> Vec<Rational> {
        self.sub.g.breakpoints(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvVerdict {
    /// The two enclosures intersect.
    Agree,
    /// Disjoint enclosures, both certified.
    Violation,
    /// Disjoint, but at least one side is not certified.
    Inconclusive,
}

impl fmt::Display for CvVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CvVerdict::Agree => "Agree",
            CvVerdict::Violation => "Violation",
            CvVerdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CvReport {
    pub g_a: Enclosure,
    pub g_b: Enclosure,
    /// `∫_{G(a)}^{G(b)} f`, orientation-signed.
    pub lhs: IntegralResult,
    /// `∫_a^b f(G(t)) g(t) dt`.
    pub rhs: IntegralResult,
    pub verdict: CvVerdict,
}

/// Computes both sides of the change-of-variable formula and compares them.
pub fn change_var_check(
    f: &FuncSpec,
    sub: Arc<Substitution>,
    tol: &Rational,
    max_depth: u32,
) -> Result<CvReport> {
    let composed = composed_integrand(f, Arc::clone(&sub))?;
    let dom = sub.domain().clone();
    let g_a = sub.g_at(&dom.lo)?;
    let g_b = sub.g_at(&dom.hi)?;
    let lhs = outer_integral(f, sub.c(), &g_b, tol, max_depth)?;
    let rhs = integral_enclosure(&composed, &dom.lo, &dom.hi, tol, max_depth)?;
    let verdict = if lhs.enclosure.intersects(&rhs.enclosure) {
        CvVerdict::Agree
    } else if lhs.status.is_certified() && rhs.status.is_certified() {
        CvVerdict::Violation
    } else {
        CvVerdict::Inconclusive
    };
    Ok(CvReport {
        g_a,
        g_b,
        lhs,
        rhs,
        verdict,
    })
}

/// `∫_c^{G(b)} f` when `G(b)` is only known to lie in an enclosure: integrate
/// to its lower end and bound the remainder by the range of `f` there.
fn outer_integral(
    f: &FuncSpec,
    c: &Rational,
    g_b: &Enclosure,
    tol: &Rational,
    max_depth: u32,
) -> Result<IntegralResult> {
    if g_b.is_degenerate() {
        return definite_integral(f, c, g_b.lo(), tol, max_depth);
    }
    let fd = f.domain();
    let lo = std::cmp::max(g_b.lo(), &fd.lo).clone();
    let hi = std::cmp::min(g_b.hi(), &fd.hi).clone();
    let base = definite_integral(f, c, &lo, tol, max_depth)?;
    let w = &hi - &lo;
    let r = f.range_on(&lo, &hi)?;
    let tail = Enclosure::new(
        std::cmp::min(Rational::zero(), r.lo() * &w),
        std::cmp::max(Rational::zero(), r.hi() * &w),
        false,
    );
    let enclosure = enc_add(&base.enclosure, &tail).with_tight(false);
    let status = if base.status.is_certified() && &enclosure.width() <= tol {
        Status::Certified
    } else {
        Status::Inconclusive
    };
    Ok(IntegralResult {
        enclosure,
        status,
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::StepFn;
    use crate::numeric::rat;

    fn sign_step() -> FuncSpec {
        FuncSpec::step(
            StepFn::new(vec![rat(1, 2)], vec![rat(-1, 1), rat(1, 1)]).unwrap(),
            Domain::unit(),
        )
    }

    fn poly(c: &[(i64, i64)], domain: Domain) -> FuncSpec {
        FuncSpec::polynomial(c.iter().map(|&(p, q)| rat(p, q)).collect(), domain)
    }

    fn sub(g: FuncSpec, c: Rational) -> Arc<Substitution> {
        Arc::new(Substitution::new(g, c, rat(1, 1000), 24).unwrap())
    }

    #[test]
    fn accumulate_examples() {
        let s = sub(sign_step(), rat(0, 1));
        let tol = rat(1, 1000);
        assert_eq!(
            s.accumulate_g(&rat(1, 2), &tol, 24).unwrap(),
            Enclosure::point(rat(-1, 2))
        );
        assert_eq!(
            s.accumulate_g(&rat(1, 1), &tol, 24).unwrap(),
            Enclosure::point(rat(0, 1))
        );

        let zero = sub(poly(&[(0, 1)], Domain::unit()), rat(5, 3));
        for t in [rat(0, 1), rat(1, 3), rat(1, 1)] {
            assert_eq!(
                zero.accumulate_g(&t, &tol, 24).unwrap(),
                Enclosure::point(rat(5, 3))
            );
        }

        let lin = sub(poly(&[(0, 1), (2, 1)], Domain::unit()), rat(0, 1));
        let e = lin.accumulate_g(&rat(1, 1), &tol, 24).unwrap();
        assert!(e.contains(&rat(1, 1)) && e.width() <= tol);
        assert!(s.accumulate_g(&rat(2, 1), &tol, 24).is_err());
    }

    #[test]
    fn accumulate_without_closed_form_uses_refinement() {
        // |thomae| has no closed-form integral here
        let g = FuncSpec::on_unit(crate::funcmodel::Kind::Abs(Box::new(
            crate::funcmodel::Kind::Thomae,
        )));
        let s = sub(g, rat(1, 1));
        let e = s.accumulate_g(&rat(1, 1), &rat(1, 50), 24).unwrap();
        assert!(e.contains(&rat(1, 1)));
        assert!(!e.is_degenerate());
        assert!(e.width() <= rat(1, 50));
        // recomputation never widens the cached value
        let tighter = s.accumulate_g(&rat(1, 1), &rat(1, 80), 24).unwrap();
        assert!(e.contains_enclosure(&tighter));
    }

    #[test]
    fn g_range_examples() {
        let zero = sub(poly(&[(0, 1)], Domain::unit()), rat(2, 1));
        assert_eq!(
            zero.g_range(&rat(0, 1), &rat(1, 1)).unwrap(),
            Enclosure::new(rat(2, 1), rat(2, 1), false)
        );
        let s = sub(sign_step(), rat(0, 1));
        let r = s.g_range(&rat(0, 1), &rat(1, 2)).unwrap();
        assert_eq!((r.lo(), r.hi()), (&rat(-1, 2), &rat(0, 1)));
        let r = s.g_range(&rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!((r.lo(), r.hi()), (&rat(-1, 2), &rat(0, 1)));

        let lin = sub(poly(&[(0, 1), (2, 1)], Domain::unit()), rat(0, 1));
        let r = lin.g_range(&rat(0, 1), &rat(1, 1)).unwrap();
        assert!(r.contains(&rat(0, 1)) && r.contains(&rat(1, 1)));
        assert!(r.lo() >= &rat(0, 1) && r.hi() <= &rat(2, 1));
    }

    #[test]
    fn lipschitz_cone_is_sound_and_narrow() {
        // G(t) = |t - 1/2| - 1/2 on [0, 1] sampled against the cone with slopes [-1, 1]
        let gu = Enclosure::point(rat(0, 1));
        let gv = Enclosure::point(rat(0, 1));
        let slope = Enclosure::new(rat(-1, 1), rat(1, 1), true);
        let r = lipschitz_cone(&gu, &gv, &slope, &rat(1, 1));
        assert_eq!((r.lo(), r.hi()), (&rat(-1, 2), &rat(1, 2)));
    }

    #[test]
    fn composed_examples() {
        let x = poly(&[(0, 1), (1, 1)], Domain::unit());
        let s = sub(poly(&[(0, 1), (2, 1)], Domain::unit()), rat(0, 1));
        let h = composed_integrand(&x, s).unwrap();
        for k in 0..=8 {
            let t = rat(k, 8);
            let expect = rat(2, 1) * t.pow(3);
            assert_eq!(h.eval_point(&t).unwrap(), expect);
            let u = rat(k, 9);
            let r = h.range_on(&u, &t.clone().max_of(u.clone())).unwrap();
            assert!(r.contains(&(rat(2, 1) * u.pow(3))));
        }

        let z = sub(poly(&[(0, 1)], Domain::unit()), rat(0, 1));
        let h = composed_integrand(&x, z).unwrap();
        assert_eq!(
            h.range_on(&rat(0, 1), &rat(1, 1)).unwrap(),
            Enclosure::new(rat(0, 1), rat(0, 1), false)
        );

        let half = Domain::new(rat(-1, 2), rat(0, 1)).unwrap();
        let ind = FuncSpec::indicator(rat(0, 1), rat(0, 1), half).unwrap();
        let h = composed_integrand(&ind, sub(sign_step(), rat(0, 1))).unwrap();
        assert_eq!(h.eval_point(&rat(1, 4)).unwrap(), rat(0, 1));
        assert_eq!(h.eval_point(&rat(0, 1)).unwrap(), rat(-1, 1));
    }

    #[test]
    fn domain_mismatch() {
        let x = poly(&[(0, 1), (1, 1)], Domain::unit());
        let s = sub(poly(&[(0, 1), (2, 1)], Domain::unit()), rat(1, 2));
        assert!(matches!(
            composed_integrand(&x, s),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn change_var_examples() {
        let x = poly(&[(0, 1), (1, 1)], Domain::unit());
        let r = change_var_check(
            &x,
            sub(poly(&[(0, 1), (2, 1)], Domain::unit()), rat(0, 1)),
            &rat(1, 1000),
            24,
        )
        .unwrap();
        assert_eq!(r.verdict, CvVerdict::Agree);
        assert!(r.lhs.enclosure.contains(&rat(1, 2)));
        assert!(r.rhs.enclosure.contains(&rat(1, 2)));
        assert_eq!(r.rhs.status, Status::Certified);

        let r = change_var_check(
            &x,
            sub(poly(&[(0, 1)], Domain::unit()), rat(0, 1)),
            &rat(1, 1000),
            24,
        )
        .unwrap();
        assert_eq!(r.lhs.enclosure, Enclosure::zero());
        assert_eq!(r.rhs.enclosure, Enclosure::new(rat(0, 1), rat(0, 1), false));
        assert_eq!(r.verdict, CvVerdict::Agree);

        let half = Domain::new(rat(-1, 2), rat(0, 1)).unwrap();
        let ind = FuncSpec::indicator(rat(0, 1), rat(0, 1), half).unwrap();
        let r = change_var_check(&ind, sub(sign_step(), rat(0, 1)), &rat(1, 1000), 24).unwrap();
        assert_eq!(r.lhs.enclosure, Enclosure::zero());
        assert!(r.rhs.enclosure.contains(&rat(0, 1)));
        assert_eq!(r.rhs.status, Status::Certified);
        assert_eq!(r.verdict, CvVerdict::Agree);
    }

    #[test]
    fn reversed_orientation() {
        // g = -1 then +1 on [0, 1/3), [1/3, 1]: G dips to -1/3 and climbs to 1/3
        let g = FuncSpec::step(
            StepFn::new(vec![rat(1, 3)], vec![rat(-1, 1), rat(1, 1)]).unwrap(),
            Domain::unit(),
        );
        let d = Domain::new(rat(-1, 2), rat(1, 2)).unwrap();
        let f = FuncSpec::step(
            StepFn::new(
                vec![rat(-1, 5), rat(1, 7)],
                vec![rat(2, 1), rat(-1, 1), rat(3, 1)],
            )
            .unwrap(),
            d,
        );
        let fwd = change_var_check(&f, sub(g.clone(), rat(0, 1)), &rat(1, 1000), 24).unwrap();
        let back = change_var_check(
            &f.reflect(),
            sub(g.scaled(rat(-1, 1)), rat(0, 1)),
            &rat(1, 1000),
            24,
        )
        .unwrap();
        assert_eq!(fwd.verdict, CvVerdict::Agree);
        assert_eq!(back.lhs.enclosure, fwd.lhs.enclosure.neg());
        assert_eq!(back.rhs.enclosure, fwd.rhs.enclosure.neg());
    }
}
