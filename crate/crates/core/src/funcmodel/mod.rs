//! Interval-evaluable functions: exact point values plus a range oracle on
//! every closed subinterval, and the zoo of test functions.

mod poly;
mod stern_brocot;
pub mod zoo;

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{enc_add, enc_scale, Enclosure, Rational};

pub use poly::Polynomial;
pub use stern_brocot::{min_denominator, simplest_in};

/// Result of a range query: an enclosure of `{f(z) : z ∈ [u, v]}` whose
/// `tight` flag marks exact infimum and supremum.
pub type RangeResult = Enclosure;

/// Closed rational interval on which a function is defined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    pub lo: Rational,
    pub hi: Rational,
}

impl Domain {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadArgs(format!("empty domain [{lo}, {hi}]")));
        }
        Ok(Domain { lo, hi })
    }

    pub fn unit() -> Self {
        Domain {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn check(&self, x: &Rational) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                x: x.clone(),
                lo: self.lo.clone(),
                hi: self.hi.clone(),
            })
        }
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Anything the Darboux machinery can integrate.
pub trait Integrand: Send + Sync {
    fn domain(&self) -> &Domain;

    /// Exact value at a rational point of the domain.
    fn eval_point(&self, x: &Rational) -> Result<Rational>;

    /// Enclosure of the range on `[u, v]`; `u = v` yields the point value.
    fn range_on(&self, u: &Rational, v: &Rational) -> Result<RangeResult>;

    /// Upper bound on the oscillation `sup - inf` over `[u, v]`, exact when
    /// the range oracle is tight.
    fn oscillation_on(&self, u: &Rational, v: &Rational) -> Result<Rational> {
        Ok(self.range_on(u, v)?.width())
    }

    /// Known discontinuity locations strictly inside `(u, v)`, ascending.
    fn breakpoints(&self, _u: &Rational, _v: &Rational) -> Vec<Rational> {
        Vec::new()
    }

    /// Exact lower and upper Darboux integrals over `[u, v]` when a closed
    /// form is known for this function.
    fn exact_darboux(&self, _u: &Rational, _v: &Rational) -> Option<(Rational, Rational)> {
        None
    }

    fn check_interval(&self, u: &Rational, v: &Rational) -> Result<()> {
        if u > v {
            return Err(Error::BadArgs(format!("reversed interval [{u}, {v}]")));
        }
        self.domain().check(u)?;
        self.domain().check(v)
    }
}

/// Which side owns the value at a step breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Owner {
    Left,
    #[default]
    Right,
}

/// Piecewise-constant function: `values[0]` left of `breaks[0]`, `values[i]`
/// between `breaks[i-1]` and `breaks[i]`, `values[n]` right of the last break.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFn {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
    owners: Vec<Owner>,
}

impl StepFn {
    /// Right-owned breakpoints (right-open pieces).
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let owners = vec![Owner::Right; breaks.len()];
        Self::with_owners(breaks, values, owners)
    }

    pub fn with_owners(
        breaks: Vec<Rational>,
        values: Vec<Rational>,
        owners: Vec<Owner>,
    ) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::BadArgs(format!(
                "step function needs {} values for {} breakpoints, got {}",
                breaks.len() + 1,
                breaks.len(),
                values.len()
            )));
        }
        if owners.len() != breaks.len() {
            return Err(Error::BadArgs("one owner per breakpoint".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadArgs(
                "step breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(StepFn {
            breaks,
            values,
            owners,
        })
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self.breaks.binary_search(x) {
            Ok(i) => match self.owners[i] {
                Owner::Left => self.values[i].clone(),
                Owner::Right => self.values[i + 1].clone(),
            },
            Err(i) => self.values[i].clone(),
        }
    }

    fn range(&self, u: &Rational, v: &Rational) -> Enclosure {
        let mut lo: Option<&Rational> = None;
        let mut hi: Option<&Rational> = None;
        let mut seen: Vec<&Rational> = Vec::new();
        let n = self.breaks.len();
        for i in 0..=n {
            // open piece (L_i, R_i)
            let left_ok = i == 0 || &self.breaks[i - 1] < v;
            let right_ok = i == n || u < &self.breaks[i];
            if left_ok && right_ok {
                seen.push(&self.values[i]);
            }
        }
        for (i, b) in self.breaks.iter().enumerate() {
            if u <= b && b <= v {
                seen.push(match self.owners[i] {
                    Owner::Left => &self.values[i],
                    Owner::Right => &self.values[i + 1],
                });
            }
        }
        for val in seen {
            if lo.is_none_or(|l| val < l) {
                lo = Some(val);
            }
            if hi.is_none_or(|h| val > h) {
                hi = Some(val);
            }
        }
        Enclosure::new(lo.unwrap().clone(), hi.unwrap().clone(), true)
    }

    /// `∫_u^v`, ignoring the (measure-zero) breakpoint values.
    fn integral(&self, u: &Rational, v: &Rational) -> Rational {
        let n = self.breaks.len();
        let mut total = Rational::zero();
        for i in 0..=n {
            let a = if i == 0 {
                u
            } else {
                std::cmp::max(u, &self.breaks[i - 1])
            };
            let b = if i == n {
                v
            } else {
                std::cmp::min(v, &self.breaks[i])
            };
            if a < b {
                total += &self.values[i] * &(b - a);
            }
        }
        total
    }

    fn reflect(&self) -> StepFn {
        StepFn {
            breaks: self.breaks.iter().rev().map(|b| -b).collect(),
            values: self.values.iter().rev().cloned().collect(),
            owners: self
                .owners
                .iter()
                .rev()
                .map(|o| match o {
                    Owner::Left => Owner::Right,
                    Owner::Right => Owner::Left,
                })
                .collect(),
        }
    }
}

/// Shape of a [`FuncSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Polynomial(Polynomial),
    Step(StepFn),
    /// 0 on rationals, 1 on irrationals.
    Dirichlet,
    /// `1/q` at `p/q` in lowest terms, 0 on irrationals.
    Thomae,
    /// 1 on the closed interval `[lo, hi]`, 0 elsewhere.
    Indicator {
        lo: Rational,
        hi: Rational,
    },
    Sum(Box<Kind>, Box<Kind>),
    Scale(Rational, Box<Kind>),
    Abs(Box<Kind>),
}

impl Kind {
    fn eval(&self, x: &Rational) -> Rational {
        match self {
            Kind::Polynomial(p) => p.eval(x),
            Kind::Step(s) => s.eval(x),
            // every input is rational
            Kind::Dirichlet => Rational::zero(),
            Kind::Thomae => Rational::from_integer(x.denom().clone()).recip(),
            Kind::Indicator { lo, hi } => {
                if lo <= x && x <= hi {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Kind::Sum(a, b) => a.eval(x) + b.eval(x),
            Kind::Scale(c, k) => c * k.eval(x),
            Kind::Abs(k) => k.eval(x).abs(),
        }
    }

    /// Range on a nondegenerate interval `u < v`.
    fn range(&self, u: &Rational, v: &Rational) -> Enclosure {
        debug_assert!(u < v);
        match self {
            Kind::Polynomial(p) => p.range(u, v),
            Kind::Step(s) => s.range(u, v),
            // rationals and irrationals are both dense
            Kind::Dirichlet => Enclosure::new(Rational::zero(), Rational::one(), true),
            Kind::Thomae => Enclosure::new(
                Rational::zero(),
                Rational::from_integer(min_denominator(u, v)).recip(),
                true,
            ),
            Kind::Indicator { lo, hi } => {
                let (z, o) = (Rational::zero(), Rational::one());
                if v < lo || u > hi {
                    Enclosure::new(z.clone(), z, true)
                } else if lo <= u && v <= hi {
                    Enclosure::new(o.clone(), o, true)
                } else {
                    Enclosure::new(z, o, true)
                }
            }
            Kind::Sum(a, b) => enc_add(&a.range(u, v), &b.range(u, v)).with_tight(false),
            Kind::Scale(c, k) => enc_scale(c, &k.range(u, v)),
            Kind::Abs(k) => {
                let e = k.range(u, v);
                if !e.lo().is_negative() {
                    e
                } else if !e.hi().is_positive() {
                    e.neg()
                } else {
                    let top = std::cmp::max(e.lo().abs(), e.hi().clone());
                    Enclosure::new(Rational::zero(), top, false)
                }
            }
        }
    }

    fn breakpoints(&self, u: &Rational, v: &Rational, out: &mut Vec<Rational>) {
        match self {
            Kind::Step(s) => out.extend(s.breaks.iter().filter(|b| u < *b && *b < v).cloned()),
            Kind::Indicator { lo, hi } => {
                out.extend([lo, hi].into_iter().filter(|b| u < *b && *b < v).cloned())
            }
            Kind::Sum(a, b) => {
                a.breakpoints(u, v, out);
                b.breakpoints(u, v, out);
            }
            Kind::Scale(_, k) | Kind::Abs(k) => k.breakpoints(u, v, out),
            Kind::Polynomial(_) | Kind::Dirichlet | Kind::Thomae => {}
        }
    }

    fn exact_darboux(&self, u: &Rational, v: &Rational) -> Option<(Rational, Rational)> {
        match self {
            Kind::Polynomial(p) => {
                let i = p.integral(u, v);
                Some((i.clone(), i))
            }
            Kind::Step(s) => {
                let i = s.integral(u, v);
                Some((i.clone(), i))
            }
            Kind::Indicator { lo, hi } => {
                let a = std::cmp::max(u, lo);
                let b = std::cmp::min(v, hi);
                let i = if a < b { b - a } else { Rational::zero() };
                Some((i.clone(), i))
            }
            Kind::Dirichlet => Some((Rational::zero(), v - u)),
            Kind::Thomae => Some((Rational::zero(), Rational::zero())),
            Kind::Scale(c, k) => {
                let (l, h) = k.exact_darboux(u, v)?;
                if c.is_negative() {
                    Some((c * h, c * l))
                } else {
                    Some((c * l, c * h))
                }
            }
            Kind::Sum(a, b) => {
                let (al, ah) = a.exact_darboux(u, v)?;
                let (bl, bh) = b.exact_darboux(u, v)?;
                // additivity holds as soon as one summand is integrable
                if al == ah || bl == bh {
                    Some((al + bl, ah + bh))
                } else {
                    None
                }
            }
            Kind::Abs(_) => None,
        }
    }

    fn reflect(&self) -> Kind {
        match self {
            Kind::Polynomial(p) => Kind::Polynomial(p.reflect()),
            Kind::Step(s) => Kind::Step(s.reflect()),
            Kind::Dirichlet => Kind::Dirichlet,
            Kind::Thomae => Kind::Thomae,
            Kind::Indicator { lo, hi } => Kind::Indicator { lo: -hi, hi: -lo },
            Kind::Sum(a, b) => Kind::Sum(Box::new(a.reflect()), Box::new(b.reflect())),
            Kind::Scale(c, k) => Kind::Scale(c.clone(), Box::new(k.reflect())),
            Kind::Abs(k) => Kind::Abs(Box::new(k.reflect())),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Sum(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

fn join(items: &[Rational]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Prints the function expression grammar accepted by the CLI parser.
impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Polynomial(p) if p.is_zero() => write!(f, "poly(0)"),
            Kind::Polynomial(p) => write!(f, "poly({})", join(p.coeffs())),
            Kind::Step(s) => {
                let breaks: Vec<String> = s
                    .breaks
                    .iter()
                    .zip(&s.owners)
                    .map(|(b, o)| match o {
                        Owner::Left => format!("<{b}"),
                        Owner::Right => b.to_string(),
                    })
                    .collect();
                write!(f, "step({}:{})", breaks.join(","), join(&s.values))
            }
            Kind::Dirichlet => write!(f, "dirichlet"),
            Kind::Thomae => write!(f, "thomae"),
            Kind::Indicator { lo, hi } => write!(f, "indicator({lo},{hi})"),
            Kind::Sum(a, b) => {
                write!(f, "{a} + ")?;
                b.fmt_atom(f)
            }
            Kind::Scale(c, k) => {
                write!(f, "{c}*")?;
                k.fmt_atom(f)
            }
            Kind::Abs(k) => write!(f, "abs({k})"),
        }
    }
}

/// A bounded function on a closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuncSpec {
    domain: Domain,
    kind: Kind,
}

impl FuncSpec {
    pub fn new(kind: Kind, domain: Domain) -> Self {
        FuncSpec { domain, kind }
    }

    pub fn on_unit(kind: Kind) -> Self {
        FuncSpec::new(kind, Domain::unit())
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        FuncSpec::new(self.kind.clone(), domain)
    }

    pub fn polynomial(coeffs: Vec<Rational>, domain: Domain) -> Self {
        FuncSpec::new(Kind::Polynomial(Polynomial::new(coeffs)), domain)
    }

    pub fn step(step: StepFn, domain: Domain) -> Self {
        FuncSpec::new(Kind::Step(step), domain)
    }

    pub fn dirichlet() -> Self {
        FuncSpec::on_unit(Kind::Dirichlet)
    }

    pub fn thomae() -> Self {
        FuncSpec::on_unit(Kind::Thomae)
    }

    pub fn indicator(lo: Rational, hi: Rational, domain: Domain) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadArgs(format!(
                "indicator of empty set [{lo}, {hi}]"
            )));
        }
        Ok(FuncSpec::new(Kind::Indicator { lo, hi }, domain))
    }

    /// `self + other`; both must share a domain.
    pub fn plus(&self, other: &FuncSpec) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::BadArgs(format!(
                "cannot add functions on {} and {}",
                self.domain, other.domain
            )));
        }
        Ok(FuncSpec::new(
            Kind::Sum(Box::new(self.kind.clone()), Box::new(other.kind.clone())),
            self.domain.clone(),
        ))
    }

    pub fn scaled(&self, c: Rational) -> Self {
        FuncSpec::new(
            Kind::Scale(c, Box::new(self.kind.clone())),
            self.domain.clone(),
        )
    }

    /// `x ↦ f(-x)` on the mirrored domain.
    pub fn reflect(&self) -> Self {
        FuncSpec::new(
            self.kind.reflect(),
            Domain {
                lo: -&self.domain.hi,
                hi: -&self.domain.lo,
            },
        )
    }

    /// A finite bound `[inf, sup]` over the whole domain.
    pub fn bound(&self) -> Enclosure {
        self.range_on(&self.domain.lo, &self.domain.hi)
            .expect("domain endpoints are in the domain")
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@[{},{}]", self.kind, self.domain.lo, self.domain.hi)
    }
}

impl Integrand for FuncSpec {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn eval_point(&self, x: &Rational) -> Result<Rational> {
        self.domain.check(x)?;
        Ok(self.kind.eval(x))
    }

    fn range_on(&self, u: &Rational, v: &Rational) -> Result<RangeResult> {
        self.check_interval(u, v)?;
        if u == v {
            return Ok(Enclosure::point(self.kind.eval(u)));
        }
        Ok(self.kind.range(u, v))
    }

    fn breakpoints(&self, u: &Rational, v: &Rational) -> Vec<Rational> {
        let mut out = Vec::new();
        self.kind.breakpoints(u, v, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn exact_darboux(&self, u: &Rational, v: &Rational) -> Option<(Rational, Rational)> {
        if u > v || !self.domain.contains(u) || !self.domain.contains(v) {
            return None;
        }
        self.kind.exact_darboux(u, v)
    }
}
