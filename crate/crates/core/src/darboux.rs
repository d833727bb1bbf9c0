//! Partitions, lower/upper Darboux sums, adaptive integral enclosures and the
//! oscillation-length defect used by Davies' integrability criterion.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{Error, Result};
use crate::funcmodel::Integrand;
use crate::numeric::{Enclosure, Rational};
use crate::primitive::NonIntegrabilityWitness;

/// Default bisection depth, overridable from the command line.
pub const DEFAULT_MAX_DEPTH: u32 = 24;

/// Default cap on the number of pieces an adaptive run may create.
pub const DEFAULT_MAX_PIECES: usize = 1 << 15;

/// Strictly increasing breakpoints `x_0 < x_1 < ... < x_n`, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    points: Vec<Rational>,
}

impl Partition {
    pub fn new(points: Vec<Rational>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::BadArgs(
                "a partition needs at least two points".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadArgs(
                "partition points must be strictly increasing".into(),
            ));
        }
        Ok(Partition { points })
    }

    /// `x_k = a + k (b - a) / n`.
    pub fn uniform(a: &Rational, b: &Rational, n: usize) -> Result<Self> {
        if a >= b {
            return Err(Error::BadArgs(format!(
                "uniform partition needs a < b, got [{a}, {b}]"
            )));
        }
        if n < 1 {
            return Err(Error::BadArgs("uniform partition needs n >= 1".into()));
        }
        let step = (b - a) / Rational::from_integer(n as i64);
        let points = (0..=n)
            .map(|k| a + &(&step * Rational::from_integer(k as i64)))
            .collect();
        Ok(Partition { points })
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn start(&self) -> &Rational {
        &self.points[0]
    }

    pub fn end(&self) -> &Rational {
        self.points.last().unwrap()
    }

    /// Number of pieces.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Largest piece length.
    pub fn mesh(&self) -> Rational {
        self.pieces().map(|(a, b)| b - a).max().unwrap()
    }

    /// Adds the given points that fall strictly inside the span.
    pub fn refine_with(&self, extra: &[Rational]) -> Partition {
        let mut points = self.points.clone();
        points.extend(
            extra
                .iter()
                .filter(|x| self.start() < *x && *x < self.end())
                .cloned(),
        );
        points.sort();
        points.dedup();
        Partition { points }
    }

    /// The induced partition of `[lo, hi]`; both must be partition points.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Partition> {
        let i = self
            .points
            .binary_search(lo)
            .map_err(|_| Error::BadArgs(format!("{lo} is not a partition point")))?;
        let j = self
            .points
            .binary_search(hi)
            .map_err(|_| Error::BadArgs(format!("{hi} is not a partition point")))?;
        Partition::new(self.points[i..=j].to_vec())
    }
}

fn check_span(f: &dyn Integrand, p: &Partition) -> Result<()> {
    f.domain().check(p.start())?;
    f.domain().check(p.end())
}

/// `L(f, P)`, a lower bound for the lower Darboux sum (exact for tight oracles).
pub fn lower_sum(f: &dyn Integrand, p: &Partition) -> Result<Rational> {
    Ok(darboux_sums(f, p)?.0)
}

/// `U(f, P)`, an upper bound for the upper Darboux sum (exact for tight oracles).
pub fn upper_sum(f: &dyn Integrand, p: &Partition) -> Result<Rational> {
    Ok(darboux_sums(f, p)?.1)
}

/// Both sums with one oracle call per piece.
pub fn darboux_sums(f: &dyn Integrand, p: &Partition) -> Result<(Rational, Rational)> {
    check_span(f, p)?;
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    for (a, b) in p.pieces() {
        let r = f.range_on(a, b)?;
        let len = b - a;
        lower += r.lo() * &len;
        upper += r.hi() * &len;
    }
    Ok((lower, upper))
}

/// Total length of the pieces of `p` on which the oscillation exceeds `eta`.
pub fn davies_defect(f: &dyn Integrand, p: &Partition, eta: &Rational) -> Result<Rational> {
    if !eta.is_positive() {
        return Err(Error::BadArgs(format!("eta must be positive, got {eta}")));
    }
    check_span(f, p)?;
    let mut total = Rational::zero();
    for (a, b) in p.pieces() {
        if &f.oscillation_on(a, b)? > eta {
            total += b - a;
        }
    }
    Ok(total)
}

/// Outcome of an integration attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// Enclosure width met the requested tolerance.
    Certified,
    /// Refinement stopped before meeting the tolerance; says nothing about integrability.
    Inconclusive,
    /// Two generalized primitives whose difference is not constant.
    NotIntegrable(Box<NonIntegrabilityWitness>),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Certified => "Certified",
            Status::Inconclusive => "Inconclusive",
            Status::NotIntegrable(_) => "NotIntegrable",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Status::Certified)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralResult {
    /// `[best lower sum, best upper sum]`, orientation-signed.
    pub enclosure: Enclosure,
    pub status: Status,
    /// Deepest bisection level reached.
    pub depth: u32,
    /// Range-oracle calls.
    pub evaluations: u64,
}

impl IntegralResult {
    fn exact(value: Rational) -> Self {
        IntegralResult {
            enclosure: Enclosure::point(value),
            status: Status::Certified,
            depth: 0,
            evaluations: 0,
        }
    }

    /// The integral over the reversed interval.
    pub fn negated(&self) -> Self {
        IntegralResult {
            enclosure: self.enclosure.neg(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct RefineOptions {
    pub max_depth: u32,
    pub max_pieces: usize,
}

impl RefineOptions {
    pub fn with_depth(max_depth: u32) -> Self {
        RefineOptions {
            max_depth,
            ..Default::default()
        }
    }
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            max_pieces: DEFAULT_MAX_PIECES,
        }
    }
}

/// Lower and upper sums after one refinement step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub depth: u32,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Clone, Debug)]
struct Piece {
    weight: Rational,
    left: Rational,
    right: Rational,
    level: u32,
    range: Enclosure,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    // max-heap: largest oscillation·length first, then leftmost
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| other.left.cmp(&self.left))
    }
}

/// Adaptive enclosure of `∫_a^b f` with the default piece budget.
pub fn integral_enclosure(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    max_depth: u32,
) -> Result<IntegralResult> {
    integral_enclosure_with(f, a, b, tol, &RefineOptions::with_depth(max_depth))
}

pub fn integral_enclosure_with(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    opts: &RefineOptions,
) -> Result<IntegralResult> {
    refine(f, a, b, tol, opts, None)
}

/// Like [`integral_enclosure_with`], also returning the sums after every bisection.
pub fn integral_enclosure_traced(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    opts: &RefineOptions,
) -> Result<(IntegralResult, Vec<Snapshot>)> {
    let mut trace = Vec::new();
    let r = refine(f, a, b, tol, opts, Some(&mut trace))?;
    Ok((r, trace))
}

/// Bisects the piece with the largest `oscillation · length` (leftmost on
/// ties) until `U - L <= tol`, the piece budget runs out, or the selected
/// piece already sits at `max_depth`.
fn refine(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    opts: &RefineOptions,
    mut trace: Option<&mut Vec<Snapshot>>,
) -> Result<IntegralResult> {
    if !tol.is_positive() {
        return Err(Error::BadArgs(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    f.domain().check(a)?;
    f.domain().check(b)?;
    if a > b {
        return Ok(refine(f, b, a, tol, opts, trace)?.negated());
    }
    if a == b {
        return Ok(IntegralResult::exact(Rational::zero()));
    }

    let mut evaluations = 1u64;
    let root_range = f.range_on(a, b)?;
    let len = b - a;
    let mut lower = root_range.lo() * &len;
    let mut upper = root_range.hi() * &len;
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        weight: root_range.width() * &len,
        left: a.clone(),
        right: b.clone(),
        level: 0,
        range: root_range,
    });
    let mut pieces = 1usize;
    let mut depth = 0u32;
    if let Some(t) = trace.as_deref_mut() {
        t.push(Snapshot {
            depth,
            lower: lower.clone(),
            upper: upper.clone(),
        });
    }

    let status = loop {
        if &(&upper - &lower) <= tol {
            break Status::Certified;
        }
        if pieces >= opts.max_pieces {
            break Status::Inconclusive;
        }
        let top = heap.pop().expect("at least one piece");
        if top.level >= opts.max_depth {
            heap.push(top);
            break Status::Inconclusive;
        }
        let mid = top.left.midpoint(&top.right);
        let parent_len = &top.right - &top.left;
        lower -= top.range.lo() * &parent_len;
        upper -= top.range.hi() * &parent_len;
        for (l, r) in [
            (top.left.clone(), mid.clone()),
            (mid.clone(), top.right.clone()),
        ] {
            let raw = f.range_on(&l, &r)?;
            evaluations += 1;
            // the true child range lies in the parent's, so intersecting keeps sums monotone
            let range = raw.intersect(&top.range).unwrap_or(raw);
            let piece_len = &r - &l;
            lower += range.lo() * &piece_len;
            upper += range.hi() * &piece_len;
            heap.push(Piece {
                weight: range.width() * &piece_len,
                left: l,
                right: r,
                level: top.level + 1,
                range,
            });
        }
        pieces += 1;
        depth = depth.max(top.level + 1);
        if let Some(t) = trace.as_deref_mut() {
            t.push(Snapshot {
                depth,
                lower: lower.clone(),
                upper: upper.clone(),
            });
        }
    };

    Ok(IntegralResult {
        enclosure: Enclosure::new(lower, upper, false),
        status,
        depth,
        evaluations,
    })
}

/// `∫_a^b f` (directed), taken from the function's closed form when it is
/// known to be integrable there and from adaptive refinement otherwise.
pub fn definite_integral(
    f: &dyn Integrand,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    max_depth: u32,
) -> Result<IntegralResult> {
    f.domain().check(a)?;
    f.domain().check(b)?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    match f.exact_darboux(lo, hi) {
        Some((l, u)) if l == u => {
            let r = IntegralResult::exact(l);
            Ok(if a <= b { r } else { r.negated() })
        }
        _ => integral_enclosure(f, a, b, tol, max_depth),
    }
}
