//! The acceptance suite behind `darboux suite`.
//!
//! Every criterion draws from its own ChaCha stream derived from the seed, so
//! rows are reproducible one criterion at a time.

use std::sync::Arc;

use darboux_core::funcmodel::zoo::zoo;
use darboux_core::primitive::associated_points;
use darboux_core::{
    change_var_check, constant_difference, darboux_sums, davies_defect, decide_integrability,
    dini_estimates, integral_enclosure, integral_enclosure_traced, rat, thomson_sum, verify_gp,
    CvVerdict, Domain, Enclosure, FuncSpec, GpVerdict, Integrand, Kind, Owner, Partition,
    Polynomial, PrimitiveSpec, Rational, RefineOptions, Status, StepFn, Substitution,
    ThomsonScheme,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parser::parse_funcspec;
use crate::report::{to_csv_string, Row};

pub const MAX_DEPTH: u32 = 24;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub rows: Vec<Row>,
    pub criteria: Vec<CriterionOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn rng_for(seed: u64, criterion: u8) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(criterion as u64);
    rng
}

/// Uniform rational in `[lo, hi]` with denominator at most `max_den`.
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
    let k = rng.random_range(0..=span);
    (p_lo + Rational::from_integer(k)) / qr
}

/// Partition of `dom` with up to `max_interior` random interior points.
pub fn random_partition<R: Rng>(
    rng: &mut R,
    dom: &Domain,
    max_interior: usize,
    max_den: i64,
) -> Partition {
    let k = rng.random_range(0..=max_interior);
    let mut pts = vec![dom.lo.clone(), dom.hi.clone()];
    for _ in 0..k {
        pts.push(random_rational(rng, &dom.lo, &dom.hi, max_den));
    }
    pts.sort();
    pts.dedup();
    Partition::new(pts).expect("sorted distinct points")
}

fn small_value<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-4..=4), rng.random_range(1..=2))
}

/// Random step function with breaks strictly inside `dom`.
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
    let values = (0..=breaks.len()).map(|_| small_value(rng)).collect();
    StepFn::with_owners(breaks, values, owners).expect("valid step")
}

/// Random expression tree of bounded depth, used for printing round trips.
pub fn random_kind<R: Rng>(rng: &mut R, depth: u32) -> Kind {
    let leaf = depth == 0 || rng.random_bool(0.5);
    let unit = Domain::unit();
    if leaf {
        match rng.random_range(0..5) {
            0 => Kind::Dirichlet,
            1 => Kind::Thomae,
            2 => {
                let n = rng.random_range(1..=4);
                Kind::Polynomial(Polynomial::new((0..n).map(|_| small_value(rng)).collect()))
            }
            3 => Kind::Step(random_step(rng, &unit, 3)),
            _ => {
                let a = random_rational(rng, &unit.lo, &unit.hi, 8);
                let b = random_rational(rng, &unit.lo, &unit.hi, 8);
                Kind::Indicator {
                    lo: std::cmp::min(a.clone(), b.clone()),
                    hi: std::cmp::max(a, b),
                }
            }
        }
    } else {
        match rng.random_range(0..3) {
            0 => Kind::Sum(
                Box::new(random_kind(rng, depth - 1)),
                Box::new(random_kind(rng, depth - 1)),
            ),
            1 => Kind::Scale(small_value(rng), Box::new(random_kind(rng, depth - 1))),
            _ => Kind::Abs(Box::new(random_kind(rng, depth - 1))),
        }
    }
}

struct Recorder {
    id: u8,
    rows: Vec<Row>,
    passed: bool,
}

impl Recorder {
    fn new(id: u8) -> Self {
        Recorder {
            id,
            rows: Vec::new(),
            passed: true,
        }
    }

    fn case(&self, name: &str) -> String {
        format!("c{:02}.{name}", self.id)
    }

    fn push(&mut self, row: Row, ok: bool) {
        self.passed &= ok;
        self.rows
            .push(row.verdict(if ok { "pass" } else { "fail" }));
    }

    fn tally(&mut self, name: &str, summary: String, checks: usize, violations: usize) {
        let row = Row::new(self.case(name), "property", summary)
            .status(format!("checks={checks} violations={violations}"));
        self.push(row, violations == 0);
    }
}

fn grid16() -> Partition {
    Partition::uniform(&rat(0, 1), &rat(1, 1), 16).unwrap()
}

fn dirichlet_certificate(_seed: u64) -> Recorder {
    let mut r = Recorder::new(1);
    let f = FuncSpec::dirichlet();
    let f0 = PrimitiveSpec::Linear(rat(0, 1));
    let f1 = PrimitiveSpec::Linear(rat(1, 1));
    for p in [&f0, &f1] {
        let gp = verify_gp(p, &f, &grid16()).unwrap();
        let row = Row::new(
            r.case(&format!("gp_{p}")),
            "verify_gp",
            format!("F={p} f={f} grid=16"),
        )
        .status(format!(
            "pairs={} undecided={}",
            gp.checked_pairs, gp.undecided_pairs
        ));
        r.push(row, gp.verdict == GpVerdict::Pass);
    }
    let d = constant_difference(&f0, &f1, &grid16()).unwrap();
    let row = Row::new(
        r.case("spread"),
        "constant_difference",
        "linear:0 - linear:1 grid=16",
    )
    .value(&d.spread);
    r.push(row, d.spread == rat(1, 1));
    let res =
        decide_integrability(&f, &[f0.clone(), f1.clone()], &rat(1, 1000), MAX_DEPTH, 16).unwrap();
    let ok = match &res.status {
        Status::NotIntegrable(w) => w.first == f0 && w.second == f1,
        _ => false,
    };
    r.push(
        Row::new(r.case("decision"), "integrability", f.to_string()).integral(&res),
        ok,
    );
    r
}

fn identity_integrand(_seed: u64) -> Recorder {
    let mut r = Recorder::new(2);
    let f = FuncSpec::polynomial(vec![rat(0, 1), rat(1, 1)], Domain::unit());
    let (l, u) = darboux_sums(&f, &Partition::uniform(&rat(0, 1), &rat(1, 1), 4).unwrap()).unwrap();
    let row = Row::new(
        r.case("sums_n4"),
        "darboux_sums",
        format!("{f} uniform n=4"),
    )
    .enclosure(&Enclosure::new(l.clone(), u.clone(), false));
    r.push(row, l == rat(3, 8) && u == rat(5, 8));
    let tol = rat(1, 1000);
    let res = integral_enclosure(&f, &rat(0, 1), &rat(1, 1), &tol, MAX_DEPTH).unwrap();
    let ok = res.status.is_certified()
        && res.enclosure.contains(&rat(1, 2))
        && res.enclosure.width() <= tol;
    r.push(
        Row::new(r.case("enclosure"), "integrate", format!("{f} tol={tol}")).integral(&res),
        ok,
    );
    r
}

fn thomae(_seed: u64) -> Recorder {
    let mut r = Recorder::new(3);
    let f = FuncSpec::thomae();
    let tol = rat(1, 100);
    let (res, trace) = integral_enclosure_traced(
        &f,
        &rat(0, 1),
        &rat(1, 1),
        &tol,
        &RefineOptions::with_depth(MAX_DEPTH),
    )
    .unwrap();
    let lower_zero = trace.iter().all(|s| s.lower.is_zero());
    let ok = res.status.is_certified()
        && res.enclosure.contains(&rat(0, 1))
        && res.enclosure.lo().is_zero()
        && res.enclosure.hi() <= &tol
        && lower_zero;
    let row = Row::new(r.case("enclosure"), "integrate", format!("{f} tol={tol}")).integral(&res);
    r.push(row, ok);
    r
}

fn refinement_monotonicity(seed: u64) -> Recorder {
    let mut r = Recorder::new(4);
    let mut rng = rng_for(seed, 4);
    for z in zoo() {
        let dom = z.func.domain().clone();
        let mut checks = 0;
        let mut bad = 0;
        for _ in 0..100 {
            let mut p = random_partition(&mut rng, &dom, 4, 16);
            let (mut l, mut u) = darboux_sums(&z.func, &p).unwrap();
            for _ in 0..4 {
                let extra: Vec<Rational> = (0..rng.random_range(1..=3))
                    .map(|_| random_rational(&mut rng, &dom.lo, &dom.hi, 64))
                    .collect();
                p = p.refine_with(&extra);
                let (l2, u2) = darboux_sums(&z.func, &p).unwrap();
                checks += 1;
                if !(l <= l2 && l2 <= u2 && u2 <= u) {
                    bad += 1;
                }
                (l, u) = (l2, u2);
            }
        }
        r.tally(z.name, format!("{} 100 chains", z.func), checks, bad);
    }
    r
}

fn davies_consistency(seed: u64) -> Recorder {
    let mut r = Recorder::new(5);
    let mut rng = rng_for(seed, 5);
    let members = zoo();
    let (mut applicable, mut bad) = (0, 0);
    for _ in 0..200 {
        let z = &members[rng.random_range(0..members.len())];
        let dom = z.func.domain();
        let n = rng.random_range(1..=64);
        let p = Partition::uniform(&dom.lo, &dom.hi, n).unwrap();
        let eps = rat(rng.random_range(1..=8), 8);
        let eta = rat(rng.random_range(1..=8), 16);
        let (l, u) = darboux_sums(&z.func, &p).unwrap();
        if u - l < &eps * &eta {
            applicable += 1;
            if davies_defect(&z.func, &p, &eta).unwrap() >= eps {
                bad += 1;
            }
        }
    }
    r.tally(
        "random",
        format!("200 samples, {applicable} with U-L < eps*eta"),
        200,
        bad,
    );
    r
}

fn primitive_soundness(seed: u64) -> Recorder {
    let mut r = Recorder::new(6);
    let mut rng = rng_for(seed, 6);
    for z in zoo() {
        let f = &z.func;
        let dom = f.domain().clone();
        let lower = PrimitiveSpec::lower_of(f);
        let upper = PrimitiveSpec::upper_of(f);
        // U - L of any partition bounds the gap
        let (l, u) = darboux_sums(f, &Partition::uniform(&dom.lo, &dom.hi, 64).unwrap()).unwrap();
        let best_gap = u - l;
        let (mut checks, mut bad) = (0, 0);
        for _ in 0..50 {
            let grid = random_partition(&mut rng, &dom, 8, 32);
            for p in [&lower, &upper] {
                checks += 1;
                if verify_gp(p, f, &grid).unwrap().verdict != GpVerdict::Pass {
                    bad += 1;
                }
            }
            let mut prev = Rational::zero();
            for x in grid.points() {
                let gap = upper.eval_exact(x).unwrap() - lower.eval_exact(x).unwrap();
                checks += 1;
                if gap < prev || gap > best_gap {
                    bad += 1;
                }
                prev = gap;
            }
        }
        r.tally(z.name, format!("{f} 50 grids"), checks, bad);
    }
    r
}

fn derivative_recovery(seed: u64) -> Recorder {
    let mut r = Recorder::new(7);
    let mut rng = rng_for(seed, 7);
    let f = FuncSpec::polynomial(vec![rat(0, 1), rat(1, 1)], Domain::unit());
    let prim = PrimitiveSpec::lower_of(&f);
    let within = rat(1, 1000);
    let (mut checks, mut bad) = (0, 0);
    for _ in 0..20 {
        let x = random_rational(&mut rng, &rat(1, 64), &rat(63, 64), 64);
        let rep = dini_estimates(&prim, &f, &x, &rat(1, 4), 20).unwrap();
        let target = Enclosure::new(&x - &within, &x + &within, false);
        checks += 1;
        if !rep.sandwich_ok
            || rep.estimates().count() != 4
            || !rep.estimates().all(|e| target.contains_enclosure(e))
        {
            bad += 1;
        }
    }
    r.tally("identity", format!("F=lower f={f} 20 points"), checks, bad);

    let d = FuncSpec::dirichlet();
    let (mut checks, mut bad) = (0, 0);
    for k in 0..=4 {
        let prim = PrimitiveSpec::Linear(rat(k, 4));
        for _ in 0..4 {
            let x = random_rational(&mut rng, &rat(0, 1), &rat(1, 1), 32);
            let rep = dini_estimates(&prim, &d, &x, &rat(1, 4), 20).unwrap();
            checks += 1;
            if !rep.sandwich_ok {
                bad += 1;
            }
        }
    }
    r.tally(
        "dirichlet_sandwich",
        "linear:k/4 for k=0..4".into(),
        checks,
        bad,
    );
    r
}

fn thomson(seed: u64) -> Recorder {
    let mut r = Recorder::new(8);
    let mut rng = rng_for(seed, 8);
    let square = PrimitiveSpec::ClosedForm(FuncSpec::polynomial(
        vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        Domain::unit(),
    ));
    for n in [4usize, 8, 16, 32] {
        let p = Partition::uniform(&rat(0, 1), &rat(1, 1), n).unwrap();
        let (xi, xj) = associated_points(&p, ThomsonScheme::Midpoint);
        let s = thomson_sum(&square, &p, &xi, &xj).unwrap();
        let row = Row::new(
            r.case(&format!("square_n{n}")),
            "thomson_sum",
            format!("F={square} midpoints"),
        )
        .value(&s);
        r.push(row, s == rat(1, n as i64));
    }
    let line = PrimitiveSpec::Linear(rat(1, 1));
    let mut bad = 0;
    for _ in 0..100 {
        let p = random_partition(&mut rng, &Domain::unit(), 6, 32);
        let (mut xi, mut xj) = (Vec::new(), Vec::new());
        for (a, b) in p.pieces() {
            // strictly inside, with xi <= xi'
            let s = a + &((b - a) * rat(rng.random_range(1..=31), 32));
            let t = &s + &((b - &s) * rat(rng.random_range(0..=31), 32));
            xi.push(s);
            xj.push(t);
        }
        if !thomson_sum(&line, &p, &xi, &xj).unwrap().is_zero() {
            bad += 1;
        }
    }
    r.tally("linear", "F=linear:1 100 random choices".into(), 100, bad);
    r
}

fn sub(g: &FuncSpec, c: Rational) -> Arc<Substitution> {
    Arc::new(Substitution::new(g.clone(), c, rat(1, 1000), MAX_DEPTH).unwrap())
}

/// A substitution `g` and an outer `f` whose domain covers `G([0, 1])`.
pub fn random_step_pair<R: Rng>(rng: &mut R) -> (FuncSpec, FuncSpec, Rational) {
    let g = FuncSpec::step(random_step(rng, &Domain::unit(), 3), Domain::unit());
    let c = rat(rng.random_range(-4..=4), 4);
    let s = Substitution::new(g.clone(), c.clone(), rat(1, 1000), MAX_DEPTH).unwrap();
    let mut knots = vec![rat(0, 1)];
    knots.extend(g.breakpoints(&rat(0, 1), &rat(1, 1)));
    knots.push(rat(1, 1));
    let values: Vec<Rational> = knots.iter().map(|t| s.exact_at(t).unwrap()).collect();
    let lo = values.iter().min().unwrap() - &rat(1, 2);
    let hi = values.iter().max().unwrap() + &rat(1, 2);
    let dom = Domain::new(lo, hi).unwrap();
    let f = FuncSpec::step(random_step(rng, &dom, 3), dom);
    (f, g, c)
}

fn change_of_variable(seed: u64) -> Recorder {
    let mut r = Recorder::new(9);
    let tol = rat(1, 1000);
    let x = FuncSpec::polynomial(vec![rat(0, 1), rat(1, 1)], Domain::unit());

    let zero = FuncSpec::polynomial(vec![], Domain::unit());
    let rep = change_var_check(&x, sub(&zero, rat(0, 1)), &tol, MAX_DEPTH).unwrap();
    let z = Enclosure::zero();
    let ok = rep.lhs.enclosure == z
        && rep.rhs.enclosure.lo().is_zero()
        && rep.rhs.enclosure.hi().is_zero();
    r.push(
        Row::new(r.case("a_zero_g"), "changevar", "f=poly(0,1) g=poly(0)").integral(&rep.rhs),
        ok,
    );

    let two_t = FuncSpec::polynomial(vec![rat(0, 1), rat(2, 1)], Domain::unit());
    let rep = change_var_check(&x, sub(&two_t, rat(0, 1)), &tol, MAX_DEPTH).unwrap();
    let half = rat(1, 2);
    let ok = rep.verdict == CvVerdict::Agree
        && rep.lhs.enclosure.contains(&half)
        && rep.rhs.enclosure.contains(&half)
        && rep.lhs.status.is_certified()
        && rep.rhs.status.is_certified();
    r.push(
        Row::new(
            r.case("b_poly_lhs"),
            "changevar_lhs",
            "f=poly(0,1) g=poly(0,2)",
        )
        .integral(&rep.lhs),
        ok,
    );
    r.push(
        Row::new(
            r.case("b_poly_rhs"),
            "changevar_rhs",
            "f=poly(0,1) g=poly(0,2)",
        )
        .integral(&rep.rhs),
        ok,
    );

    let sign = parse_funcspec("step(<1/2:-1,1)").unwrap();
    let ind = parse_funcspec("indicator(0,0)@[-1/2,0]").unwrap();
    let rep = change_var_check(&ind, sub(&sign, rat(0, 1)), &tol, MAX_DEPTH).unwrap();
    let ok = rep.verdict == CvVerdict::Agree
        && rep.lhs.enclosure == z
        && rep.rhs.enclosure.contains(&rat(0, 1));
    r.push(
        Row::new(
            r.case("c_step_lhs"),
            "changevar_lhs",
            format!("f={ind} g={sign}"),
        )
        .integral(&rep.lhs),
        ok,
    );
    r.push(
        Row::new(
            r.case("c_step_rhs"),
            "changevar_rhs",
            format!("f={ind} g={sign}"),
        )
        .integral(&rep.rhs),
        ok,
    );

    let mut rng = rng_for(seed, 9);
    let (mut certified, mut attempts, mut violations) = (0, 0, 0);
    while certified < 200 && attempts < 1000 {
        attempts += 1;
        let (f, g, c) = random_step_pair(&mut rng);
        let rep = change_var_check(&f, sub(&g, c), &tol, MAX_DEPTH).unwrap();
        if rep.verdict == CvVerdict::Violation {
            violations += 1;
        }
        if rep.lhs.status.is_certified() && rep.rhs.status.is_certified() {
            certified += 1;
        }
    }
    let row = Row::new(r.case("d_fuzz"), "property", "random step f, step g").status(format!(
        "attempts={attempts} certified={certified} violations={violations}"
    ));
    r.push(row, violations == 0 && certified == 200);

    let (mut bad, mut agree) = (0, 0);
    for _ in 0..20 {
        let (f, g, c) = random_step_pair(&mut rng);
        let fwd = change_var_check(&f, sub(&g, c.clone()), &tol, MAX_DEPTH).unwrap();
        let back = change_var_check(
            &f.reflect(),
            sub(&g.scaled(rat(-1, 1)), -c),
            &tol,
            MAX_DEPTH,
        )
        .unwrap();
        agree += usize::from(fwd.verdict == CvVerdict::Agree);
        if back.lhs.enclosure != fwd.lhs.enclosure.neg()
            || back.rhs.enclosure != fwd.rhs.enclosure.neg()
        {
            bad += 1;
        }
    }
    r.tally(
        "e_orientation",
        format!("20 reflected instances, {agree} agree"),
        20,
        bad,
    );
    r
}

fn cli_determinism(seed: u64) -> Recorder {
    let mut r = Recorder::new(10);
    let mut rng = rng_for(seed, 10);
    let (mut bad, mut probes) = (0, 0);
    for _ in 0..100 {
        let lo = rat(rng.random_range(-2..=0), rng.random_range(1..=2));
        let hi = &lo + &rat(rng.random_range(1..=4), 2);
        let dom = Domain::new(lo, hi).unwrap();
        let f = FuncSpec::new(random_kind(&mut rng, 2), dom.clone());
        let Ok(g) = parse_funcspec(&f.to_string()) else {
            bad += 1;
            continue;
        };
        if g != f {
            bad += 1;
            continue;
        }
        for _ in 0..4 {
            let u = random_rational(&mut rng, &dom.lo, &dom.hi, 16);
            let v = random_rational(&mut rng, &u, &dom.hi, 16);
            probes += 1;
            if f.eval_point(&u).unwrap() != g.eval_point(&u).unwrap()
                || f.range_on(&u, &v).unwrap() != g.range_on(&u, &v).unwrap()
            {
                bad += 1;
            }
        }
    }
    r.tally(
        "round_trip",
        format!("100 printed specs, {probes} probes"),
        100 + probes,
        bad,
    );

    // rerun a randomized criterion from the same seed
    let first = to_csv_string(&davies_consistency(seed).rows);
    let second = to_csv_string(&davies_consistency(seed).rows);
    let row = Row::new(r.case("rerun"), "determinism", "criterion 5 twice")
        .status(format!("bytes={}", first.len()));
    r.push(row, first == second);
    r
}

type Criterion = (u8, &'static str, fn(u64) -> Recorder);

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "dirichlet non-integrability certificate"),
    (2, "identity integrand"),
    (3, "thomae certified"),
    (4, "refinement monotonicity"),
    (5, "davies consistency"),
    (6, "generalized primitive soundness"),
    (7, "derivative recovery and dini sandwich"),
    (8, "thomson sums"),
    (9, "change of variable"),
    (10, "parse round trip and determinism"),
];

fn criteria() -> [Criterion; 10] {
    let run: [fn(u64) -> Recorder; 10] = [
        dirichlet_certificate,
        identity_integrand,
        thomae,
        refinement_monotonicity,
        davies_consistency,
        primitive_soundness,
        derivative_recovery,
        thomson,
        change_of_variable,
        cli_determinism,
    ];
    std::array::from_fn(|i| (CRITERIA[i].0, CRITERIA[i].1, run[i]))
}

/// Runs one criterion by number.
pub fn run_criterion(id: u8, seed: u64) -> Option<(CriterionOutcome, Vec<Row>)> {
    let (id, title, f) = criteria().into_iter().find(|c| c.0 == id)?;
    let rec = f(seed);
    Some((
        CriterionOutcome {
            id,
            title,
            passed: rec.passed,
        },
        rec.rows,
    ))
}

pub fn run_suite(seed: u64) -> SuiteReport {
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    for (id, _, _) in criteria() {
        let (outcome, mut r) = run_criterion(id, seed).expect("known criterion");
        rows.append(&mut r);
        outcomes.push(outcome);
    }
    SuiteReport {
        rows,
        criteria: outcomes,
    }
}
