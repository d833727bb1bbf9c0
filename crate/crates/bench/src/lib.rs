//! Fixed inputs shared by the benchmarks.

use darboux_core::{rat, Domain, FuncSpec, Kind, Partition, Rational};

/// `x^3 - x/2` on `[0, 1]`.
pub fn cubic() -> FuncSpec {
    FuncSpec::polynomial(
        vec![rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 1)],
        Domain::unit(),
    )
}

/// `|thomae|`, which has no closed-form integral and so always refines.
pub fn rough_thomae() -> FuncSpec {
    FuncSpec::on_unit(Kind::Abs(Box::new(Kind::Thomae)))
}

pub fn grid(n: usize) -> Partition {
    Partition::uniform(&rat(0, 1), &rat(1, 1), n).expect("n > 0")
}

/// `n` nested intervals around `1/3` with shrinking width.
pub fn shrinking_intervals(n: u32) -> Vec<(Rational, Rational)> {
    (1..=n)
        .map(|k| {
            let w = rat(1, 1 << k.min(60));
            (rat(1, 3) - &w, rat(1, 3) + w)
        })
        .collect()
}
