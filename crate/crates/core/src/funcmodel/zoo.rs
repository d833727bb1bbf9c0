//! Named test functions covering every kind.

use super::{Domain, FuncSpec, Kind, Polynomial, StepFn};
use crate::numeric::{rat, Rational};

#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: &'static str,
    pub func: FuncSpec,
    /// Continuous except on a null set, hence Riemann integrable.
    pub continuous_ae: bool,
}

fn poly(c: &[(i64, i64)], domain: Domain) -> FuncSpec {
    FuncSpec::polynomial(c.iter().map(|&(p, q)| rat(p, q)).collect(), domain)
}

fn unit_step(breaks: &[(i64, i64)], values: &[(i64, i64)]) -> FuncSpec {
    let s = StepFn::new(
        breaks.iter().map(|&(p, q)| rat(p, q)).collect(),
        values.iter().map(|&(p, q)| rat(p, q)).collect(),
    )
    .expect("valid step");
    FuncSpec::step(s, Domain::unit())
}

pub fn zoo() -> Vec<ZooEntry> {
    let sym = Domain {
        lo: rat(-1, 1),
        hi: rat(1, 1),
    };
    vec![
        ZooEntry {
            name: "identity",
            func: poly(&[(0, 1), (1, 1)], Domain::unit()),
            continuous_ae: true,
        },
        ZooEntry {
            name: "parabola",
            func: poly(&[(0, 1), (-1, 1), (1, 1)], Domain::unit()),
            continuous_ae: true,
        },
        ZooEntry {
            name: "cubic",
            func: poly(&[(0, 1), (-3, 4), (0, 1), (1, 1)], sym),
            continuous_ae: true,
        },
        ZooEntry {
            name: "step",
            func: unit_step(&[(1, 3), (2, 3)], &[(0, 1), (1, 1), (-1, 2)]),
            continuous_ae: true,
        },
        ZooEntry {
            name: "indicator",
            func: FuncSpec::indicator(rat(1, 4), rat(1, 2), Domain::unit()).unwrap(),
            continuous_ae: true,
        },
        ZooEntry {
            name: "thomae",
            func: FuncSpec::thomae(),
            continuous_ae: true,
        },
        ZooEntry {
            name: "scaled_thomae",
            func: FuncSpec::on_unit(Kind::Scale(rat(-2, 1), Box::new(Kind::Thomae))),
            continuous_ae: true,
        },
        ZooEntry {
            name: "ramp_plus_jump",
            func: FuncSpec::on_unit(Kind::Sum(
                Box::new(Kind::Polynomial(Polynomial::new(vec![
                    Rational::zero(),
                    Rational::one(),
                ]))),
                Box::new(Kind::Step(
                    StepFn::new(vec![rat(1, 2)], vec![rat(0, 1), rat(1, 1)]).unwrap(),
                )),
            )),
            continuous_ae: true,
        },
        ZooEntry {
            name: "dirichlet",
            func: FuncSpec::dirichlet(),
            continuous_ae: false,
        },
    ]
}

/// Looks up a zoo member by name.
pub fn get(name: &str) -> Option<FuncSpec> {
    zoo().into_iter().find(|e| e.name == name).map(|e| e.func)
}
