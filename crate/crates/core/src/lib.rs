//! Exact Riemann-integration laboratory.
//!
//! Everything is computed in exact rational arithmetic: lower and upper
//! Darboux sums, adaptive integral enclosures, generalized primitives and
//! their verification, and both sides of the change-of-variable formula for
//! substitutions `G(t) = c + ∫_a^t g`.

// Errors carry exact rationals and only occur off the hot path.
#![allow(clippy::result_large_err)]

pub mod changevar;
pub mod darboux;
pub mod error;
pub mod funcmodel;
pub mod numeric;
pub mod primitive;

pub use changevar::{
    change_var_check, composed_integrand, ComposedIntegrand, CvReport, CvVerdict, Substitution,
};
pub use darboux::{
    darboux_sums, davies_defect, definite_integral, integral_enclosure, integral_enclosure_traced,
    integral_enclosure_with, lower_sum, upper_sum, IntegralResult, Partition, RefineOptions,
    Snapshot, Status, DEFAULT_MAX_DEPTH,
};
pub use error::{Error, ParseRationalError, Result};
pub use funcmodel::{
    min_denominator, Domain, FuncSpec, Integrand, Kind, Owner, Polynomial, RangeResult, StepFn,
};
pub use numeric::{enc_add, enc_mul, enc_scale, rat, Enclosure, Rational};
pub use primitive::{
    barrow_check, constant_difference, decide_integrability, dini_estimates, find_witness,
    indefinite_lower, indefinite_upper, thomson_sum, thomson_worst, verify_gp, BarrowVerdict,
    ConstantDifference, DiniReport, GpReport, GpVerdict, NonIntegrabilityWitness, PrimitiveSpec,
    ThomsonScheme,
};
