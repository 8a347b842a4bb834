//! Toolkit for coupled quasilinear elliptic systems with nonlinear boundary
//! conditions: exact exponent algebra for the growth hypotheses, model
//! (p,q)-Laplacian solvers on intervals and rectangles, and a numerical replay
//! of the Moser iteration (truncations, norm ladders, tail functionals) on the
//! discrete solutions.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded or wasm targets. File formats, reports and the
//! command line front-end live in the companion crate `quasibound-cli`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod certify;
pub mod coeffs;
pub mod conditions;
pub mod exponents;
pub mod field;
pub mod ladder;
pub mod mesh;
pub mod norms;
pub mod presets;
pub mod solve;
pub mod splits;

pub use certify::{certify, CertificateReport, CertifyError};
pub use coeffs::{
    verify_envelope, BoundarySpec, BoundaryTerm, CoeffError, Coefficient, EnvelopeConstants,
    EnvelopeReport, EvalPoint, LeadingFlux, ReactionSpec, ReactionTerm, SignCarrier, SourceField,
    StructureSpec,
};
pub use conditions::{check_dirichlet, check_strict, check_weak, ConditionCheck, ConditionReport};
pub use exponents::{
    critical_set, critical_sobolev, critical_trace, CriticalSet, ExponentError, ExtendedExponent,
    SystemExponents,
};
pub use field::Field;
pub use ladder::{ladder, sign_split, tail_functionals, truncate, LadderError, NormLadder, Verdict};
pub use mesh::{Cell, Domain, Facet, Mesh};
pub use presets::{manufactured, ExactSolution, ManufacturedProblem, PresetError};
pub use solve::{
    assemble_residual, solve, BoundaryMode, Equation, SolutionPair, SolveConfig, SolveError,
};
pub use splits::{holder_split, schedule, HolderSplit, IterationSchedule, ScheduleMode};

/// Float helpers that resolve through `num_traits::Float`, so the same call
/// sites work with and without `std`.
pub(crate) mod fmath {
    use num_traits::Float;

    #[inline]
    pub(crate) fn powf(x: f64, y: f64) -> f64 {
        Float::powf(x, y)
    }

    #[inline]
    pub(crate) fn sqrt(x: f64) -> f64 {
        Float::sqrt(x)
    }

    #[inline]
    pub(crate) fn ln(x: f64) -> f64 {
        Float::ln(x)
    }

    #[inline]
    pub(crate) fn exp(x: f64) -> f64 {
        Float::exp(x)
    }

    #[inline]
    pub(crate) fn sin(x: f64) -> f64 {
        Float::sin(x)
    }

    #[inline]
    pub(crate) fn cos(x: f64) -> f64 {
        Float::cos(x)
    }

    #[inline]
    pub(crate) fn abs(x: f64) -> f64 {
        Float::abs(x)
    }

    #[inline]
    pub(crate) fn signum(x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else if x < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    #[inline]
    pub(crate) fn fmax(x: f64, y: f64) -> f64 {
        Float::max(x, y)
    }

    #[inline]
    pub(crate) fn fmin(x: f64, y: f64) -> f64 {
        Float::min(x, y)
    }
}
