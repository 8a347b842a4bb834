//! Evaluable coefficient functions for the coupled system, drawn from a
//! closed catalog: regularized power fluxes for the leading parts, finite
//! monomial sums plus a spatial source for the reactions, and monomial sums
//! plus a constant on the boundary. Each catalog instance declares envelope
//! constants; `verify_envelope` checks the declared growth bounds by seeded
//! random sampling.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exponents::SystemExponents;
use crate::fmath::{abs, powf, signum, sqrt};
use crate::presets::BuiltinField;

/// Sign factor attached to a monomial term. The envelopes bound magnitudes
/// only; solvers need actual signed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCarrier {
    Plus,
    Minus,
    SignS,
    SignT,
}

impl SignCarrier {
    pub fn factor(&self, s: f64, t: f64) -> f64 {
        match self {
            SignCarrier::Plus => 1.0,
            SignCarrier::Minus => -1.0,
            SignCarrier::SignS => signum(s),
            SignCarrier::SignT => signum(t),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SignCarrier::Plus => "plus",
            SignCarrier::Minus => "minus",
            SignCarrier::SignS => "sign_s",
            SignCarrier::SignT => "sign_t",
        }
    }
}

/// Regularized power flux `(|grad|^2 + eps^2)^((p-2)/2) grad`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingFlux {
    /// Power `p` (or `q` for the second equation), in `(1, inf)`.
    pub exponent: f64,
    /// Regularization `eps >= 0`; required positive by the solver whenever
    /// the power differs from 2.
    pub epsilon: f64,
}

impl LeadingFlux {
    pub fn with_epsilon(&self, epsilon: f64) -> LeadingFlux {
        LeadingFlux {
            exponent: self.exponent,
            epsilon,
        }
    }

    pub fn eval(&self, grad: [f64; 2]) -> [f64; 2] {
        let m = grad[0] * grad[0] + grad[1] * grad[1] + self.epsilon * self.epsilon;
        if m == 0.0 {
            return [0.0, 0.0];
        }
        let factor = powf(m, 0.5 * (self.exponent - 2.0));
        [factor * grad[0], factor * grad[1]]
    }

    /// Derivative of the flux with respect to the gradient argument.
    pub fn jacobian(&self, grad: [f64; 2]) -> [[f64; 2]; 2] {
        let p = self.exponent;
        let m = grad[0] * grad[0] + grad[1] * grad[1] + self.epsilon * self.epsilon;
        if m == 0.0 {
            // degenerate point of the unregularized flux; the limit is the
            // identity for p = 2 and zero for p > 2
            let g = if p == 2.0 { 1.0 } else { 0.0 };
            return [[g, 0.0], [0.0, g]];
        }
        let g = powf(m, 0.5 * (p - 2.0));
        let c = (p - 2.0) * powf(m, 0.5 * (p - 4.0));
        [
            [g + c * grad[0] * grad[0], c * grad[0] * grad[1]],
            [c * grad[1] * grad[0], g + c * grad[1] * grad[1]],
        ]
    }
}

/// A spatial source term of a reaction function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceField {
    Constant(f64),
    /// One of the closed-form fields shipped with the manufactured presets.
    Builtin(BuiltinField),
}

impl SourceField {
    pub fn eval(&self, x: &[f64; 2]) -> f64 {
        match self {
            SourceField::Constant(c) => *c,
            SourceField::Builtin(b) => b.eval(x),
        }
    }
}

/// Monomial reaction term `coeff |s|^{s_exp} |t|^{t_exp} |xi|^{xi_exp}
/// |zeta|^{zeta_exp}` times a sign carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionTerm {
    pub coeff: f64,
    pub s_exp: f64,
    pub t_exp: f64,
    pub xi_exp: f64,
    pub zeta_exp: f64,
    pub sign: SignCarrier,
}

impl ReactionTerm {
    fn magnitude(&self, s: f64, t: f64, xi_norm: f64, zeta_norm: f64) -> f64 {
        self.coeff
            * powf(abs(s), self.s_exp)
            * powf(abs(t), self.t_exp)
            * powf(xi_norm, self.xi_exp)
            * powf(zeta_norm, self.zeta_exp)
    }
}

/// A reaction coefficient: monomial terms plus a spatial source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionSpec {
    pub terms: Vec<ReactionTerm>,
    pub source: SourceField,
}

impl ReactionSpec {
    pub fn eval(&self, x: &[f64; 2], s: f64, t: f64, xi: [f64; 2], zeta: [f64; 2]) -> f64 {
        let xi_n = sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        let zeta_n = sqrt(zeta[0] * zeta[0] + zeta[1] * zeta[1]);
        let mut sum = self.source.eval(x);
        for term in &self.terms {
            sum += term.sign.factor(s, t) * term.magnitude(s, t, xi_n, zeta_n);
        }
        sum
    }

    /// Partial derivative with respect to the value slot `s`. At kinks of
    /// `|s|` the one-sided limit 0 is used; this only affects the quality of
    /// Newton steps, not residuals.
    pub fn deriv_s(&self, _x: &[f64; 2], s: f64, t: f64, xi: [f64; 2], zeta: [f64; 2]) -> f64 {
        let xi_n = sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        let zeta_n = sqrt(zeta[0] * zeta[0] + zeta[1] * zeta[1]);
        let mut sum = 0.0;
        for term in &self.terms {
            sum += deriv_abs_power(term.sign, s, t, term.s_exp)
                * term.coeff
                * powf(abs(t), term.t_exp)
                * powf(xi_n, term.xi_exp)
                * powf(zeta_n, term.zeta_exp);
        }
        sum
    }

    /// Partial derivative with respect to the value slot `t`.
    pub fn deriv_t(&self, _x: &[f64; 2], s: f64, t: f64, xi: [f64; 2], zeta: [f64; 2]) -> f64 {
        let xi_n = sqrt(xi[0] * xi[0] + xi[1] * xi[1]);
        let zeta_n = sqrt(zeta[0] * zeta[0] + zeta[1] * zeta[1]);
        let mut sum = 0.0;
        for term in &self.terms {
            sum += deriv_abs_power(mirror_sign(term.sign), t, s, term.t_exp)
                * term.coeff
                * powf(abs(s), term.s_exp)
                * powf(xi_n, term.xi_exp)
                * powf(zeta_n, term.zeta_exp);
        }
        sum
    }
}

/// Views a carrier from the second slot: `sign(t)` becomes the "own slot"
/// carrier, `sign(s)` the "other slot" one.
fn mirror_sign(sign: SignCarrier) -> SignCarrier {
    match sign {
        SignCarrier::SignS => SignCarrier::SignT,
        SignCarrier::SignT => SignCarrier::SignS,
        other => other,
    }
}

/// d/ds of `|s|^e * carrier(s, t)`.
fn deriv_abs_power(sign: SignCarrier, s: f64, t: f64, e: f64) -> f64 {
    if e == 0.0 {
        return 0.0;
    }
    match sign {
        // |s|^e sign(s) is odd with derivative e |s|^(e-1)
        SignCarrier::SignS => {
            if s == 0.0 && e < 1.0 {
                0.0
            } else {
                e * powf(abs(s), e - 1.0)
            }
        }
        _ => {
            if s == 0.0 {
                0.0
            } else {
                sign.factor(s, t) * e * powf(abs(s), e - 1.0) * signum(s)
            }
        }
    }
}

/// Monomial boundary term `coeff |s|^{s_exp} |t|^{t_exp}` times a sign carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryTerm {
    pub coeff: f64,
    pub s_exp: f64,
    pub t_exp: f64,
    pub sign: SignCarrier,
}

/// A boundary coefficient: monomial terms plus a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub terms: Vec<BoundaryTerm>,
    pub constant: f64,
}

impl BoundarySpec {
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let mut sum = self.constant;
        for term in &self.terms {
            sum += term.sign.factor(s, t)
                * term.coeff
                * powf(abs(s), term.s_exp)
                * powf(abs(t), term.t_exp);
        }
        sum
    }

    pub fn deriv_s(&self, s: f64, t: f64) -> f64 {
        let mut sum = 0.0;
        for term in &self.terms {
            sum += deriv_abs_power(term.sign, s, t, term.s_exp)
                * term.coeff
                * powf(abs(t), term.t_exp);
        }
        sum
    }

    pub fn deriv_t(&self, s: f64, t: f64) -> f64 {
        let mut sum = 0.0;
        for term in &self.terms {
            sum += deriv_abs_power(mirror_sign(term.sign), t, s, term.t_exp)
                * term.coeff
                * powf(abs(s), term.s_exp);
        }
        sum
    }
}

/// Declared envelope constants: `a`/`ta` bound the two fluxes, `b`/`tb` the
/// two reactions, `c`/`tc` the two boundary terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConstants {
    pub a: [f64; 6],
    pub ta: [f64; 6],
    pub b: [f64; 7],
    pub tb: [f64; 7],
    pub c: [f64; 4],
    pub tc: [f64; 4],
}

impl EnvelopeConstants {
    pub fn zero() -> Self {
        EnvelopeConstants {
            a: [0.0; 6],
            ta: [0.0; 6],
            b: [0.0; 7],
            tb: [0.0; 7],
            c: [0.0; 4],
            tc: [0.0; 4],
        }
    }
}

/// A full coefficient model of the coupled system.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureSpec {
    pub flux1: LeadingFlux,
    pub flux2: LeadingFlux,
    pub reaction1: ReactionSpec,
    pub reaction2: ReactionSpec,
    pub boundary1: BoundarySpec,
    pub boundary2: BoundarySpec,
    pub envelopes: EnvelopeConstants,
    pub exponents: SystemExponents,
}

impl StructureSpec {
    /// Checks the catalog restrictions: flux powers above 1, nonnegative
    /// regularizations and term exponents, and every reaction term shaped
    /// like one of the envelope slots (value factors and gradient factors
    /// never mix within a term).
    pub fn validate(&self) -> Result<(), CoeffError> {
        self.exponents
            .validate()
            .map_err(|_| CoeffError::InvalidSpec("exponent data out of domain"))?;
        for flux in [&self.flux1, &self.flux2] {
            if !(flux.exponent > 1.0) {
                return Err(CoeffError::InvalidSpec("flux power must exceed 1"));
            }
            if !(flux.epsilon >= 0.0) {
                return Err(CoeffError::InvalidSpec("flux regularization must be >= 0"));
            }
        }
        if self.flux1.exponent != self.exponents.p || self.flux2.exponent != self.exponents.q {
            return Err(CoeffError::InvalidSpec(
                "flux powers must match the declared p and q",
            ));
        }
        for reaction in [&self.reaction1, &self.reaction2] {
            for term in &reaction.terms {
                let exps = [term.s_exp, term.t_exp, term.xi_exp, term.zeta_exp];
                if exps.iter().any(|&e| e < 0.0) {
                    return Err(CoeffError::InvalidSpec(
                        "reaction exponents must be nonnegative",
                    ));
                }
                let value_factor = term.s_exp > 0.0 || term.t_exp > 0.0;
                let grad_factor = term.xi_exp > 0.0 || term.zeta_exp > 0.0;
                if value_factor && grad_factor {
                    return Err(CoeffError::InvalidSpec(
                        "a reaction term may not mix value and gradient factors",
                    ));
                }
            }
        }
        for boundary in [&self.boundary1, &self.boundary2] {
            for term in &boundary.terms {
                if term.s_exp < 0.0 || term.t_exp < 0.0 {
                    return Err(CoeffError::InvalidSpec(
                        "boundary exponents must be nonnegative",
                    ));
                }
            }
        }
        Ok(())
    }

    /// The system with the two equations exchanged.
    pub fn swapped(&self) -> StructureSpec {
        let swap_reaction = |r: &ReactionSpec| ReactionSpec {
            terms: r
                .terms
                .iter()
                .map(|t| ReactionTerm {
                    coeff: t.coeff,
                    s_exp: t.t_exp,
                    t_exp: t.s_exp,
                    xi_exp: t.zeta_exp,
                    zeta_exp: t.xi_exp,
                    sign: swap_sign(t.sign),
                })
                .collect(),
            source: r.source,
        };
        let swap_boundary = |b: &BoundarySpec| BoundarySpec {
            terms: b
                .terms
                .iter()
                .map(|t| BoundaryTerm {
                    coeff: t.coeff,
                    s_exp: t.t_exp,
                    t_exp: t.s_exp,
                    sign: swap_sign(t.sign),
                })
                .collect(),
            constant: b.constant,
        };
        StructureSpec {
            flux1: self.flux2,
            flux2: self.flux1,
            reaction1: swap_reaction(&self.reaction2),
            reaction2: swap_reaction(&self.reaction1),
            boundary1: swap_boundary(&self.boundary2),
            boundary2: swap_boundary(&self.boundary1),
            envelopes: EnvelopeConstants {
                a: self.envelopes.ta,
                ta: self.envelopes.a,
                b: self.envelopes.tb,
                tb: self.envelopes.b,
                c: self.envelopes.tc,
                tc: self.envelopes.c,
            },
            exponents: self.exponents.swapped(),
        }
    }
}

fn swap_sign(s: SignCarrier) -> SignCarrier {
    match s {
        SignCarrier::SignS => SignCarrier::SignT,
        SignCarrier::SignT => SignCarrier::SignS,
        other => other,
    }
}

/// Selects one of the six coefficient functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

/// An evaluation point, tagged by its location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    Interior([f64; 2]),
    Boundary([f64; 2]),
}

impl EvalPoint {
    pub fn coords(&self) -> &[f64; 2] {
        match self {
            EvalPoint::Interior(x) | EvalPoint::Boundary(x) => x,
        }
    }
}

/// Value of a coefficient function: scalar for reactions and boundary terms,
/// vector for the fluxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoeffValue {
    Scalar(f64),
    Vector([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    /// A boundary coefficient was evaluated at an interior point.
    DomainMismatch,
    InvalidSpec(&'static str),
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::DomainMismatch => {
                write!(f, "boundary coefficients are only defined on the boundary")
            }
            CoeffError::InvalidSpec(msg) => write!(f, "invalid structure spec: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoeffError {}

/// Evaluates the selected coefficient function at a point.
pub fn evaluate(
    spec: &StructureSpec,
    which: Coefficient,
    point: EvalPoint,
    s: f64,
    t: f64,
    xi: [f64; 2],
    zeta: [f64; 2],
) -> Result<CoeffValue, CoeffError> {
    let x = *point.coords();
    match which {
        Coefficient::A1 => Ok(CoeffValue::Vector(spec.flux1.eval(xi))),
        Coefficient::A2 => Ok(CoeffValue::Vector(spec.flux2.eval(zeta))),
        Coefficient::B1 => Ok(CoeffValue::Scalar(spec.reaction1.eval(&x, s, t, xi, zeta))),
        Coefficient::B2 => Ok(CoeffValue::Scalar(spec.reaction2.eval(&x, s, t, xi, zeta))),
        Coefficient::C1 | Coefficient::C2 => match point {
            EvalPoint::Interior(_) => Err(CoeffError::DomainMismatch),
            EvalPoint::Boundary(_) => {
                let b = if which == Coefficient::C1 {
                    &spec.boundary1
                } else {
                    &spec.boundary2
                };
                Ok(CoeffValue::Scalar(b.eval(s, t)))
            }
        },
    }
}

/// Worst sampled argument tuple of an envelope check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub x: [f64; 2],
    pub s: f64,
    pub t: f64,
    pub xi: [f64; 2],
    pub zeta: [f64; 2],
}

/// Result of one growth-hypothesis check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeEntry {
    /// `H1` .. `H8`.
    pub hypothesis: &'static str,
    /// Largest observed `|coefficient| - bound` (upper envelopes) or
    /// `coercivity bound - coefficient . gradient` (lower bounds);
    /// nonpositive means the hypothesis held on every sample.
    pub max_violation: f64,
    pub samples: usize,
    pub worst: SamplePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub entries: [EnvelopeEntry; 8],
}

impl EnvelopeReport {
    /// Largest violation across all hypotheses.
    pub fn max_violation(&self) -> f64 {
        self.entries
            .iter()
            .fold(f64::NEG_INFINITY, |m, e| crate::fmath::fmax(m, e.max_violation))
    }

    /// Whether every hypothesis held up to the given roundoff allowance.
    /// Envelopes that are tight (equalities) accumulate a few ulps of noise
    /// between the two sides, so exact comparisons need `tolerance = 0` and
    /// slack constants.
    pub fn all_within(&self, tolerance: f64) -> bool {
        self.max_violation() <= tolerance
    }

    pub fn all_hold(&self) -> bool {
        self.all_within(0.0)
    }
}

/// Checks the declared envelopes by sampling: the upper bounds on the fluxes,
/// reactions and boundary terms, and the coercivity lower bounds on the
/// fluxes. Interior sample points are drawn uniformly from the unit square,
/// boundary points from its edges; `s, t` and the gradient arguments are
/// bounded by `radius`. Reproducible for a fixed seed.
pub fn verify_envelope(
    spec: &StructureSpec,
    samples: usize,
    radius: f64,
    seed: u64,
) -> EnvelopeReport {
    assert!(samples >= 1, "at least one sample required");
    assert!(radius > 0.0, "radius must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exps = &spec.exponents;
    let env = &spec.envelopes;
    let (p, q) = (exps.p, exps.q);

    let names = ["H1", "H2", "H3", "H4", "H5", "H6", "H7", "H8"];
    let mut entries: [EnvelopeEntry; 8] = core::array::from_fn(|i| EnvelopeEntry {
        hypothesis: names[i],
        max_violation: f64::NEG_INFINITY,
        samples,
        worst: SamplePoint {
            x: [0.0; 2],
            s: 0.0,
            t: 0.0,
            xi: [0.0; 2],
            zeta: [0.0; 2],
        },
    });

    let record = |entries: &mut [EnvelopeEntry; 8], idx: usize, violation: f64, at: SamplePoint| {
        if violation > entries[idx].max_violation {
            entries[idx].max_violation = violation;
            entries[idx].worst = at;
        }
    };

    for _ in 0..samples {
        let x_int = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let x_bnd = boundary_point(&mut rng);
        let s: f64 = rng.gen_range(-radius..radius);
        let t: f64 = rng.gen_range(-radius..radius);
        let xi = ball_point(&mut rng, radius);
        let zeta = ball_point(&mut rng, radius);
        let xi_sq = xi[0] * xi[0] + xi[1] * xi[1];
        let zeta_sq = zeta[0] * zeta[0] + zeta[1] * zeta[1];
        let xi_n = sqrt(xi_sq);
        let zeta_n = sqrt(zeta_sq);

        let at = SamplePoint {
            x: x_int,
            s,
            t,
            xi,
            zeta,
        };
        let at_bnd = SamplePoint {
            x: x_bnd,
            s,
            t,
            xi,
            zeta,
        };

        // upper bounds on the fluxes
        let a1 = spec.flux1.eval(xi);
        let a1_norm = sqrt(a1[0] * a1[0] + a1[1] * a1[1]);
        let bound1 = env.a[0] * powf(xi_n, p - 1.0)
            + env.a[1] * powf(abs(s), exps.r1 * (p - 1.0) / p)
            + env.a[2];
        record(&mut entries, 0, a1_norm - bound1, at);

        let a2 = spec.flux2.eval(zeta);
        let a2_norm = sqrt(a2[0] * a2[0] + a2[1] * a2[1]);
        let bound2 = env.ta[0] * powf(zeta_n, q - 1.0)
            + env.ta[1] * powf(abs(t), exps.r2 * (q - 1.0) / q)
            + env.ta[2];
        record(&mut entries, 1, a2_norm - bound2, at);

        // coercivity lower bounds; |xi|^p is taken from the squared norm so
        // tight bounds compare like against like
        let dot1 = a1[0] * xi[0] + a1[1] * xi[1];
        let low1 = env.a[3] * powf(xi_sq, 0.5 * p) - env.a[4] * powf(abs(s), exps.r1) - env.a[5];
        record(&mut entries, 2, low1 - dot1, at);

        let dot2 = a2[0] * zeta[0] + a2[1] * zeta[1];
        let low2 =
            env.ta[3] * powf(zeta_sq, 0.5 * q) - env.ta[4] * powf(abs(t), exps.r2) - env.ta[5];
        record(&mut entries, 3, low2 - dot2, at);

        // reaction envelopes
        let b1 = spec.reaction1.eval(&x_int, s, t, xi, zeta);
        let bound5 = env.b[0] * powf(abs(s), exps.b[0])
            + env.b[1] * powf(abs(t), exps.b[1])
            + env.b[2] * powf(abs(s), exps.b[2]) * powf(abs(t), exps.b[3])
            + env.b[3] * powf(xi_n, exps.b[4])
            + env.b[4] * powf(zeta_n, exps.b[5])
            + env.b[5] * powf(xi_n, exps.b[6]) * powf(zeta_n, exps.b[7])
            + env.b[6];
        record(&mut entries, 4, abs(b1) - bound5, at);

        let b2 = spec.reaction2.eval(&x_int, s, t, xi, zeta);
        let bound6 = env.tb[0] * powf(abs(s), exps.tb[0])
            + env.tb[1] * powf(abs(t), exps.tb[1])
            + env.tb[2] * powf(abs(s), exps.tb[2]) * powf(abs(t), exps.tb[3])
            + env.tb[3] * powf(xi_n, exps.tb[4])
            + env.tb[4] * powf(zeta_n, exps.tb[5])
            + env.tb[5] * powf(xi_n, exps.tb[6]) * powf(zeta_n, exps.tb[7])
            + env.tb[6];
        record(&mut entries, 5, abs(b2) - bound6, at);

        // boundary envelopes
        let c1 = spec.boundary1.eval(s, t);
        let bound7 = env.c[0] * powf(abs(s), exps.c[0])
            + env.c[1] * powf(abs(t), exps.c[1])
            + env.c[2] * powf(abs(s), exps.c[2]) * powf(abs(t), exps.c[3])
            + env.c[3];
        record(&mut entries, 6, abs(c1) - bound7, at_bnd);

        let c2 = spec.boundary2.eval(s, t);
        let bound8 = env.tc[0] * powf(abs(s), exps.tc[0])
            + env.tc[1] * powf(abs(t), exps.tc[1])
            + env.tc[2] * powf(abs(s), exps.tc[2]) * powf(abs(t), exps.tc[3])
            + env.tc[3];
        record(&mut entries, 7, abs(c2) - bound8, at_bnd);
    }

    EnvelopeReport { entries }
}

fn boundary_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let side: u8 = rng.gen_range(0..4);
    let t: f64 = rng.gen_range(0.0..1.0);
    match side {
        0 => [t, 0.0],
        1 => [1.0, t],
        2 => [t, 1.0],
        _ => [0.0, t],
    }
}

/// A point of the closed Euclidean ball of the given radius.
fn ball_point(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 2] {
    let a: f64 = rng.gen_range(-1.0..1.0);
    let b: f64 = rng.gen_range(-1.0..1.0);
    let n = sqrt(a * a + b * b);
    if n > 1.0 {
        [radius * a / n, radius * b / n]
    } else {
        [radius * a, radius * b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::SystemExponents;

    fn plain_spec() -> StructureSpec {
        let mut env = EnvelopeConstants::zero();
        env.a = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        env.ta = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        StructureSpec {
            flux1: LeadingFlux {
                exponent: 2.0,
                epsilon: 0.0,
            },
            flux2: LeadingFlux {
                exponent: 2.0,
                epsilon: 0.0,
            },
            reaction1: ReactionSpec {
                terms: alloc::vec![],
                source: SourceField::Constant(0.0),
            },
            reaction2: ReactionSpec {
                terms: alloc::vec![],
                source: SourceField::Constant(0.0),
            },
            boundary1: BoundarySpec {
                terms: alloc::vec![],
                constant: 0.0,
            },
            boundary2: BoundarySpec {
                terms: alloc::vec![],
                constant: 0.0,
            },
            envelopes: env,
            exponents: SystemExponents::zero_growth(2.0, 2.0, 3),
        }
    }

    #[test]
    fn identity_flux_for_p_two() {
        let spec = plain_spec();
        let v = evaluate(
            &spec,
            Coefficient::A1,
            EvalPoint::Interior([0.3, 0.3]),
            0.0,
            0.0,
            [3.0, 4.0],
            [0.0, 0.0],
        )
        .unwrap();
        assert_eq!(v, CoeffValue::Vector([3.0, 4.0]));
    }

    #[test]
    fn monomial_with_sign_carrier() {
        let mut spec = plain_spec();
        spec.reaction1.terms.push(ReactionTerm {
            coeff: 2.0,
            s_exp: 1.0,
            t_exp: 1.0,
            xi_exp: 0.0,
            zeta_exp: 0.0,
            sign: SignCarrier::SignT,
        });
        let v = evaluate(
            &spec,
            Coefficient::B1,
            EvalPoint::Interior([0.0, 0.0]),
            3.0,
            -2.0,
            [0.0; 2],
            [0.0; 2],
        )
        .unwrap();
        // 2 |3| |-2| sign(-2) = -12
        assert_eq!(v, CoeffValue::Scalar(-12.0));
    }

    #[test]
    fn degenerate_flux_point_is_zero() {
        let spec = StructureSpec {
            flux1: LeadingFlux {
                exponent: 3.0,
                epsilon: 0.0,
            },
            ..plain_spec()
        };
        let v = evaluate(
            &spec,
            Coefficient::A1,
            EvalPoint::Interior([0.5, 0.5]),
            0.0,
            0.0,
            [0.0, 0.0],
            [0.0; 2],
        )
        .unwrap();
        assert_eq!(v, CoeffValue::Vector([0.0, 0.0]));
    }

    #[test]
    fn boundary_coefficient_needs_boundary_point() {
        let spec = plain_spec();
        let err = evaluate(
            &spec,
            Coefficient::C1,
            EvalPoint::Interior([0.5, 0.5]),
            0.0,
            0.0,
            [0.0; 2],
            [0.0; 2],
        );
        assert_eq!(err, Err(CoeffError::DomainMismatch));
        let ok = evaluate(
            &spec,
            Coefficient::C1,
            EvalPoint::Boundary([0.5, 0.0]),
            0.0,
            0.0,
            [0.0; 2],
            [0.0; 2],
        );
        assert_eq!(ok, Ok(CoeffValue::Scalar(0.0)));
    }

    #[test]
    fn flux_homogeneity_without_regularization() {
        // |a(lambda xi)| = lambda^(p-1) |a(xi)| for lambda > 0
        let flux = LeadingFlux {
            exponent: 3.5,
            epsilon: 0.0,
        };
        let xi = [0.4, -0.7];
        let lambda = 2.3;
        let a1 = flux.eval(xi);
        let a2 = flux.eval([lambda * xi[0], lambda * xi[1]]);
        let n1 = (a1[0] * a1[0] + a1[1] * a1[1]).sqrt();
        let n2 = (a2[0] * a2[0] + a2[1] * a2[1]).sqrt();
        assert!((n2 - powf(lambda, 2.5) * n1).abs() < 1e-12 * n2);
    }

    #[test]
    fn exact_envelope_for_p_two_flux() {
        let spec = plain_spec();
        let report = verify_envelope(&spec, 500, 10.0, 42);
        assert!(report.all_within(1e-12), "violations: {:?}", report.entries);
    }

    #[test]
    fn undersized_constant_is_reported() {
        let mut spec = plain_spec();
        spec.reaction1.terms.push(ReactionTerm {
            coeff: 2.0,
            s_exp: 0.0,
            t_exp: 3.0,
            xi_exp: 0.0,
            zeta_exp: 0.0,
            sign: SignCarrier::Plus,
        });
        spec.exponents.b[1] = 3.0;
        spec.envelopes.b[1] = 1.0; // needs 2
        let report = verify_envelope(&spec, 500, 5.0, 7);
        let h5 = &report.entries[4];
        assert!(h5.max_violation > 0.0);
        assert!(abs(h5.worst.t) > 1.0);
    }

    #[test]
    fn regularized_flux_envelope_with_adjusted_constant() {
        // |a_eps(xi)| <= (1 + eps^2)^((p-2)/2) (|xi|^(p-1) + 1) for |xi| <= radius = 1
        let eps = 0.1;
        let adj = powf(1.0 + eps * eps, 0.5);
        let mut spec = plain_spec();
        spec.flux1 = LeadingFlux {
            exponent: 3.0,
            epsilon: eps,
        };
        spec.exponents.p = 3.0;
        spec.envelopes.a = [adj, 0.0, adj, 1.0, 0.0, 0.0];
        let report = verify_envelope(&spec, 2000, 1.0, 11);
        assert!(
            report.entries[0].max_violation <= 1e-12,
            "H1 violated: {:?}",
            report.entries[0]
        );
        // coercivity holds with A4 = 1 for p >= 2
        assert!(report.entries[2].max_violation <= 1e-12);
    }

    #[test]
    fn envelope_sampling_is_deterministic() {
        let spec = plain_spec();
        let a = verify_envelope(&spec, 200, 3.0, 5);
        let b = verify_envelope(&spec, 200, 3.0, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_value_gradient_terms_are_rejected() {
        let mut spec = plain_spec();
        spec.reaction1.terms.push(ReactionTerm {
            coeff: 1.0,
            s_exp: 1.0,
            t_exp: 0.0,
            xi_exp: 1.0,
            zeta_exp: 0.0,
            sign: SignCarrier::Plus,
        });
        assert!(spec.validate().is_err());
    }
}
