//! Manufactured problems with known smooth solutions. Source terms are
//! derived in closed form so that the chosen pair solves the strong form of
//! the coupled system, including the flux boundary conditions; discretization
//! error can then be measured directly.

use alloc::string::String;
use core::f64::consts::PI;
use core::fmt;

use crate::coeffs::{
    BoundarySpec, EnvelopeConstants, LeadingFlux, ReactionSpec, ReactionTerm, SignCarrier,
    SourceField, StructureSpec,
};
use crate::exponents::SystemExponents;
use crate::fmath::{cos, sin, sqrt};
use crate::mesh::{Domain, Mesh};

/// Regularization of the degenerate flux in the 2D preset. The manufactured
/// source is derived from the regularized operator with this exact value, so
/// solving with a different regularization changes the problem.
pub const PLAP2D_EPSILON: f64 = 1e-3;

/// A closed-form solution component with its first two derivative tensors.
#[derive(Clone, Copy)]
pub struct ExactSolution {
    pub value: fn(&[f64; 2]) -> f64,
    pub gradient: fn(&[f64; 2]) -> [f64; 2],
    pub hessian: fn(&[f64; 2]) -> [[f64; 2]; 2],
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactSolution")
    }
}

/// A manufactured problem: coefficient model, base domain and the exact pair.
#[derive(Debug, Clone)]
pub struct ManufacturedProblem {
    pub name: &'static str,
    pub spec: StructureSpec,
    pub exact_u: ExactSolution,
    pub exact_v: ExactSolution,
    dimension: usize,
}

impl ManufacturedProblem {
    /// Domain descriptor for the preset at the requested resolution
    /// (`n` cells per direction).
    pub fn domain(&self, n: usize) -> Domain {
        match self.dimension {
            1 => Domain::Interval {
                start: 0.0,
                end: 1.0,
                cells: n,
            },
            _ => Domain::Rectangle {
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
                nx: n,
                ny: n,
            },
        }
    }

    pub fn mesh(&self, n: usize) -> Mesh {
        Mesh::from_domain(&self.domain(n))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresetError {
    UnknownPreset(String),
}

impl fmt::Display for PresetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetError::UnknownPreset(name) => write!(f, "unknown preset `{name}`"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PresetError {}

/// Names of the available presets.
pub const PRESET_NAMES: [&str; 3] = ["linear-1d", "decoupled", "plap-2d"];

/// Looks up a manufactured problem by name.
pub fn manufactured(preset: &str) -> Result<ManufacturedProblem, PresetError> {
    match preset {
        "linear-1d" => Ok(linear_1d()),
        "decoupled" => Ok(decoupled_1d()),
        "plap-2d" => Ok(plap_2d()),
        other => Err(PresetError::UnknownPreset(String::from(other))),
    }
}

/// The closed-form source fields referenced by the presets, addressable by
/// name so that serialized coefficient models stay portable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinField {
    Linear1dSourceU,
    Linear1dSourceV,
    Decoupled1dSourceU,
    Decoupled1dSourceV,
    Plap2dSourceU,
    Plap2dSourceV,
}

impl BuiltinField {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinField::Linear1dSourceU => "linear-1d/source-u",
            BuiltinField::Linear1dSourceV => "linear-1d/source-v",
            BuiltinField::Decoupled1dSourceU => "decoupled/source-u",
            BuiltinField::Decoupled1dSourceV => "decoupled/source-v",
            BuiltinField::Plap2dSourceU => "plap-2d/source-u",
            BuiltinField::Plap2dSourceV => "plap-2d/source-v",
        }
    }

    pub fn from_name(name: &str) -> Option<BuiltinField> {
        match name {
            "linear-1d/source-u" => Some(BuiltinField::Linear1dSourceU),
            "linear-1d/source-v" => Some(BuiltinField::Linear1dSourceV),
            "decoupled/source-u" => Some(BuiltinField::Decoupled1dSourceU),
            "decoupled/source-v" => Some(BuiltinField::Decoupled1dSourceV),
            "plap-2d/source-u" => Some(BuiltinField::Plap2dSourceU),
            "plap-2d/source-v" => Some(BuiltinField::Plap2dSourceV),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64; 2]) -> f64 {
        match self {
            // -u'' + u - v/2 = f with u = x(1-x), v = sin(pi x)
            BuiltinField::Linear1dSourceU => {
                2.0 + x[0] * (1.0 - x[0]) - 0.5 * sin(PI * x[0])
            }
            // -v'' + v - u/2 = f
            BuiltinField::Linear1dSourceV => {
                (PI * PI + 1.0) * sin(PI * x[0]) - 0.5 * x[0] * (1.0 - x[0])
            }
            BuiltinField::Decoupled1dSourceU => 2.0 + x[0] * (1.0 - x[0]),
            BuiltinField::Decoupled1dSourceV => (PI * PI + 1.0) * sin(PI * x[0]),
            // -div a_eps(grad u) + u = f with the regularized cubic flux
            BuiltinField::Plap2dSourceU => {
                let u = plap2d_u_value(x);
                u - plap2d_flux_divergence(x)
            }
            // -lap v + v = f with v = cos(pi x) cos(pi y)
            BuiltinField::Plap2dSourceV => {
                (2.0 * PI * PI + 1.0) * cos(PI * x[0]) * cos(PI * x[1])
            }
        }
    }
}

// ---------------------------------------------------------------------------
// linear-1d: p = q = 2 on (0,1) with u = x(1-x), v = sin(pi x) and
// cross-coupled linear reactions. At the exact pair the first reaction
// evaluates to the constant 2.
// ---------------------------------------------------------------------------

fn exact_parabola() -> ExactSolution {
    ExactSolution {
        value: |x| x[0] * (1.0 - x[0]),
        gradient: |x| [1.0 - 2.0 * x[0], 0.0],
        hessian: |_| [[-2.0, 0.0], [0.0, 0.0]],
    }
}

fn exact_sine() -> ExactSolution {
    ExactSolution {
        value: |x| sin(PI * x[0]),
        gradient: |x| [PI * cos(PI * x[0]), 0.0],
        hessian: |x| [[-PI * PI * sin(PI * x[0]), 0.0], [0.0, 0.0]],
    }
}

fn linear_flux() -> LeadingFlux {
    LeadingFlux {
        exponent: 2.0,
        epsilon: 0.0,
    }
}

fn term_value_s(coeff: f64) -> ReactionTerm {
    ReactionTerm {
        coeff,
        s_exp: 1.0,
        t_exp: 0.0,
        xi_exp: 0.0,
        zeta_exp: 0.0,
        sign: SignCarrier::SignS,
    }
}

fn term_value_t(coeff: f64) -> ReactionTerm {
    ReactionTerm {
        coeff,
        s_exp: 0.0,
        t_exp: 1.0,
        xi_exp: 0.0,
        zeta_exp: 0.0,
        sign: SignCarrier::SignT,
    }
}

fn linear_1d() -> ManufacturedProblem {
    let mut exponents = SystemExponents::zero_growth(2.0, 2.0, 3);
    exponents.b = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    exponents.tb = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];

    let mut envelopes = EnvelopeConstants::zero();
    envelopes.a = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    envelopes.ta = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    envelopes.b = [1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 2.3];
    envelopes.tb = [0.5, 1.0, 0.0, 0.0, 0.0, 0.0, 11.0];
    envelopes.c = [0.0, 0.0, 0.0, 1.0];
    envelopes.tc = [0.0, 0.0, 0.0, PI + 0.01];

    ManufacturedProblem {
        name: "linear-1d",
        spec: StructureSpec {
            flux1: linear_flux(),
            flux2: linear_flux(),
            reaction1: ReactionSpec {
                terms: alloc::vec![term_value_s(-1.0), term_value_t(0.5)],
                source: SourceField::Builtin(BuiltinField::Linear1dSourceU),
            },
            reaction2: ReactionSpec {
                terms: alloc::vec![term_value_t(-1.0), term_value_s(0.5)],
                source: SourceField::Builtin(BuiltinField::Linear1dSourceV),
            },
            // u' = 1 at x = 0 with normal -1, u' = -1 at x = 1 with normal +1
            boundary1: BoundarySpec {
                terms: alloc::vec![],
                constant: -1.0,
            },
            // v' = pi at x = 0, v' = -pi at x = 1
            boundary2: BoundarySpec {
                terms: alloc::vec![],
                constant: -PI,
            },
            envelopes,
            exponents,
        },
        exact_u: exact_parabola(),
        exact_v: exact_sine(),
        dimension: 1,
    }
}

// ---------------------------------------------------------------------------
// decoupled: the same exact pair but with each reaction depending only on its
// own unknown, so the system splits into two independent equations.
// ---------------------------------------------------------------------------

fn decoupled_1d() -> ManufacturedProblem {
    let mut exponents = SystemExponents::zero_growth(2.0, 2.0, 3);
    exponents.b = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    exponents.tb = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];

    let mut envelopes = EnvelopeConstants::zero();
    envelopes.a = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    envelopes.ta = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    envelopes.b = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.3];
    envelopes.tb = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 11.0];
    envelopes.c = [0.0, 0.0, 0.0, 1.0];
    envelopes.tc = [0.0, 0.0, 0.0, PI + 0.01];

    ManufacturedProblem {
        name: "decoupled",
        spec: StructureSpec {
            flux1: linear_flux(),
            flux2: linear_flux(),
            reaction1: ReactionSpec {
                terms: alloc::vec![term_value_s(-1.0)],
                source: SourceField::Builtin(BuiltinField::Decoupled1dSourceU),
            },
            reaction2: ReactionSpec {
                terms: alloc::vec![term_value_t(-1.0)],
                source: SourceField::Builtin(BuiltinField::Decoupled1dSourceV),
            },
            boundary1: BoundarySpec {
                terms: alloc::vec![],
                constant: -1.0,
            },
            boundary2: BoundarySpec {
                terms: alloc::vec![],
                constant: -PI,
            },
            envelopes,
            exponents,
        },
        exact_u: exact_parabola(),
        exact_v: exact_sine(),
        dimension: 1,
    }
}

// ---------------------------------------------------------------------------
// plap-2d: regularized cubic flux on the unit square. The bump
// u = sin^2(pi x) sin^2(pi y) has vanishing value and gradient on the
// boundary, so the flux condition reads a . nu = 0; the second equation is a
// linear reaction-diffusion problem for v = cos(pi x) cos(pi y), which also
// has zero normal derivative.
// ---------------------------------------------------------------------------

fn plap2d_u_value(x: &[f64; 2]) -> f64 {
    let sx = sin(PI * x[0]);
    let sy = sin(PI * x[1]);
    sx * sx * sy * sy
}

fn plap2d_u_gradient(x: &[f64; 2]) -> [f64; 2] {
    let sx = sin(PI * x[0]);
    let sy = sin(PI * x[1]);
    [
        PI * sin(2.0 * PI * x[0]) * sy * sy,
        PI * sx * sx * sin(2.0 * PI * x[1]),
    ]
}

fn plap2d_u_hessian(x: &[f64; 2]) -> [[f64; 2]; 2] {
    let sx = sin(PI * x[0]);
    let sy = sin(PI * x[1]);
    let uxx = 2.0 * PI * PI * cos(2.0 * PI * x[0]) * sy * sy;
    let uyy = 2.0 * PI * PI * sx * sx * cos(2.0 * PI * x[1]);
    let uxy = PI * PI * sin(2.0 * PI * x[0]) * sin(2.0 * PI * x[1]);
    [[uxx, uxy], [uxy, uyy]]
}

/// `div a_eps(grad u)` of the exact bump for the regularized cubic flux, from
/// the chain rule: `g(m) lap u + (p-2) m^{(p-4)/2} (grad u)^T H (grad u)`
/// with `m = |grad u|^2 + eps^2`.
fn plap2d_flux_divergence(x: &[f64; 2]) -> f64 {
    let grad = plap2d_u_gradient(x);
    let hess = plap2d_u_hessian(x);
    let eps = PLAP2D_EPSILON;
    let m = grad[0] * grad[0] + grad[1] * grad[1] + eps * eps;
    let g = sqrt(m); // (p-2)/2 = 1/2 for p = 3
    let lap = hess[0][0] + hess[1][1];
    let quad = grad[0] * grad[0] * hess[0][0]
        + 2.0 * grad[0] * grad[1] * hess[0][1]
        + grad[1] * grad[1] * hess[1][1];
    g * lap + quad / g
}

fn plap_2d() -> ManufacturedProblem {
    let mut exponents = SystemExponents::zero_growth(3.0, 2.0, 3);
    // p = N leaves the critical exponents unbounded; fix a working exponent
    exponents.working_exponent_override = Some(12.0);
    exponents.b = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    exponents.tb = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];

    let adj = sqrt(1.0 + PLAP2D_EPSILON * PLAP2D_EPSILON);
    let mut envelopes = EnvelopeConstants::zero();
    envelopes.a = [adj, 0.0, adj, 1.0, 0.0, 0.0];
    envelopes.ta = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    envelopes.b = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 500.0];
    envelopes.tb = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0 * PI * PI + 1.01];
    envelopes.c = [0.0; 4];
    envelopes.tc = [0.0; 4];

    ManufacturedProblem {
        name: "plap-2d",
        spec: StructureSpec {
            flux1: LeadingFlux {
                exponent: 3.0,
                epsilon: PLAP2D_EPSILON,
            },
            flux2: linear_flux(),
            reaction1: ReactionSpec {
                terms: alloc::vec![term_value_s(-1.0)],
                source: SourceField::Builtin(BuiltinField::Plap2dSourceU),
            },
            reaction2: ReactionSpec {
                terms: alloc::vec![term_value_t(-1.0)],
                source: SourceField::Builtin(BuiltinField::Plap2dSourceV),
            },
            boundary1: BoundarySpec {
                terms: alloc::vec![],
                constant: 0.0,
            },
            boundary2: BoundarySpec {
                terms: alloc::vec![],
                constant: 0.0,
            },
            envelopes,
            exponents,
        },
        exact_u: ExactSolution {
            value: plap2d_u_value,
            gradient: plap2d_u_gradient,
            hessian: plap2d_u_hessian,
        },
        exact_v: ExactSolution {
            value: |x| cos(PI * x[0]) * cos(PI * x[1]),
            gradient: |x| {
                [
                    -PI * sin(PI * x[0]) * cos(PI * x[1]),
                    -PI * cos(PI * x[0]) * sin(PI * x[1]),
                ]
            },
            hessian: |x| {
                let v = cos(PI * x[0]) * cos(PI * x[1]);
                let vxy = PI * PI * sin(PI * x[0]) * sin(PI * x[1]);
                [[-PI * PI * v, vxy], [vxy, -PI * PI * v]]
            },
        },
        dimension: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::verify_envelope;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(
            manufactured("nope"),
            Err(PresetError::UnknownPreset(_))
        ));
    }

    #[test]
    fn builtin_field_names_round_trip() {
        for field in [
            BuiltinField::Linear1dSourceU,
            BuiltinField::Linear1dSourceV,
            BuiltinField::Decoupled1dSourceU,
            BuiltinField::Decoupled1dSourceV,
            BuiltinField::Plap2dSourceU,
            BuiltinField::Plap2dSourceV,
        ] {
            assert_eq!(BuiltinField::from_name(field.name()), Some(field));
        }
    }

    #[test]
    fn presets_validate_and_are_strictly_admissible() {
        for name in PRESET_NAMES {
            let problem = manufactured(name).unwrap();
            problem.spec.validate().unwrap();
            let report = crate::conditions::check_strict(&problem.spec.exponents).unwrap();
            assert!(report.overall, "{name} fails {:?}", report.failing());
        }
    }

    #[test]
    fn preset_envelopes_hold_under_sampling() {
        for name in PRESET_NAMES {
            let problem = manufactured(name).unwrap();
            let report = verify_envelope(&problem.spec, 2000, 5.0, 123);
            assert!(
                report.all_within(1e-12),
                "{name}: {:?}",
                report
                    .entries
                    .iter()
                    .filter(|e| e.max_violation > 0.0)
                    .collect::<alloc::vec::Vec<_>>()
            );
        }
    }

    /// Flux of equation one as a function of position, for the exact solution.
    fn flux_at(problem: &ManufacturedProblem, x: &[f64; 2]) -> [f64; 2] {
        problem.spec.flux1.eval((problem.exact_u.gradient)(x))
    }

    /// Fourth-order Richardson central difference of d/dx_axis of `f`.
    /// The step must resolve the regularization scale of the flux near its
    /// degenerate points, where the integrand varies on a length of order
    /// epsilon over the local gradient curvature.
    fn diff(f: impl Fn(&[f64; 2]) -> f64, x: &[f64; 2], axis: usize, h: f64) -> f64 {
        let shift = |d: f64| {
            let mut y = *x;
            y[axis] += d;
            f(&y)
        };
        let d1 = (shift(h) - shift(-h)) / (2.0 * h);
        let d2 = (shift(0.5 * h) - shift(-0.5 * h)) / h;
        (4.0 * d2 - d1) / 3.0
    }

    #[test]
    fn strong_form_residual_vanishes_at_random_points() {
        // finite-difference flux divergence, independent of the closed-form
        // derivation used to build the source fields
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for name in PRESET_NAMES {
            let problem = manufactured(name).unwrap();
            let dim = problem.dimension();
            for _ in 0..10_000 {
                let x = [
                    rng.gen_range(0.01..0.99),
                    if dim == 2 {
                        rng.gen_range(0.01..0.99)
                    } else {
                        0.0
                    },
                ];
                // near degenerate points of the flux the integrand varies on
                // the regularization scale, so the step shrinks with the
                // local gradient; elsewhere a larger step keeps roundoff down
                let gmag = {
                    let g = (problem.exact_u.gradient)(&x);
                    (g[0] * g[0] + g[1] * g[1]).sqrt()
                };
                let h = 1e-6 + 1e-4 * gmag.min(1.0);
                let mut div = diff(|y| flux_at(&problem, y)[0], &x, 0, h);
                if dim == 2 {
                    div += diff(|y| flux_at(&problem, y)[1], &x, 1, h);
                }
                let u = (problem.exact_u.value)(&x);
                let v = (problem.exact_v.value)(&x);
                let gu = (problem.exact_u.gradient)(&x);
                let gv = (problem.exact_v.gradient)(&x);
                let b1 = problem.spec.reaction1.eval(&x, u, v, gu, gv);
                let residual = -div - b1;
                assert!(
                    residual.abs() <= 1e-8,
                    "{name}: residual {residual} at {x:?}"
                );

                // second equation: both presets use the linear flux there
                let mut div2 = diff(
                    |y| problem.spec.flux2.eval((problem.exact_v.gradient)(y))[0],
                    &x,
                    0,
                    1e-4,
                );
                if dim == 2 {
                    div2 += diff(
                        |y| problem.spec.flux2.eval((problem.exact_v.gradient)(y))[1],
                        &x,
                        1,
                        1e-4,
                    );
                }
                let b2 = problem.spec.reaction2.eval(&x, u, v, gu, gv);
                let residual2 = -div2 - b2;
                assert!(
                    residual2.abs() <= 1e-8,
                    "{name}: second residual {residual2} at {x:?}"
                );
            }
        }
    }

    #[test]
    fn flux_matches_boundary_coefficient() {
        // a(grad u) . nu = C1 on the boundary, sampled along each side
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in PRESET_NAMES {
            let problem = manufactured(name).unwrap();
            let mesh = problem.mesh(4);
            for fi in 0..mesh.boundary.len() {
                let fg = mesh.facet_geometry(fi);
                for _ in 0..16 {
                    let t: f64 = rng.gen_range(0.0..1.0);
                    let a = mesh.vertices[fg.nodes[0]];
                    let b = mesh.vertices[fg.nodes[fg.nnodes - 1]];
                    let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                    let flux = flux_at(&problem, &x);
                    let dot = flux[0] * fg.normal[0] + flux[1] * fg.normal[1];
                    let u = (problem.exact_u.value)(&x);
                    let v = (problem.exact_v.value)(&x);
                    let c1 = problem.spec.boundary1.eval(u, v);
                    assert!(
                        (dot - c1).abs() < 1e-10,
                        "{name}: a.nu = {dot}, C1 = {c1} at {x:?}"
                    );

                    let flux2 = problem.spec.flux2.eval((problem.exact_v.gradient)(&x));
                    let dot2 = flux2[0] * fg.normal[0] + flux2[1] * fg.normal[1];
                    let c2 = problem.spec.boundary2.eval(u, v);
                    assert!(
                        (dot2 - c2).abs() < 1e-10,
                        "{name}: a2.nu = {dot2}, C2 = {c2} at {x:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn reaction_reduces_to_constant_at_exact_pair() {
        // the first reaction of linear-1d evaluates to 2 at the exact pair
        let problem = manufactured("linear-1d").unwrap();
        for x0 in [0.1, 0.35, 0.72] {
            let x = [x0, 0.0];
            let u = (problem.exact_u.value)(&x);
            let v = (problem.exact_v.value)(&x);
            let b1 = problem
                .spec
                .reaction1
                .eval(&x, u, v, [0.0; 2], [0.0; 2]);
            assert!((b1 - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn plap_sources_stay_within_declared_constant() {
        let problem = manufactured("plap-2d").unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=100 {
            for j in 0..=100 {
                let x = [i as f64 / 100.0, j as f64 / 100.0];
                worst = worst.max(
                    BuiltinField::Plap2dSourceU.eval(&x).abs(),
                );
            }
        }
        assert!(
            worst < problem.spec.envelopes.b[6],
            "source peak {worst} exceeds declared constant"
        );
    }
}
