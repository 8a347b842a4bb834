//! Discretization and solution of the coupled system with piecewise-linear
//! elements: residual assembly from the weak form, damped Newton inner solves
//! against a banded Jacobian, and alternating (Picard) coupling of the two
//! equations.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::coeffs::StructureSpec;
use crate::field::Field;
use crate::fmath::{abs, fmax, sqrt};
use crate::mesh::Mesh;

/// Selects one of the two equations of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    First,
    Second,
}

/// Boundary handling of the discrete problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Natural flux condition `a . nu = C` through the boundary integral.
    FluxBoundary,
    /// Homogeneous Dirichlet condition: boundary rows become constraints.
    Dirichlet,
}

/// Solver parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Overrides the flux regularization of the coefficient model when set.
    pub epsilon: Option<f64>,
    /// Target for the maximum nodal residual of each equation.
    pub newton_tol: f64,
    /// Newton iteration cap per inner solve.
    pub newton_max: usize,
    /// Backtracking factor of the line search, in (0, 1).
    pub damping: f64,
    /// Cap on the outer alternating sweeps.
    pub picard_max: usize,
    /// Target for the maximum nodal change across one outer sweep.
    pub picard_tol: f64,
    pub mode: BoundaryMode,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            epsilon: None,
            newton_tol: 1e-10,
            newton_max: 50,
            damping: 0.5,
            picard_max: 200,
            picard_tol: 1e-11,
            mode: BoundaryMode::FluxBoundary,
        }
    }
}

/// A discrete solution of the coupled system with its residual statistics.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub u: Field,
    pub v: Field,
    /// Maximum nodal residual of the first equation at the final iterate.
    pub residual_u: f64,
    pub residual_v: f64,
    pub outer_iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Fields live on different meshes.
    MeshMismatch,
    /// A Newton step was unsolvable.
    SingularJacobian,
    /// A flux power differs from 2 but the effective regularization is zero.
    MissingRegularization,
    InvalidConfig(&'static str),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::MeshMismatch => write!(f, "fields live on different meshes"),
            SolveError::SingularJacobian => write!(f, "singular Jacobian in Newton step"),
            SolveError::MissingRegularization => write!(
                f,
                "nonlinear flux requires a positive regularization epsilon"
            ),
            SolveError::InvalidConfig(msg) => write!(f, "invalid solve config: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}

/// Nodal residual of one equation of the weak form: for each basis function,
/// `int A . grad(phi) - int B phi - int_boundary C phi`. In Dirichlet mode
/// the rows of boundary vertices are replaced by the constraint `w_i - 0`.
///
/// Reactions see the actual gradients of `u` and `v` here; the frozen-gradient
/// variant used inside the inner solves is internal to [`solve`].
pub fn assemble_residual(
    spec: &StructureSpec,
    u: &Field,
    v: &Field,
    config: &SolveConfig,
    which: Equation,
) -> Result<Vec<f64>, SolveError> {
    if !u.same_mesh(v) {
        return Err(SolveError::MeshMismatch);
    }
    let sys = System::new(u.mesh(), spec, config);
    Ok(sys.residual(which, u.values(), v.values(), u.values(), v.values()))
}

/// Solves the coupled system by alternating sweeps: freeze `v` and
/// Newton-solve the first equation in `u`, then freeze `u` and solve the
/// second, until the outer change drops below `picard_tol` or the sweep cap
/// is reached. Returns the best iterate with `converged = false` when the
/// caps are exhausted.
pub fn solve(
    mesh: &Arc<Mesh>,
    spec: &StructureSpec,
    config: &SolveConfig,
    initial: Option<&SolutionPair>,
) -> Result<SolutionPair, SolveError> {
    if !(config.damping > 0.0 && config.damping < 1.0) {
        return Err(SolveError::InvalidConfig("damping must be in (0, 1)"));
    }
    if !(config.newton_tol > 0.0 && config.picard_tol > 0.0) {
        return Err(SolveError::InvalidConfig("tolerances must be positive"));
    }
    if config.newton_max < 1 || config.picard_max < 1 {
        return Err(SolveError::InvalidConfig("iteration caps must be at least 1"));
    }
    let sys = System::new(mesh, spec, config);
    if (sys.flux1.exponent != 2.0 && sys.flux1.epsilon <= 0.0)
        || (sys.flux2.exponent != 2.0 && sys.flux2.epsilon <= 0.0)
    {
        return Err(SolveError::MissingRegularization);
    }

    let n = mesh.vertex_count();
    let (mut uvals, mut vvals) = match initial {
        Some(pair) => {
            if !pair.u.same_mesh(&pair.v) || pair.u.len() != n {
                return Err(SolveError::MeshMismatch);
            }
            (pair.u.values().to_vec(), pair.v.values().to_vec())
        }
        None => (alloc::vec![0.0; n], alloc::vec![0.0; n]),
    };

    let mut outer = 0;
    let mut converged = false;
    let mut residual_u = f64::INFINITY;
    let mut residual_v = f64::INFINITY;
    for sweep in 1..=config.picard_max {
        outer = sweep;
        let u_prev = uvals.clone();
        let v_prev = vvals.clone();

        // first equation: v frozen, reaction gradients from the last sweep
        sys.newton(Equation::First, &mut uvals, &v_prev, &u_prev, &v_prev, config)?;
        // second equation: the fresh u is frozen, gradients Gauss-Seidel style
        let u_new = uvals.clone();
        sys.newton(Equation::Second, &mut vvals, &u_new, &u_new, &v_prev, config)?;

        let mut change = 0.0_f64;
        for i in 0..n {
            change = fmax(change, abs(uvals[i] - u_prev[i]));
            change = fmax(change, abs(vvals[i] - v_prev[i]));
        }
        residual_u = inf_norm(&sys.residual(Equation::First, &uvals, &vvals, &uvals, &vvals));
        residual_v = inf_norm(&sys.residual(Equation::Second, &uvals, &vvals, &uvals, &vvals));
        if change <= config.picard_tol
            && residual_u <= config.newton_tol
            && residual_v <= config.newton_tol
        {
            converged = true;
            break;
        }
    }

    Ok(SolutionPair {
        u: Field::new(mesh.clone(), uvals),
        v: Field::new(mesh.clone(), vvals),
        residual_u,
        residual_v,
        outer_iterations: outer,
        converged,
    })
}

fn inf_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, &v| fmax(m, abs(v)))
}

fn l2_norm(values: &[f64]) -> f64 {
    sqrt(values.iter().map(|v| v * v).sum())
}

/// Assembly context with the effective flux regularizations applied.
struct System<'a> {
    mesh: &'a Mesh,
    spec: &'a StructureSpec,
    mode: BoundaryMode,
    flux1: crate::coeffs::LeadingFlux,
    flux2: crate::coeffs::LeadingFlux,
}

impl<'a> System<'a> {
    fn new(mesh: &'a Mesh, spec: &'a StructureSpec, config: &SolveConfig) -> System<'a> {
        let flux1 = match config.epsilon {
            Some(eps) => spec.flux1.with_epsilon(eps),
            None => spec.flux1,
        };
        let flux2 = match config.epsilon {
            Some(eps) => spec.flux2.with_epsilon(eps),
            None => spec.flux2,
        };
        System {
            mesh,
            spec,
            mode: config.mode,
            flux1,
            flux2,
        }
    }

    /// Residual of one equation. The unknown's own gradient feeds the flux;
    /// the reaction's gradient slots are evaluated on `gu_from` / `gv_from`
    /// (the frozen fields of the current sweep).
    fn residual(
        &self,
        eq: Equation,
        u: &[f64],
        v: &[f64],
        gu_from: &[f64],
        gv_from: &[f64],
    ) -> Vec<f64> {
        let mesh = self.mesh;
        let mut out = alloc::vec![0.0; mesh.vertex_count()];
        for ci in 0..mesh.cells.len() {
            let g = mesh.cell_geometry(ci);
            let unknown = match eq {
                Equation::First => u,
                Equation::Second => v,
            };
            let grad_unknown = cell_gradient(&g, unknown);
            let grad_u_frozen = cell_gradient(&g, gu_from);
            let grad_v_frozen = cell_gradient(&g, gv_from);
            let flux = match eq {
                Equation::First => self.flux1.eval(grad_unknown),
                Equation::Second => self.flux2.eval(grad_unknown),
            };
            for qp in &g.quad[..g.nquad] {
                let mut sq = 0.0;
                let mut tq = 0.0;
                for k in 0..g.nnodes {
                    sq += u[g.nodes[k]] * qp.basis[k];
                    tq += v[g.nodes[k]] * qp.basis[k];
                }
                let reaction = match eq {
                    Equation::First => {
                        self.spec
                            .reaction1
                            .eval(&qp.x, sq, tq, grad_u_frozen, grad_v_frozen)
                    }
                    Equation::Second => {
                        self.spec
                            .reaction2
                            .eval(&qp.x, sq, tq, grad_u_frozen, grad_v_frozen)
                    }
                };
                for k in 0..g.nnodes {
                    let dot = flux[0] * g.grads[k][0] + flux[1] * g.grads[k][1];
                    out[g.nodes[k]] += qp.weight * (dot - reaction * qp.basis[k]);
                }
            }
        }
        if self.mode == BoundaryMode::FluxBoundary {
            for fi in 0..mesh.boundary.len() {
                let fg = mesh.facet_geometry(fi);
                for qp in &fg.quad[..fg.nquad] {
                    let mut sq = 0.0;
                    let mut tq = 0.0;
                    for k in 0..fg.nnodes {
                        sq += u[fg.nodes[k]] * qp.basis[k];
                        tq += v[fg.nodes[k]] * qp.basis[k];
                    }
                    let bval = match eq {
                        Equation::First => self.spec.boundary1.eval(sq, tq),
                        Equation::Second => self.spec.boundary2.eval(sq, tq),
                    };
                    for k in 0..fg.nnodes {
                        out[fg.nodes[k]] -= qp.weight * bval * qp.basis[k];
                    }
                }
            }
        } else {
            let unknown = match eq {
                Equation::First => u,
                Equation::Second => v,
            };
            for i in 0..mesh.vertex_count() {
                if mesh.is_boundary_vertex(i) {
                    out[i] = unknown[i];
                }
            }
        }
        out
    }

    /// Banded Jacobian of the residual with respect to the unknown of `eq`,
    /// at frozen reaction gradients.
    fn jacobian(
        &self,
        eq: Equation,
        u: &[f64],
        v: &[f64],
        gu_from: &[f64],
        gv_from: &[f64],
    ) -> Band {
        let mesh = self.mesh;
        let mut band = Band::new(mesh.vertex_count(), mesh.bandwidth());
        for ci in 0..mesh.cells.len() {
            let g = mesh.cell_geometry(ci);
            let unknown = match eq {
                Equation::First => u,
                Equation::Second => v,
            };
            let grad_unknown = cell_gradient(&g, unknown);
            let grad_u_frozen = cell_gradient(&g, gu_from);
            let grad_v_frozen = cell_gradient(&g, gv_from);
            let dflux = match eq {
                Equation::First => self.flux1.jacobian(grad_unknown),
                Equation::Second => self.flux2.jacobian(grad_unknown),
            };
            for qp in &g.quad[..g.nquad] {
                let mut sq = 0.0;
                let mut tq = 0.0;
                for k in 0..g.nnodes {
                    sq += u[g.nodes[k]] * qp.basis[k];
                    tq += v[g.nodes[k]] * qp.basis[k];
                }
                let dreaction = match eq {
                    Equation::First => {
                        self.spec
                            .reaction1
                            .deriv_s(&qp.x, sq, tq, grad_u_frozen, grad_v_frozen)
                    }
                    Equation::Second => {
                        self.spec
                            .reaction2
                            .deriv_t(&qp.x, sq, tq, grad_u_frozen, grad_v_frozen)
                    }
                };
                for i in 0..g.nnodes {
                    for j in 0..g.nnodes {
                        // D flux applied to grad(phi_j), dotted with grad(phi_i)
                        let a = dflux[0][0] * g.grads[j][0] + dflux[0][1] * g.grads[j][1];
                        let b = dflux[1][0] * g.grads[j][0] + dflux[1][1] * g.grads[j][1];
                        let dot = a * g.grads[i][0] + b * g.grads[i][1];
                        let mass = qp.basis[i] * qp.basis[j];
                        band.add(
                            g.nodes[i],
                            g.nodes[j],
                            qp.weight * (dot - dreaction * mass),
                        );
                    }
                }
            }
        }
        if self.mode == BoundaryMode::FluxBoundary {
            for fi in 0..mesh.boundary.len() {
                let fg = mesh.facet_geometry(fi);
                for qp in &fg.quad[..fg.nquad] {
                    let mut sq = 0.0;
                    let mut tq = 0.0;
                    for k in 0..fg.nnodes {
                        sq += u[fg.nodes[k]] * qp.basis[k];
                        tq += v[fg.nodes[k]] * qp.basis[k];
                    }
                    let dboundary = match eq {
                        Equation::First => self.spec.boundary1.deriv_s(sq, tq),
                        Equation::Second => self.spec.boundary2.deriv_t(sq, tq),
                    };
                    for i in 0..fg.nnodes {
                        for j in 0..fg.nnodes {
                            band.add(
                                fg.nodes[i],
                                fg.nodes[j],
                                -qp.weight * dboundary * qp.basis[i] * qp.basis[j],
                            );
                        }
                    }
                }
            }
        } else {
            for i in 0..mesh.vertex_count() {
                if mesh.is_boundary_vertex(i) {
                    band.clear_row(i);
                    band.add(i, i, 1.0);
                }
            }
        }
        band
    }

    /// Damped Newton on one equation with the other unknown frozen.
    fn newton(
        &self,
        eq: Equation,
        unknown: &mut Vec<f64>,
        other: &[f64],
        gu_from: &[f64],
        gv_from: &[f64],
        config: &SolveConfig,
    ) -> Result<(), SolveError> {
        let n = unknown.len();
        for _ in 0..config.newton_max {
            let (u, v): (&[f64], &[f64]) = match eq {
                Equation::First => (unknown, other),
                Equation::Second => (other, unknown),
            };
            let residual = self.residual(eq, u, v, gu_from, gv_from);
            let r0_inf = inf_norm(&residual);
            if r0_inf <= config.newton_tol {
                return Ok(());
            }
            let r0 = l2_norm(&residual);
            let band = self.jacobian(eq, u, v, gu_from, gv_from);
            let mut delta = residual;
            for d in delta.iter_mut() {
                *d = -*d;
            }
            band.solve(&mut delta)?;

            // backtracking on the residual norm
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda >= 1e-12 {
                let mut trial = unknown.clone();
                for i in 0..n {
                    trial[i] += lambda * delta[i];
                }
                let (tu, tv): (&[f64], &[f64]) = match eq {
                    Equation::First => (&trial, other),
                    Equation::Second => (other, &trial),
                };
                let r1 = l2_norm(&self.residual(eq, tu, tv, gu_from, gv_from));
                if r1 < r0 {
                    *unknown = trial;
                    accepted = true;
                    break;
                }
                lambda *= config.damping;
            }
            if !accepted {
                // stalled line search; leave it to the outer sweeps
                return Ok(());
            }
        }
        Ok(())
    }
}

fn cell_gradient(g: &crate::mesh::CellGeometry, values: &[f64]) -> [f64; 2] {
    let mut grad = [0.0; 2];
    for k in 0..g.nnodes {
        grad[0] += values[g.nodes[k]] * g.grads[k][0];
        grad[1] += values[g.nodes[k]] * g.grads[k][1];
    }
    grad
}

/// Banded matrix with symmetric band structure, row-major storage.
struct Band {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, bw: usize) -> Band {
        Band {
            n,
            bw,
            data: alloc::vec![0.0; n * (2 * bw + 1)],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.bw + 1) + (j + self.bw - i)
    }

    fn add(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.idx(i, j);
        self.data[idx] += value;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.idx(i, j);
        self.data[idx] = value;
    }

    fn clear_row(&mut self, i: usize) {
        let w = 2 * self.bw + 1;
        for k in 0..w {
            self.data[i * w + k] = 0.0;
        }
    }

    /// LU factorization without pivoting and solve, in place.
    fn solve(mut self, rhs: &mut [f64]) -> Result<(), SolveError> {
        let n = self.n;
        let bw = self.bw;
        let mut max_diag = 0.0_f64;
        for i in 0..n {
            max_diag = fmax(max_diag, abs(self.get(i, i)));
        }
        let tol = max_diag * 1e-14 + f64::MIN_POSITIVE;
        for k in 0..n {
            let piv = self.get(k, k);
            if abs(piv) < tol {
                return Err(SolveError::SingularJacobian);
            }
            let upper = (k + bw).min(n - 1);
            for i in (k + 1)..=upper {
                let f = self.get(i, k) / piv;
                if f != 0.0 {
                    for j in k..=((k + bw).min(n - 1)) {
                        let val = self.get(k, j);
                        if val != 0.0 {
                            let cur = self.get(i, j);
                            self.set(i, j, cur - f * val);
                        }
                    }
                    rhs[i] -= f * rhs[k];
                }
            }
        }
        for k in (0..n).rev() {
            let mut sum = rhs[k];
            let upper = (k + bw).min(n - 1);
            for j in (k + 1)..=upper {
                sum -= self.get(k, j) * rhs[j];
            }
            rhs[k] = sum / self.get(k, k);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{
        BoundarySpec, EnvelopeConstants, LeadingFlux, ReactionSpec, SourceField,
    };
    use crate::exponents::SystemExponents;
    use crate::field::l2_error;
    use crate::presets::manufactured;

    fn trivial_spec() -> StructureSpec {
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
            envelopes: EnvelopeConstants::zero(),
            exponents: SystemExponents::zero_growth(2.0, 2.0, 3),
        }
    }

    #[test]
    fn zero_data_zero_fields_zero_residual() {
        let mesh = Arc::new(Mesh::rectangle(0.0, 1.0, 0.0, 1.0, 4, 4));
        let spec = trivial_spec();
        let u = Field::zeros(mesh.clone());
        let v = Field::zeros(mesh);
        let config = SolveConfig::default();
        let r = assemble_residual(&spec, &u, &v, &config, Equation::First).unwrap();
        assert!(r.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn band_solver_reproduces_dense_solution() {
        let n = 12;
        let mut band = Band::new(n, 2);
        // diagonally dominant test matrix
        for i in 0..n {
            band.add(i, i, 4.0 + i as f64 * 0.1);
            if i + 1 < n {
                band.add(i, i + 1, -1.0);
                band.add(i + 1, i, -1.3);
            }
            if i + 2 < n {
                band.add(i, i + 2, 0.5);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut rhs = alloc::vec![0.0; n];
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 3).min(n) {
                rhs[i] += band.get(i, j) * x_true[j];
            }
        }
        band.solve(&mut rhs).unwrap();
        for i in 0..n {
            assert!((rhs[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_jacobian_is_detected() {
        // pure Neumann Laplacian without reaction has a constant null space;
        // a nonzero source forces a Newton step against the singular matrix
        let mesh = Arc::new(Mesh::interval(0.0, 1.0, 8));
        let mut spec = trivial_spec();
        spec.reaction1.source = SourceField::Constant(1.0);
        let config = SolveConfig::default();
        let result = solve(&mesh, &spec, &config, None);
        assert_eq!(result.unwrap_err(), SolveError::SingularJacobian);
    }

    #[test]
    fn missing_regularization_is_rejected() {
        let mesh = Arc::new(Mesh::interval(0.0, 1.0, 8));
        let mut spec = trivial_spec();
        spec.flux1.exponent = 3.0;
        let config = SolveConfig::default();
        assert_eq!(
            solve(&mesh, &spec, &config, None).unwrap_err(),
            SolveError::MissingRegularization
        );
    }

    #[test]
    fn decoupled_residual_ignores_other_field() {
        let problem = manufactured("decoupled").unwrap();
        let mesh = Arc::new(problem.mesh(16));
        let config = SolveConfig::default();
        let u = Field::from_fn(mesh.clone(), |x| x[0] * 0.3 + 0.1);
        let v1 = Field::zeros(mesh.clone());
        let v2 = Field::from_fn(mesh.clone(), |x| (x[0] * 9.0).sin());
        let r1 = assemble_residual(&problem.spec, &u, &v1, &config, Equation::First).unwrap();
        let r2 = assemble_residual(&problem.spec, &u, &v2, &config, Equation::First).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn interpolated_exact_solution_has_small_residual() {
        // residual of the interpolant shrinks with the mesh
        let problem = manufactured("linear-1d").unwrap();
        let config = SolveConfig::default();
        let mut norms = alloc::vec::Vec::new();
        for n in [16usize, 32, 64] {
            let mesh = Arc::new(problem.mesh(n));
            let u = Field::from_fn(mesh.clone(), |x| (problem.exact_u.value)(x));
            let v = Field::from_fn(mesh.clone(), |x| (problem.exact_v.value)(x));
            let r = assemble_residual(&problem.spec, &u, &v, &config, Equation::First).unwrap();
            norms.push(inf_norm(&r));
        }
        assert!(norms[1] < 0.6 * norms[0]);
        assert!(norms[2] < 0.6 * norms[1]);
    }

    #[test]
    fn linear_preset_converges_to_exact_solution() {
        let problem = manufactured("linear-1d").unwrap();
        let mesh = Arc::new(problem.mesh(64));
        let config = SolveConfig::default();
        let pair = solve(&mesh, &problem.spec, &config, None).unwrap();
        assert!(pair.converged, "outer iterations: {}", pair.outer_iterations);
        assert!(pair.residual_u <= config.newton_tol);
        assert!(pair.residual_v <= config.newton_tol);
        let err = l2_error(&pair.u, |x| (problem.exact_u.value)(x));
        assert!(err < 2e-4, "L2 error {err}");
    }

    #[test]
    fn decoupled_matches_single_equation_solves() {
        let problem = manufactured("decoupled").unwrap();
        let mesh = Arc::new(problem.mesh(32));
        let config = SolveConfig::default();
        let pair = solve(&mesh, &problem.spec, &config, None).unwrap();
        assert!(pair.converged);

        // solving with the other equation's unknown pinned to an unrelated
        // value must give the same u
        let seeded = SolutionPair {
            u: Field::zeros(mesh.clone()),
            v: Field::from_fn(mesh.clone(), |x| 5.0 * x[0]),
            residual_u: 0.0,
            residual_v: 0.0,
            outer_iterations: 0,
            converged: true,
        };
        let pair2 = solve(&mesh, &problem.spec, &config, Some(&seeded)).unwrap();
        for (a, b) in pair.u.values().iter().zip(pair2.u.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn dirichlet_mode_zeroes_boundary_and_converges() {
        let problem = manufactured("linear-1d").unwrap();
        let mesh = Arc::new(problem.mesh(64));
        let config = SolveConfig {
            mode: BoundaryMode::Dirichlet,
            ..SolveConfig::default()
        };
        let pair = solve(&mesh, &problem.spec, &config, None).unwrap();
        assert!(pair.converged);
        assert_eq!(pair.u.values()[0], 0.0);
        assert_eq!(*pair.u.values().last().unwrap(), 0.0);
        // the exact pair vanishes on the boundary, so it is still the limit
        let err = l2_error(&pair.u, |x| (problem.exact_u.value)(x));
        assert!(err < 2e-4, "L2 error {err}");
    }

    #[test]
    fn exhausted_caps_return_unconverged() {
        let problem = manufactured("linear-1d").unwrap();
        let mesh = Arc::new(problem.mesh(32));
        let config = SolveConfig {
            picard_max: 1,
            picard_tol: 1e-14,
            ..SolveConfig::default()
        };
        let pair = solve(&mesh, &problem.spec, &config, None).unwrap();
        assert!(!pair.converged);
        assert_eq!(pair.outer_iterations, 1);
    }

    #[test]
    fn swap_symmetry_of_the_alternating_solver() {
        let problem = manufactured("linear-1d").unwrap();
        let mesh = Arc::new(problem.mesh(48));
        // both runs must land within 1e-10 of the common discrete solution,
        // which needs inner and outer tolerances well below that
        let config = SolveConfig {
            newton_tol: 1e-13,
            picard_tol: 5e-13,
            ..SolveConfig::default()
        };
        let pair = solve(&mesh, &problem.spec, &config, None).unwrap();
        let swapped = problem.spec.swapped();
        let pair_sw = solve(&mesh, &swapped, &config, None).unwrap();
        assert!(pair.converged && pair_sw.converged);
        for i in 0..mesh.vertex_count() {
            assert!((pair.u.values()[i] - pair_sw.v.values()[i]).abs() < 1e-10);
            assert!((pair.v.values()[i] - pair_sw.u.values()[i]).abs() < 1e-10);
        }
    }
}
