//! Empirical boundedness certificate: for a solved pair, the ratio between
//! the full Sobolev-type norm of the truncated test products `u u_h^kappa`
//! and the lower-order norms that the iteration controls, across a grid of
//! powers and truncation levels, together with a power-law fit of the
//! constant's growth in `kappa + 1` and sampled tail functionals.

use alloc::vec::Vec;
use core::fmt;

use crate::exponents::{critical_set, ExponentError, SystemExponents};
use crate::field::Field;
use crate::fmath::{fmax, fmin, ln, powf};
use crate::ladder::{sign_split, tail_functionals};
use crate::norms::{boundary_lr_norm, lr_norm};
use crate::solve::SolutionPair;
use crate::splits::HolderSplit;

/// Certificate of one solved field.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub kappa_values: Vec<f64>,
    pub h_values: Vec<f64>,
    /// `R(kappa, h) = |w|_{1,p}^p / (|w|_{ps}^p + 1)` with `w = u u_h^kappa`,
    /// indexed `[kappa][h]`.
    pub interior_ratios: Vec<Vec<f64>>,
    /// Boundary analogue: `|w|_{1,p}^p / (|w|_{pt,boundary}^p + 1)`.
    pub boundary_ratios: Vec<Vec<f64>>,
    /// Slope of the least-squares fit of `ln sup_h R(kappa, .)` against
    /// `ln(kappa + 1)`; NaN when fewer than two usable rows exist.
    pub growth_fit: f64,
    /// Sampled interior tail functional `(L, H(L))`.
    pub tail_h: Vec<(f64, f64)>,
    /// Sampled boundary tail functional `(G, K(G))`.
    pub tail_k: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertifyError {
    /// The input pair did not converge.
    NotConverged,
    Exponent(ExponentError),
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::NotConverged => write!(f, "certificate requires a converged solution"),
            CertifyError::Exponent(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CertifyError {}

impl From<ExponentError> for CertifyError {
    fn from(e: ExponentError) -> Self {
        CertifyError::Exponent(e)
    }
}

/// Sobolev-type norm `|w|_{1,p} = |grad w|_p + |w|_p` of the test product
/// `w = u u_h^kappa`, with the gradient reconstructed cell-wise from the
/// product rule on the interpolants:
/// `grad w = u_h^kappa grad u + kappa u u_h^(kappa-1) grad u_h`.
fn test_product_h1p_norm(u: &Field, h: f64, kappa: f64, p: f64) -> f64 {
    let mesh = u.mesh();
    let uh: Vec<f64> = u.values().iter().map(|&v| fmin(v, h)).collect();

    // quadrature magnitudes of the reconstructed gradient
    let mut mags: Vec<(f64, f64)> = Vec::new();
    for ci in 0..mesh.cells.len() {
        let g = mesh.cell_geometry(ci);
        let mut grad_u = [0.0_f64; 2];
        let mut grad_uh = [0.0_f64; 2];
        for k in 0..g.nnodes {
            grad_u[0] += u.values()[g.nodes[k]] * g.grads[k][0];
            grad_u[1] += u.values()[g.nodes[k]] * g.grads[k][1];
            grad_uh[0] += uh[g.nodes[k]] * g.grads[k][0];
            grad_uh[1] += uh[g.nodes[k]] * g.grads[k][1];
        }
        for qp in &g.quad[..g.nquad] {
            let mut uq = 0.0;
            let mut uhq = 0.0;
            for k in 0..g.nnodes {
                uq += u.values()[g.nodes[k]] * qp.basis[k];
                uhq += uh[g.nodes[k]] * qp.basis[k];
            }
            let grad_w = if kappa == 0.0 {
                grad_u
            } else if uhq == 0.0 {
                // u and u_h vanish together at such a point (h > 0), and the
                // product w vanishes to order kappa + 1 there
                [0.0, 0.0]
            } else {
                let a = powf(uhq, kappa);
                let b = kappa * uq * powf(uhq, kappa - 1.0);
                [
                    a * grad_u[0] + b * grad_uh[0],
                    a * grad_u[1] + b * grad_uh[1],
                ]
            };
            let mag = crate::fmath::sqrt(grad_w[0] * grad_w[0] + grad_w[1] * grad_w[1]);
            mags.push((mag, qp.weight));
        }
    }
    let grad_norm = crate::norms::stable_power_mean(&mags, p);

    let w_field = test_product(u, h, kappa);
    grad_norm + lr_norm(&w_field, p, false)
}

/// Nodal test product `w_i = u_i min(u_i, h)^kappa`.
fn test_product(u: &Field, h: f64, kappa: f64) -> Field {
    let values = u
        .values()
        .iter()
        .map(|&v| v * powf(fmin(v, h), kappa))
        .collect();
    Field::new(u.mesh().clone(), values)
}

/// Builds the certificate for the first component of a converged pair. The
/// field is sign-split first and the certificate concerns its positive part;
/// certify the negative part or the second component by negating or swapping
/// beforehand.
pub fn certify(
    pair: &SolutionPair,
    exps: &SystemExponents,
    split: &HolderSplit,
    kappas: &[f64],
    h_values: &[f64],
) -> Result<CertificateReport, CertifyError> {
    if !pair.converged {
        return Err(CertifyError::NotConverged);
    }
    let crit = critical_set(exps)?;
    let (p_star, p_lower, _, _) = crit.finite();
    let p = exps.p;
    let ps = p * split.s;
    let pt = p * split.t;

    let (u_plus, _) = sign_split(&pair.u);

    let mut interior_ratios = Vec::with_capacity(kappas.len());
    let mut boundary_ratios = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let mut row_int = Vec::with_capacity(h_values.len());
        let mut row_bnd = Vec::with_capacity(h_values.len());
        for &h in h_values {
            let h1p = test_product_h1p_norm(&u_plus, h, kappa, p);
            let numerator = powf(h1p, p);
            let w_field = test_product(&u_plus, h, kappa);
            let denom_int = powf(lr_norm(&w_field, ps, false), p) + 1.0;
            let denom_bnd = powf(boundary_lr_norm(&w_field, pt, false), p) + 1.0;
            row_int.push(numerator / denom_int);
            row_bnd.push(numerator / denom_bnd);
        }
        interior_ratios.push(row_int);
        boundary_ratios.push(row_bnd);
    }

    let growth_fit = fit_power_law(kappas, &interior_ratios);

    // tails sampled on a fixed quantile grid of the weight maxima
    let a_max = powf(u_plus.max_abs(), p_star - p);
    let b_max = powf(u_plus.max_abs(), p_lower - p);
    let grid = |top: f64| -> Vec<f64> {
        if top <= 0.0 {
            alloc::vec![0.0, 1.0]
        } else {
            let mut levels: Vec<f64> = (0..=8).map(|j| top * j as f64 / 8.0).collect();
            levels.push(top * 1.01);
            levels
        }
    };
    let levels_h = grid(a_max);
    let levels_k = grid(b_max);
    let (h_vals, _) = tail_functionals(&u_plus, p, p_star, p_lower, &levels_h);
    let (_, k_vals) = tail_functionals(&u_plus, p, p_star, p_lower, &levels_k);
    let tail_h = levels_h.into_iter().zip(h_vals).collect();
    let tail_k = levels_k.into_iter().zip(k_vals).collect();

    Ok(CertificateReport {
        kappa_values: kappas.to_vec(),
        h_values: h_values.to_vec(),
        interior_ratios,
        boundary_ratios,
        growth_fit,
        tail_h,
        tail_k,
    })
}

/// Least-squares slope of `ln sup_h R` against `ln(kappa + 1)`.
fn fit_power_law(kappas: &[f64], ratios: &[Vec<f64>]) -> f64 {
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &kappa) in kappas.iter().enumerate() {
        let sup = ratios[i].iter().fold(0.0_f64, |m, &r| fmax(m, r));
        if sup > 0.0 && kappa + 1.0 > 0.0 {
            points.push((ln(kappa + 1.0), ln(sup)));
        }
    }
    if points.len() < 2 {
        return f64::NAN;
    }
    let n = points.len() as f64;
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in &points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return f64::NAN;
    }
    sxy / sxx
}
