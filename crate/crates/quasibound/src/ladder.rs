//! Numerical replay of the iteration apparatus on discrete fields: sign
//! splits, truncations, norm ladders along a bootstrap schedule, and the tail
//! functionals whose decay drives the absorption step.

use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;
use crate::fmath::{fmax, fmin, powf};
use crate::norms::{boundary_lr_norm, lr_norm};
use crate::splits::IterationSchedule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LadderError {
    /// An operation requiring a nonnegative field received negative values.
    NegativeInput,
}

impl fmt::Display for LadderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderError::NegativeInput => write!(f, "field must be nonnegative"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LadderError {}

/// Splits a field into its positive and negative parts: `u+ - u- = u` and
/// `u+ + u- = |u|` hold exactly at every node.
pub fn sign_split(u: &Field) -> (Field, Field) {
    let plus = u.values().iter().map(|&v| fmax(v, 0.0)).collect();
    let minus = u.values().iter().map(|&v| fmax(-v, 0.0)).collect();
    (
        Field::new(u.mesh().clone(), plus),
        Field::new(u.mesh().clone(), minus),
    )
}

/// Nodal truncation `min(u, h)` of a nonnegative field.
pub fn truncate(u: &Field, h: f64) -> Result<Field, LadderError> {
    if !(h >= 0.0) {
        return Err(LadderError::NegativeInput);
    }
    if u.values().iter().any(|&v| v < 0.0) {
        return Err(LadderError::NegativeInput);
    }
    let values = u.values().iter().map(|&v| fmin(v, h)).collect();
    Ok(Field::new(u.mesh().clone(), values))
}

/// Boundedness verdict of a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Growing,
}

/// One ladder rung: the interior and boundary norms at exponent `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderEntry {
    pub alpha: f64,
    pub interior: f64,
    pub boundary: f64,
}

/// Norms of a field along a bootstrap schedule.
///
/// On a finite mesh every field is bounded, so a normalized ladder always
/// earns the `Bounded` verdict; the informative quantities are the profile of
/// the entries and `sup_ratio_to_max`, how closely the ladder approaches the
/// nodal maximum. Raw (unnormalized) ladders may decrease with `alpha` on
/// domains of measure above one and carry no verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct NormLadder {
    pub entries: Vec<LadderEntry>,
    pub normalized: bool,
    pub verdict: Option<Verdict>,
    /// Largest normalized interior norm divided by the nodal maximum
    /// (1 for the zero field).
    pub sup_ratio_to_max: f64,
}

/// Slack of the boundedness verdict: a normalized ladder is `Bounded` when
/// every entry stays below `(1 + VERDICT_SLACK) * max`.
pub const VERDICT_SLACK: f64 = 1e-6;

/// Computes the interior and boundary norms of a nonnegative field at every
/// ladder exponent of the schedule.
pub fn ladder(u: &Field, sched: &IterationSchedule, normalized: bool) -> NormLadder {
    assert!(
        u.values().iter().all(|&v| v >= 0.0),
        "ladder requires a nonnegative field; apply sign_split first"
    );
    assert!(!sched.alphas.is_empty(), "schedule must be nonempty");
    let max = u.max_abs();
    let entries: Vec<LadderEntry> = sched
        .alphas
        .iter()
        .map(|&alpha| LadderEntry {
            alpha,
            interior: lr_norm(u, alpha, normalized),
            boundary: boundary_lr_norm(u, alpha, normalized),
        })
        .collect();
    let sup = entries.iter().fold(0.0_f64, |m, e| fmax(m, e.interior));
    let sup_ratio_to_max = if max == 0.0 { 1.0 } else { sup / max };
    let verdict = if normalized {
        if sup <= (1.0 + VERDICT_SLACK) * max {
            Some(Verdict::Bounded)
        } else {
            Some(Verdict::Growing)
        }
    } else {
        None
    };
    NormLadder {
        entries,
        normalized,
        verdict,
        sup_ratio_to_max,
    }
}

/// Tail functionals of the absorption step: with `a := u^(p* - p)` interior
/// and `b := u^(p_lower - p)` on the boundary,
/// `H(L) = (integral over {a > L} of a^(p*/(p*-p)))^((p*-p)/p*)` and
/// `K(G)` its boundary analogue, sampled at the given thresholds.
///
/// Both vanish exactly once the threshold passes the discrete maximum of the
/// respective weight and are nonincreasing in the threshold.
pub fn tail_functionals(
    u: &Field,
    p: f64,
    p_star: f64,
    p_lower: f64,
    thresholds: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    assert!(p < p_star, "p must be subcritical");
    assert!(p < p_lower, "p must be below the boundary critical exponent");
    assert!(
        u.values().iter().all(|&v| v >= 0.0),
        "tail functionals require a nonnegative field"
    );
    let mesh = u.mesh();
    let exp_a = p_star - p;
    let exp_b = p_lower - p;

    // interior quadrature samples of (a, u^{p*})
    let mut interior = Vec::new();
    for ci in 0..mesh.cells.len() {
        let g = mesh.cell_geometry(ci);
        for qp in &g.quad[..g.nquad] {
            let mut val = 0.0;
            for k in 0..g.nnodes {
                val += u.values()[g.nodes[k]] * qp.basis[k];
            }
            interior.push((powf(val, exp_a), qp.weight * powf(val, p_star)));
        }
    }
    let mut boundary = Vec::new();
    for fi in 0..mesh.boundary.len() {
        let fg = mesh.facet_geometry(fi);
        for qp in &fg.quad[..fg.nquad] {
            let mut val = 0.0;
            for k in 0..fg.nnodes {
                val += u.values()[fg.nodes[k]] * qp.basis[k];
            }
            boundary.push((powf(val, exp_b), qp.weight * powf(val, p_lower)));
        }
    }

    let h: Vec<f64> = thresholds
        .iter()
        .map(|&level| {
            let sum: f64 = interior
                .iter()
                .filter(|(a, _)| *a > level)
                .map(|(_, w)| w)
                .sum();
            powf(sum, exp_a / p_star)
        })
        .collect();
    let k: Vec<f64> = thresholds
        .iter()
        .map(|&level| {
            let sum: f64 = boundary
                .iter()
                .filter(|(b, _)| *b > level)
                .map(|(_, w)| w)
                .sum();
            powf(sum, exp_b / p_lower)
        })
        .collect();
    (h, k)
}
