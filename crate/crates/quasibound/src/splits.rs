//! Hölder splittings of the mixed reaction and boundary terms, and the
//! geometric exponent schedules driving the norm ladders.

use alloc::vec::Vec;

use crate::conditions::check_strict;
use crate::exponents::{critical_set, ExponentError, SystemExponents};
use crate::fmath::powf;

/// The Hölder exponent bundle derived from an admissible exponent set.
///
/// Quantities keep their customary names: `s1`, `s2`, `t1` are the single
/// mixed-factor exponents, `(x1, y1, z1)` the three-factor split of the
/// interior product term, `(x2, y2, z2)` its gradient analogue and
/// `(x3, y3, z3)` the boundary product split. `s` and `t` are the working
/// interior and boundary exponents: the maxima of the conjugates and
/// z-values that are present.
///
/// A term whose growth exponent is zero imposes no integrability constraint;
/// its entries are `None` and the governing condition id is recorded in
/// `omitted_terms`. If every interior (resp. boundary) term is omitted, `s`
/// (resp. `t`) defaults to the midpoint of its admissible open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderSplit {
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub t1: Option<f64>,
    pub x1: Option<f64>,
    pub y1: Option<f64>,
    pub z1: Option<f64>,
    pub x2: Option<f64>,
    pub y2: Option<f64>,
    pub z2: Option<f64>,
    pub x3: Option<f64>,
    pub y3: Option<f64>,
    pub z3: Option<f64>,
    /// Working interior exponent, in `(1, p*/p)`.
    pub s: f64,
    /// Working boundary exponent, in `(1, p_lower/p)`.
    pub t: f64,
    /// Condition ids of the terms dropped because their exponent was zero.
    pub omitted_terms: Vec<&'static str>,
}

/// Hölder conjugate `x / (x - 1)` of an exponent `x > 1`.
fn conjugate(x: f64) -> f64 {
    x / (x - 1.0)
}

/// The z-exponent of a three-factor split: `1/z = 1 - 1/x - 1/y` where the
/// slots of zero-power factors are absent.
fn z_value(x: Option<f64>, y: Option<f64>) -> f64 {
    let used = x.map_or(0.0, |v| 1.0 / v) + y.map_or(0.0, |v| 1.0 / v);
    1.0 / (1.0 - used)
}

/// Derives the Hölder split of a strictly admissible exponent set.
///
/// Errors with [`ExponentError::NotAdmissible`] when the strict condition
/// table does not hold.
pub fn holder_split(exps: &SystemExponents) -> Result<HolderSplit, ExponentError> {
    let report = check_strict(exps)?;
    if !report.overall {
        return Err(ExponentError::NotAdmissible);
    }
    let (ps, pl, qs, ql) = critical_set(exps)?.finite();
    let (p, q) = (exps.p, exps.q);

    let mut omitted = Vec::new();

    let s1 = if exps.b[1] > 0.0 {
        Some(qs / exps.b[1])
    } else {
        omitted.push("E4");
        None
    };
    let s2 = if exps.b[5] > 0.0 {
        Some(q / exps.b[5])
    } else {
        omitted.push("E7");
        None
    };
    let t1 = if exps.c[1] > 0.0 {
        Some(ql / exps.c[1])
    } else {
        omitted.push("E16");
        None
    };

    let x1 = (exps.b[2] > 0.0).then(|| ps / exps.b[2]);
    let y1 = (exps.b[3] > 0.0).then(|| qs / exps.b[3]);
    let z1 = if x1.is_some() || y1.is_some() {
        Some(z_value(x1, y1))
    } else {
        omitted.push("E5");
        None
    };

    let x2 = (exps.b[6] > 0.0).then(|| p / exps.b[6]);
    let y2 = (exps.b[7] > 0.0).then(|| q / exps.b[7]);
    let z2 = if x2.is_some() || y2.is_some() {
        Some(z_value(x2, y2))
    } else {
        omitted.push("E8");
        None
    };

    let x3 = (exps.c[2] > 0.0).then(|| pl / exps.c[2]);
    let y3 = (exps.c[3] > 0.0).then(|| ql / exps.c[3]);
    let z3 = if x3.is_some() || y3.is_some() {
        Some(z_value(x3, y3))
    } else {
        omitted.push("E17");
        None
    };

    let max_of = |candidates: &[Option<f64>]| -> Option<f64> {
        candidates
            .iter()
            .flatten()
            .copied()
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| if v > a { v } else { a }))
            })
    };

    let s = max_of(&[s1.map(conjugate), s2.map(conjugate), z1, z2])
        .unwrap_or_else(|| 0.5 * (1.0 + ps / p));
    let t = max_of(&[t1.map(conjugate), z3]).unwrap_or_else(|| 0.5 * (1.0 + pl / p));

    Ok(HolderSplit {
        s1,
        s2,
        t1,
        x1,
        y1,
        z1,
        x2,
        y2,
        z2,
        x3,
        y3,
        z3,
        s,
        t,
        omitted_terms: omitted,
    })
}

/// Which norm ladder a schedule drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    /// Interior bootstrap: ratio `p* / (p s)`, ladder exponents against `p*`.
    Interior,
    /// Boundary bootstrap: ratio `p_lower / (p t)`, exponents against `p_lower`.
    Boundary,
    /// Final uniform-bound bootstrap: ratio `p* / p1` for a chosen
    /// `p1` in `(p s, p*)`.
    LInfty,
}

/// A geometric bootstrap schedule: `kappa_n + 1 = (kappa_0 + 1) ratio^n`
/// for `n = 1..n_max`, with ladder exponents `alpha_n = (kappa_n + 1) base`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationSchedule {
    pub mode: ScheduleMode,
    pub kappas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub base: f64,
    pub ratio: f64,
}

/// Builds the bootstrap schedule for the requested mode.
///
/// For [`ScheduleMode::LInfty`] the intermediate exponent `p1` must lie in
/// `(p s, p*)`; when `None` it defaults to the midpoint of that interval.
pub fn schedule(
    mode: ScheduleMode,
    exps: &SystemExponents,
    split: &HolderSplit,
    kappa0: f64,
    n_max: usize,
    p1: Option<f64>,
) -> Result<IterationSchedule, ExponentError> {
    if !(kappa0 >= 0.0) {
        return Err(ExponentError::Invalid("kappa0 must be nonnegative"));
    }
    if n_max == 0 {
        return Err(ExponentError::Invalid("n_max must be at least 1"));
    }
    let (ps, pl, _, _) = critical_set(exps)?.finite();
    let p = exps.p;
    let (ratio, base) = match mode {
        ScheduleMode::Interior => (ps / (p * split.s), ps),
        ScheduleMode::Boundary => (pl / (p * split.t), pl),
        ScheduleMode::LInfty => {
            let lo = p * split.s;
            let p1 = p1.unwrap_or(0.5 * (lo + ps));
            if !(p1 > lo && p1 < ps) {
                return Err(ExponentError::NotAdmissible);
            }
            (ps / p1, ps)
        }
    };
    if !(ratio > 1.0) {
        return Err(ExponentError::NotAdmissible);
    }
    let mut kappas = Vec::with_capacity(n_max);
    let mut alphas = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let kp1 = (kappa0 + 1.0) * powf(ratio, n as f64);
        kappas.push(kp1 - 1.0);
        alphas.push(kp1 * base);
    }
    Ok(IterationSchedule {
        mode,
        kappas,
        alphas,
        base,
        ratio,
    })
}
