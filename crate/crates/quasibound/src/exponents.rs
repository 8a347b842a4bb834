//! Critical Sobolev and trace exponents and the exponent data attached to a
//! coupled system: the leading powers `p`, `q`, the space dimension `N`, and
//! the growth exponents of the reaction and boundary envelopes.

use core::fmt;

/// A Lebesgue exponent that is either a finite real `> 1` or unbounded.
///
/// The unbounded value arises from the `r >= N` branch of the critical
/// exponent formulas, where every finite exponent in `(1, inf)` is admissible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedExponent {
    Finite(f64),
    Unbounded,
}

impl ExtendedExponent {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedExponent::Finite(_))
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedExponent::Finite(v) => Some(*v),
            ExtendedExponent::Unbounded => None,
        }
    }

    /// The finite value; panics on `Unbounded`. Use only after override
    /// resolution through [`critical_set`].
    pub fn expect_finite(&self) -> f64 {
        self.finite().expect("unbounded critical exponent")
    }
}

impl fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedExponent::Finite(v) => write!(f, "{v}"),
            ExtendedExponent::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Interior critical exponent: `N r / (N - r)` for `r < N`, unbounded otherwise.
pub fn critical_sobolev(r: f64, n: u32) -> ExtendedExponent {
    assert!(r > 1.0, "exponent must exceed 1");
    assert!(n >= 2, "dimension must be at least 2");
    let nf = f64::from(n);
    if r < nf {
        ExtendedExponent::Finite(nf * r / (nf - r))
    } else {
        ExtendedExponent::Unbounded
    }
}

/// Boundary (trace) critical exponent: `(N - 1) r / (N - r)` for `r < N`,
/// unbounded otherwise.
pub fn critical_trace(r: f64, n: u32) -> ExtendedExponent {
    assert!(r > 1.0, "exponent must exceed 1");
    assert!(n >= 2, "dimension must be at least 2");
    let nf = f64::from(n);
    if r < nf {
        ExtendedExponent::Finite((nf - 1.0) * r / (nf - r))
    } else {
        ExtendedExponent::Unbounded
    }
}

/// All growth exponents of a coupled system.
///
/// `b` and `tb` are the eight reaction envelope exponents of the first and
/// second equation, `c` and `tc` the four boundary envelope exponents, `r1`
/// and `r2` the coercivity exponents. When `p >= N` or `q >= N` the critical
/// exponents are unbounded; a finite working exponent must then be supplied
/// explicitly through `working_exponent_override` so that reports stay
/// reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemExponents {
    pub p: f64,
    pub q: f64,
    pub n: u32,
    pub r1: f64,
    pub r2: f64,
    pub b: [f64; 8],
    pub tb: [f64; 8],
    pub c: [f64; 4],
    pub tc: [f64; 4],
    pub working_exponent_override: Option<f64>,
}

impl SystemExponents {
    /// A system with the given `p`, `q`, `N` and all growth exponents zero.
    pub fn zero_growth(p: f64, q: f64, n: u32) -> Self {
        SystemExponents {
            p,
            q,
            n,
            r1: 0.0,
            r2: 0.0,
            b: [0.0; 8],
            tb: [0.0; 8],
            c: [0.0; 4],
            tc: [0.0; 4],
            working_exponent_override: None,
        }
    }

    /// Checks the basic domain restrictions: `p, q > 1`, `N >= 2`, all growth
    /// exponents nonnegative, and the override (if present) finite and `> 1`.
    pub fn validate(&self) -> Result<(), ExponentError> {
        if !(self.p > 1.0 && self.p.is_finite()) || !(self.q > 1.0 && self.q.is_finite()) {
            return Err(ExponentError::Invalid("p and q must be finite and > 1"));
        }
        if self.n < 2 {
            return Err(ExponentError::Invalid("N must be at least 2"));
        }
        let nonneg = |v: f64| v >= 0.0 && v.is_finite();
        if !nonneg(self.r1) || !nonneg(self.r2) {
            return Err(ExponentError::Invalid("r1, r2 must be nonnegative"));
        }
        if !self.b.iter().chain(&self.tb).all(|&v| nonneg(v)) {
            return Err(ExponentError::Invalid("b, tb must be nonnegative"));
        }
        if !self.c.iter().chain(&self.tc).all(|&v| nonneg(v)) {
            return Err(ExponentError::Invalid("c, tc must be nonnegative"));
        }
        if let Some(w) = self.working_exponent_override {
            if !(w > 1.0 && w.is_finite()) {
                return Err(ExponentError::Invalid(
                    "working exponent override must be finite and > 1",
                ));
            }
        }
        Ok(())
    }

    /// The same system with the roles of the two equations exchanged:
    /// `p <-> q`, `r1 <-> r2`, and the envelope exponents remapped so that
    /// each factor keeps its meaning (`|s|` powers become `|t|` powers and
    /// vice versa, gradients likewise).
    pub fn swapped(&self) -> Self {
        let sw8 = |a: &[f64; 8]| [a[1], a[0], a[3], a[2], a[5], a[4], a[7], a[6]];
        let sw4 = |a: &[f64; 4]| [a[1], a[0], a[3], a[2]];
        SystemExponents {
            p: self.q,
            q: self.p,
            n: self.n,
            r1: self.r2,
            r2: self.r1,
            b: sw8(&self.tb),
            tb: sw8(&self.b),
            c: sw4(&self.tc),
            tc: sw4(&self.c),
            working_exponent_override: self.working_exponent_override,
        }
    }
}

/// The four critical exponents of a system, with unbounded entries replaced
/// by the working exponent override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSet {
    /// Interior critical exponent for `p`.
    pub p_star: ExtendedExponent,
    /// Boundary critical exponent for `p`.
    pub p_lower: ExtendedExponent,
    /// Interior critical exponent for `q`.
    pub q_star: ExtendedExponent,
    /// Boundary critical exponent for `q`.
    pub q_lower: ExtendedExponent,
}

impl CriticalSet {
    /// The four values as finite reals. [`critical_set`] only returns sets
    /// where every entry is finite, so this cannot panic on its results.
    pub fn finite(&self) -> (f64, f64, f64, f64) {
        (
            self.p_star.expect_finite(),
            self.p_lower.expect_finite(),
            self.q_star.expect_finite(),
            self.q_lower.expect_finite(),
        )
    }
}

/// Errors from exponent algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentError {
    /// `p >= N` or `q >= N` without a working exponent override.
    MissingOverride,
    /// Domain restrictions on the exponent data violated.
    Invalid(&'static str),
    /// An operation required the strict admissibility conditions to hold.
    NotAdmissible,
}

impl fmt::Display for ExponentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentError::MissingOverride => write!(
                f,
                "p >= N or q >= N: a finite working_exponent_override is required"
            ),
            ExponentError::Invalid(msg) => write!(f, "invalid exponents: {msg}"),
            ExponentError::NotAdmissible => {
                write!(f, "exponents do not satisfy the strict admissibility conditions")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ExponentError {}

/// Bundles the four critical exponents of a system. Entries that the
/// formulas leave unbounded are substituted by the working exponent
/// override; if none is present this is an error.
pub fn critical_set(exps: &SystemExponents) -> Result<CriticalSet, ExponentError> {
    exps.validate()?;
    let resolve = |e: ExtendedExponent| match e {
        ExtendedExponent::Finite(_) => Ok(e),
        ExtendedExponent::Unbounded => exps
            .working_exponent_override
            .map(ExtendedExponent::Finite)
            .ok_or(ExponentError::MissingOverride),
    };
    Ok(CriticalSet {
        p_star: resolve(critical_sobolev(exps.p, exps.n))?,
        p_lower: resolve(critical_trace(exps.p, exps.n))?,
        q_star: resolve(critical_sobolev(exps.q, exps.n))?,
        q_lower: resolve(critical_trace(exps.q, exps.n))?,
    })
}
