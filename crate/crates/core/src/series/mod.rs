//! Theta-type series for the height and diameter laws under the normalised
//! excursion measure.
//!
//! Every law is available in two forms. The *direct* form sums terms
//! `P(n) e^{-c n² y²}` and converges fast for large arguments; the
//! *theta-dual* form, obtained from the direct one through Jacobi's theta
//! identity, sums terms `P(n) e^{-c n² / y²}` and converges fast for small
//! arguments. Both forms carry an explicit tail majorant, so every
//! [`SeriesEval`] reports a certified truncation bound.

mod jacobi;
mod joint;
mod marginal;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use jacobi::{jacobi_check, JacobiCheck};
pub use joint::{joint_cdf, joint_survival, joint_union_cdf};
pub use marginal::{
    density_diam, density_height, density_szekeres, marginal_diam_cdf, marginal_diam_sf,
    marginal_height_cdf, marginal_height_sf, DIAM_SWITCH, HEIGHT_SWITCH,
};

/// Which of the two dual representations to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMode {
    Direct,
    ThetaDual,
    /// Pick the representation whose leading exponent decays faster.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Direct,
    ThetaDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub mode: SeriesMode,
    /// Absolute tolerance on the omitted tail.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            mode: SeriesMode::Auto,
            tol: 1e-13,
            max_terms: 10_000,
        }
    }
}

impl SeriesSpec {
    pub fn new(mode: SeriesMode, tol: f64, max_terms: usize) -> Result<Self> {
        let spec = Self {
            mode,
            tol,
            max_terms,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_mode(self, mode: SeriesMode) -> Self {
        Self { mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::InvalidArgument(
                "max_terms must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Result of summing one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub value: f64,
    pub representation: Representation,
    pub terms_used: usize,
    /// Upper bound on `|true value - value|`: the tail majorant plus a
    /// floating-point rounding estimate.
    pub trunc_bound: f64,
}

impl SeriesEval {
    /// `1 - self`, for turning a cdf into an sf and back.
    pub(crate) fn complement(self) -> Self {
        Self {
            value: 1.0 - self.value,
            trunc_bound: self.trunc_bound + f64::EPSILON,
            ..self
        }
    }

    pub(crate) fn exact(value: f64, representation: Representation, trunc_bound: f64) -> Self {
        Self {
            value,
            representation,
            terms_used: 0,
            trunc_bound,
        }
    }
}

/// The argument pair `(y, z)` of the joint law with its derived quantities.
///
/// `rho = max(z, y/2)`, `delta = clamp(2(y - z)/y, 0, 1)` and
/// `q = min(y, 2y - z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointArgs {
    pub y: f64,
    pub z: f64,
    pub rho: f64,
    pub delta: f64,
    pub q: f64,
}

impl JointArgs {
    pub fn new(y: f64, z: f64) -> Result<Self> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(domain(format!(
                "diameter threshold y must be positive and finite, got {y}"
            )));
        }
        if !(z >= 0.0 && z.is_finite()) {
            return Err(domain(format!(
                "height threshold z must be nonnegative and finite, got {z}"
            )));
        }
        let rho = z.max(0.5 * y);
        let delta = (2.0 * (y - z) / y).clamp(0.0, 1.0);
        let q = y.min(2.0 * y - z);
        Ok(Self {
            y,
            z,
            rho,
            delta,
            q,
        })
    }
}

/// Exponent coefficients `a = 4(πn/y)²` and `b = 8(πn/y)² = 2a` of the
/// theta-dual diameter series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaCoeff {
    pub n: u64,
    pub a: f64,
    pub b: f64,
}

impl ThetaCoeff {
    pub fn new(n: u64, y: f64) -> Self {
        let r = std::f64::consts::PI * n as f64 / y;
        let a = 4.0 * r * r;
        Self { n, a, b: 2.0 * a }
    }
}

pub(crate) fn check_positive(name: &str, y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be positive and finite, got {y}"
        )))
    }
}

/// `poly(k) * exp(-rate * (k - shift)²)` bounds `|T_k|` for every `k` past
/// the shift; `poly` has nonnegative coefficients (lowest degree first).
#[derive(Debug, Clone)]
pub(crate) struct Majorant {
    pub coeffs: Vec<f64>,
    pub rate: f64,
    pub shift: f64,
}

impl Majorant {
    pub fn new(coeffs: Vec<f64>, rate: f64, shift: f64) -> Self {
        debug_assert!(coeffs.iter().all(|c| *c >= 0.0));
        Self {
            coeffs,
            rate,
            shift,
        }
    }

    fn poly(&self, k: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * k + c)
    }

    fn degree(&self) -> i32 {
        self.coeffs.len().saturating_sub(1) as i32
    }

    /// Value of the majorant at `k`, clamping the shifted argument at zero.
    fn magnitude(&self, k: u64) -> f64 {
        let m = (k as f64 - self.shift).max(0.0);
        self.poly(k as f64) * (-self.rate * m * m).exp()
    }

    /// Bound on `Σ_{k ≥ n} |T_k|`. The term ratio of the majorant is at most
    /// `(1 + 1/k)^deg e^{-rate (2(k - shift) + 1)}`, which decreases in `k`,
    /// so once it drops below one the tail is dominated by a geometric
    /// series.
    pub fn tail(&self, n: u64) -> f64 {
        if self.coeffs.iter().all(|c| *c == 0.0) {
            return 0.0;
        }
        let k = n as f64;
        let m = k - self.shift;
        if m <= 0.0 {
            return f64::INFINITY;
        }
        let decay = (-self.rate * m * m).exp();
        if decay == 0.0 {
            return 0.0;
        }
        let ratio = (1.0 + 1.0 / k).powi(self.degree()) * (-self.rate * (2.0 * m + 1.0)).exp();
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        self.poly(k) * decay / (1.0 - ratio)
    }
}

/// Sum `Σ_{n ≥ first} term(n)` until the summed majorant tails fall below
/// `spec.tol`.
pub(crate) fn sum_series<F>(
    first: u64,
    spec: &SeriesSpec,
    representation: Representation,
    majorants: &[Majorant],
    term: F,
) -> Result<SeriesEval>
where
    F: Fn(u64) -> f64,
{
    let tail = |n: u64| majorants.iter().map(|m| m.tail(n)).sum::<f64>();
    let max_rate = majorants.iter().map(|m| m.rate).fold(0.0, f64::max);
    // Neumaier-compensated running sum.
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut rounding = 0.0_f64;
    let mut n = first;
    let mut used = 0;
    loop {
        if used >= spec.max_terms {
            return Err(Error::NonConvergence {
                tol: spec.tol,
                max_terms: spec.max_terms,
                bound: tail(n),
            });
        }
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonConvergence {
                tol: spec.tol,
                max_terms: used,
                bound: f64::INFINITY,
            });
        }
        let s = sum + t;
        comp += if sum.abs() >= t.abs() {
            (sum - s) + t
        } else {
            (t - s) + sum
        };
        sum = s;
        // exp(-x) inherits a relative error of order x·ε from rounding x.
        let nk = n as f64 + 1.0;
        let magnitude: f64 = majorants.iter().map(|m| m.magnitude(n)).sum();
        rounding += magnitude.max(t.abs()) * (4.0 * max_rate * nk * nk + 32.0);
        used += 1;
        n += 1;
        let rest = tail(n);
        if rest <= spec.tol {
            let value = sum + comp;
            let bound = rest + f64::EPSILON * (rounding + 4.0 * value.abs()) + f64::MIN_POSITIVE;
            return Ok(SeriesEval {
                value,
                representation,
                terms_used: used,
                trunc_bound: bound,
            });
        }
    }
}
