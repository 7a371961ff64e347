//! One-dimensional laws of `Γ`, `D` and `Δ = √2 D` under the normalised
//! excursion measure.

use std::cell::Cell;
use std::f64::consts::SQRT_2;

use rand::distr::{Distribution, Open01};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::rng::replicate_rng;
use crate::quad::Quadrature;
use crate::series::{
    density_diam, density_height, density_szekeres, marginal_diam_cdf, marginal_diam_sf,
    marginal_height_cdf, marginal_height_sf, SeriesSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    HeightGamma,
    DiameterD,
    SzekeresDelta,
}

impl LawKind {
    pub fn name(self) -> &'static str {
        match self {
            LawKind::HeightGamma => "height",
            LawKind::DiameterD => "diameter",
            LawKind::SzekeresDelta => "szekeres",
        }
    }

    /// `sf(x) ≤ A x^p e^{-c x²}` beyond `x_tail`, from the leading direct term.
    fn tail_envelope(self) -> (f64, i32, f64) {
        match self {
            LawKind::HeightGamma => (4.0, 2, 1.0),
            LawKind::DiameterD => (8.0, 4, 1.0),
            LawKind::SzekeresDelta => (2.0, 4, 0.5),
        }
    }

    fn tail_start(self) -> f64 {
        match self {
            LawKind::HeightGamma => 8.0,
            LawKind::DiameterD => 12.0,
            LawKind::SzekeresDelta => 12.0 * SQRT_2,
        }
    }
}

impl std::str::FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "height" | "gamma" => Ok(LawKind::HeightGamma),
            "diameter" | "d" => Ok(LawKind::DiameterD),
            "szekeres" | "delta" => Ok(LawKind::SzekeresDelta),
            other => Err(Error::InvalidArgument(format!("unknown law '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileQuery {
    pub p: f64,
    pub tol_x: f64,
}

impl QuantileQuery {
    pub fn new(p: f64) -> Result<Self> {
        Self::with_tol(p, 1e-10)
    }

    pub fn with_tol(p: f64, tol_x: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "p must lie in (0, 1), got {p}"
            )));
        }
        if !(tol_x > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tol_x must be positive, got {tol_x}"
            )));
        }
        Ok(Self { p, tol_x })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub order: u32,
    pub value: f64,
    pub abs_err: f64,
}

const BRACKET: (f64, f64) = (1e-6, 64.0);
const KNOTS: usize = 1024;

/// Monotone table of `(x, cdf(x))` used to bracket and seed inversions.
#[derive(Debug, Clone)]
struct InverseTable {
    xs: Vec<f64>,
    ps: Vec<f64>,
}

/// A queryable law. Immutable after construction; all queries are
/// thread-safe.
#[derive(Debug, Clone)]
pub struct DistLaw {
    kind: LawKind,
    spec: SeriesSpec,
    table: Option<InverseTable>,
}

impl DistLaw {
    /// Law with the 1024-knot inversion table built eagerly.
    pub fn new(kind: LawKind, spec: SeriesSpec) -> Result<Self> {
        let mut law = Self::plain(kind, spec)?;
        let hi = kind.tail_start();
        let mut xs = Vec::with_capacity(KNOTS + 1);
        let mut ps = Vec::with_capacity(KNOTS + 1);
        for i in 0..=KNOTS {
            let x = hi * i as f64 / KNOTS as f64;
            xs.push(x);
            ps.push(law.cdf(x)?);
        }
        law.table = Some(InverseTable { xs, ps });
        Ok(law)
    }

    /// Law without the inversion table; quantiles start from bisection.
    pub fn plain(kind: LawKind, spec: SeriesSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            kind,
            spec,
            table: None,
        })
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn spec(&self) -> &SeriesSpec {
        &self.spec
    }

    fn check_x(x: f64) -> Result<()> {
        if x >= 0.0 && !x.is_nan() {
            Ok(())
        } else {
            Err(Error::Domain(format!("x must be nonnegative, got {x}")))
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == f64::INFINITY {
            return Ok(1.0);
        }
        let v = match self.kind {
            LawKind::HeightGamma => marginal_height_cdf(x, &self.spec)?.value,
            LawKind::DiameterD => marginal_diam_cdf(x, &self.spec)?.value,
            LawKind::SzekeresDelta => marginal_diam_cdf(x / SQRT_2, &self.spec)?.value,
        };
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == 0.0 {
            return Ok(1.0);
        }
        if x == f64::INFINITY {
            return Ok(0.0);
        }
        let v = match self.kind {
            LawKind::HeightGamma => marginal_height_sf(x, &self.spec)?.value,
            LawKind::DiameterD => marginal_diam_sf(x, &self.spec)?.value,
            LawKind::SzekeresDelta => marginal_diam_sf(x / SQRT_2, &self.spec)?.value,
        };
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == 0.0 || x == f64::INFINITY {
            return Ok(0.0);
        }
        let v = match self.kind {
            LawKind::HeightGamma => density_height(x, &self.spec)?.value,
            LawKind::DiameterD => density_diam(x, &self.spec)?.value,
            LawKind::SzekeresDelta => density_szekeres(x, &self.spec)?.value,
        };
        Ok(v.max(0.0))
    }

    fn initial_bracket(&self, p: f64) -> Result<(f64, f64)> {
        if let Some(t) = &self.table {
            // First knot with cdf ≥ p.
            let i = t.ps.partition_point(|&c| c < p);
            if i > 0 && i < t.ps.len() {
                return Ok((t.xs[i - 1].max(BRACKET.0), t.xs[i]));
            }
        }
        let (mut lo, mut hi) = BRACKET;
        let (c_lo, c_hi) = (self.cdf(lo)?, self.cdf(hi)?);
        if !(c_lo < p && p < c_hi) {
            return Err(Error::BracketFailure {
                p,
                lo,
                hi,
                cdf_lo: c_lo,
                cdf_hi: c_hi,
            });
        }
        while hi - lo > 1e-3 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo, hi))
    }

    /// Inverse cdf: bracketing, then Newton steps safeguarded by bisection.
    /// The returned `x` satisfies `cdf(x - tol_x/2) ≤ p ≤ cdf(x + tol_x/2)`.
    pub fn quantile(&self, q: &QuantileQuery) -> Result<f64> {
        let QuantileQuery { p, tol_x } = *q;
        let (mut lo, mut hi) = self.initial_bracket(p)?;
        let mut x = match &self.table {
            Some(_) => {
                let (c_lo, c_hi) = (self.cdf(lo)?, self.cdf(hi)?);
                if c_hi > c_lo {
                    lo + (p - c_lo) / (c_hi - c_lo) * (hi - lo)
                } else {
                    0.5 * (lo + hi)
                }
            }
            None => 0.5 * (lo + hi),
        };
        for _ in 0..200 {
            let f = self.cdf(x)? - p;
            if f < 0.0 {
                lo = lo.max(x);
            } else {
                hi = hi.min(x);
            }
            let d = self.pdf(x)?;
            let mut next = x - f / d;
            if !(d > 0.0) || !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            let converged = (next - x).abs() <= 0.25 * tol_x || hi - lo <= tol_x;
            x = if hi - lo <= tol_x {
                0.5 * (lo + hi)
            } else {
                next
            };
            if converged {
                let left = (x - 0.5 * tol_x).max(0.0);
                let right = x + 0.5 * tol_x;
                let (c_left, c_right) = (self.cdf(left)?, self.cdf(right)?);
                if c_left <= p && p <= c_right {
                    return Ok(x);
                }
                if c_left > p {
                    hi = hi.min(left);
                } else {
                    lo = lo.max(right);
                }
                x = 0.5 * (lo + hi);
            }
        }
        Ok(x)
    }

    /// `E[X^order]` by the survival-function route, with the error estimate
    /// widened to cover disagreement with the density route.
    pub fn moment(&self, order: u32) -> Result<MomentResult> {
        let (pdf_route, sf_route) = self.moment_routes(order)?;
        let gap = (pdf_route.value - sf_route.value).abs();
        Ok(MomentResult {
            abs_err: sf_route.abs_err.max(gap),
            ..sf_route
        })
    }

    /// `(∫ x^k f(x) dx, ∫ k x^{k-1} sf(x) dx)`, each on `(0, ∞)` split at the
    /// 0.999 quantile, with an explicit Gaussian-envelope bound on the tail
    /// that is cut off.
    pub fn moment_routes(&self, order: u32) -> Result<(MomentResult, MomentResult)> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "moment order must be positive".into(),
            ));
        }
        let k = order as i32;
        let split = self.quantile(&QuantileQuery::with_tol(0.999, 1e-8)?)?;
        let (amp, pow, rate) = self.kind.tail_envelope();
        // ∫_X^∞ x^m e^{-c x²} dx ≤ X^{m-1} e^{-cX²} / (2c (1 - (m-1)/(2cX²)))
        let gauss_tail = |m: i32, big_x: f64| {
            let denom = 1.0 - (m - 1) as f64 / (2.0 * rate * big_x * big_x);
            if denom <= 0.0 {
                return f64::INFINITY;
            }
            big_x.powi(m - 1) * (-rate * big_x * big_x).exp() / (2.0 * rate * denom)
        };
        let sf_tail = |big_x: f64| k as f64 * amp * gauss_tail(k - 1 + pow, big_x);
        let mut cut = self.kind.tail_start();
        while sf_tail(cut) > 1e-15 && cut < 200.0 {
            cut += 1.0;
        }
        let sf_bound = sf_tail(cut);
        let pdf_bound = sf_bound + cut.powi(k) * amp * cut.powi(pow) * (-rate * cut * cut).exp();

        let quad = Quadrature::new(1e-13, 1e-12);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let guard = |r: Result<f64>| {
            r.unwrap_or_else(|e| {
                failure.set(Some(e));
                f64::NAN
            })
        };
        let integrate = |g: &dyn Fn(f64) -> f64| -> Result<(f64, f64)> {
            let a = quad.integrate(g, 0.0, split)?;
            let b = quad.integrate(g, split, cut)?;
            Ok((a.value + b.value, a.abs_err + b.abs_err))
        };
        let pdf_res = integrate(&|x: f64| x.powi(k) * guard(self.pdf(x)));
        let sf_res = integrate(&|x: f64| k as f64 * x.powi(k - 1) * guard(self.sf(x)));
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let (pdf_res, sf_res) = (pdf_res?, sf_res?);
        Ok((
            MomentResult {
                order,
                value: pdf_res.0,
                abs_err: pdf_res.1 + pdf_bound,
            },
            MomentResult {
                order,
                value: sf_res.0,
                abs_err: sf_res.1 + sf_bound,
            },
        ))
    }

    /// Inverse-cdf draws from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<Vec<f64>> {
        (0..count)
            .map(|_| {
                let u: f64 = Open01.sample(rng);
                self.quantile(&QuantileQuery { p: u, tol_x: 1e-10 })
            })
            .collect()
    }

    /// `count` draws, deterministic in `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::InvalidArgument("count must be positive".into()));
        }
        let mut rng = replicate_rng(seed, 0);
        self.sample_with(&mut rng, count)
    }
}
