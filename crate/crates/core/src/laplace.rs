//! Laplace transforms in the lifetime of the joint tail of `(D, Γ)`.
//!
//! `L_λ(y, z) = (1/2√π) ∫₀^∞ e^{-λr} r^{-3/2} N_nr(√r D > 2y; √r Γ > z) dr`
//! integrates the joint tail against the lifetime intensity of the
//! excursion measure. It has the closed form
//! `L_1(y, z) = coth(y ∨ z) - 1 - ¼ 1{z ≤ 2y} (sinh 2q - 2q) / sinh⁴ y`
//! with `q = y ∧ (2y - z)`, and scales as `L_λ(y, z) = √λ L_1(y√λ, z√λ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::Quadrature;
use crate::series::{joint_survival, JointArgs, SeriesSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceArgs {
    pub lambda: f64,
    pub y: f64,
    pub z: f64,
}

impl LaplaceArgs {
    pub fn new(lambda: f64, y: f64, z: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("lambda must be positive, got {lambda}")));
        }
        if !(y >= 0.0 && y.is_finite() && z >= 0.0 && z.is_finite()) {
            return Err(domain(format!(
                "y and z must be nonnegative and finite, got ({y}, {z})"
            )));
        }
        if y == 0.0 && z == 0.0 {
            return Err(domain("y and z cannot both be zero"));
        }
        Ok(Self { lambda, y, z })
    }
}

/// `coth(x) - 1 = 2 / (e^{2x} - 1)`, accurate for tiny and huge `x`.
fn coth_minus_one(x: f64) -> f64 {
    2.0 / (2.0 * x).exp_m1()
}

/// `(sinh 2q - 2q) / (4 sinh⁴ y)` for `0 ≤ q ≤ y`.
fn branch_correction(y: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    if y < 1e-4 {
        // sinh 2q - 2q = (4/3) q³ (1 + q²/5 + …), sinh⁴ y = y⁴ (1 + 2y²/3 + …)
        return q * q * q / (3.0 * y.powi(4)) * (1.0 + q * q / 5.0 - 2.0 * y * y / 3.0);
    }
    if y > 20.0 {
        // Factor out e^{4y} so neither numerator nor denominator overflows.
        let s = (-2.0 * y).exp();
        let num =
            0.5 * (1.0 - (-4.0 * q).exp()) * (2.0 * q - 4.0 * y).exp() - 2.0 * q * (-4.0 * y).exp();
        return num * 16.0 / (4.0 * (1.0 - s).powi(4));
    }
    let sq = if q < 1e-3 {
        // sinh 2q - 2q without cancellation
        let u = 2.0 * q;
        let u2 = u * u;
        u * u2 / 6.0 * (1.0 + u2 / 20.0 * (1.0 + u2 / 42.0 * (1.0 + u2 / 72.0)))
    } else {
        (2.0 * q).sinh() - 2.0 * q
    };
    sq / (4.0 * y.sinh().powi(4))
}

/// `L_1(y, z)` for `y > 0`, `z ≥ 0`.
pub fn closed_form_l1(y: f64, z: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(domain(format!("y must be positive, got {y}")));
    }
    if !(z >= 0.0 && !z.is_nan()) {
        return Err(domain(format!("z must be nonnegative, got {z}")));
    }
    let mut v = coth_minus_one(y.max(z));
    if z <= 2.0 * y {
        let q = y.min(2.0 * y - z).clamp(0.0, y);
        v -= branch_correction(y, q);
    }
    Ok(v)
}

/// `L_λ(y, z) = √λ L_1(y√λ, z√λ)`, with the boundary cases `y = 0`
/// (height only) and `z = 0` (diameter only) included.
pub fn closed_form_llambda(args: &LaplaceArgs) -> Result<f64> {
    let s = args.lambda.sqrt();
    if args.y == 0.0 {
        return height_only(args.lambda, args.z);
    }
    Ok(s * closed_form_l1(args.y * s, args.z * s)?)
}

/// `L_λ(0, z) = √λ coth(z√λ) - √λ`.
pub fn height_only(lambda: f64, z: f64) -> Result<f64> {
    if !(lambda > 0.0 && z > 0.0) {
        return Err(domain("height-only transform needs lambda > 0 and z > 0"));
    }
    let s = lambda.sqrt();
    Ok(s * coth_minus_one(z * s))
}

/// `L_λ(y, 0) = √λ coth(y√λ) - √λ - √λ (sinh(2y√λ) - 2y√λ) / (4 sinh⁴(y√λ))`.
pub fn diameter_only(lambda: f64, y: f64) -> Result<f64> {
    if !(lambda > 0.0 && y > 0.0) {
        return Err(domain("diameter-only transform needs lambda > 0 and y > 0"));
    }
    let s = lambda.sqrt();
    let u = y * s;
    Ok(s * coth_minus_one(u) - s * branch_correction(u, u))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericLaplace {
    pub value: f64,
    /// Quadrature error estimate plus the analytic bound on the cut-off tail.
    pub abs_err: f64,
    pub evals: usize,
}

/// `L_λ(y, z)` by quadrature of its defining integral, with the joint tail
/// evaluated from the series. The substitution `r = t²` removes the
/// `r^{-3/2}` weight:
/// `L_λ = (1/√π) ∫₀^∞ e^{-λt²} t^{-2} S(2y/t, z/t) dt`.
pub fn numeric_l(args: &LaplaceArgs, quad_tol: f64) -> Result<NumericLaplace> {
    if args.y <= 0.0 {
        return Err(domain("numeric transform needs y > 0"));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "quad_tol must be positive, got {quad_tol}"
        )));
    }
    let LaplaceArgs { lambda, y, z } = *args;
    let spec = SeriesSpec {
        tol: 1e-15,
        ..SeriesSpec::default()
    };
    // e^{-λT²} < quad_tol / 10
    let big_t = ((10.0 / quad_tol).ln() / lambda).sqrt();
    let failure = std::cell::Cell::new(None);
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let s = JointArgs::new(2.0 * y / t, z / t).and_then(|a| joint_survival(&a, &spec));
        match s {
            Ok(s) => (-lambda * t * t).exp() / (t * t) * s.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let quad = Quadrature::new(quad_tol / 10.0, 0.0);
    let res = quad.integrate(integrand, 0.0, big_t);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let res = res?;
    // ∫_T^∞ e^{-λt²} t^{-2} dt ≤ e^{-λT²} / (2λT³)
    let tail = (-lambda * big_t * big_t).exp() / (2.0 * lambda * big_t.powi(3));
    let norm = 1.0 / PI.sqrt();
    Ok(NumericLaplace {
        value: norm * res.value,
        abs_err: norm * (res.abs_err + tail),
        evals: res.evals,
    })
}

/// Two sides of one excursion-measure identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentityCheck {
    pub fn abs_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Quadrature checks of three identities for the excursion measure `N`:
///
/// * `N(1 - e^{-λζ}) = √λ`, integrating against `N(ζ ∈ dr) = dr / (2√π r^{3/2})`;
/// * `N(e^{-λζ} 1{Γ > a}) = √λ coth(a√λ) - √λ`, integrating
///   `N(e^{-λζ} | Γ = r) = (r√λ / sinh(r√λ))²` against `N(Γ ∈ dr) = dr / r²`;
/// * `N(1 - e^{-λζ} 1{Γ ≤ a}) = √λ coth(a√λ)`, the sum of the two left sides.
pub fn excursion_measure_identities(lambda: f64, a: f64) -> Result<[IdentityCheck; 3]> {
    if !(lambda > 0.0 && lambda.is_finite() && a > 0.0 && a.is_finite()) {
        return Err(domain("lambda and a must be positive"));
    }
    let s = lambda.sqrt();
    let quad = Quadrature::new(1e-13, 1e-13);

    // r = t²: (1/√π) ∫₀^∞ (1 - e^{-λt²}) / t² dt
    let lifetime = quad.integrate_to_infinity(
        |t| {
            let u = lambda * t * t;
            if u < 1e-8 {
                lambda * (1.0 - 0.5 * u)
            } else {
                -(-u).exp_m1() / (t * t)
            }
        },
        0.0,
    )?;
    let lifetime = lifetime.value / PI.sqrt();

    let conditioned = quad.integrate_to_infinity(
        |r| {
            let x = r * s;
            if x > 700.0 {
                return 0.0;
            }
            let ratio = x / x.sinh();
            ratio * ratio / (r * r)
        },
        a,
    )?;

    Ok([
        IdentityCheck {
            name: "lifetime_laplace",
            lhs: lifetime,
            rhs: s,
        },
        IdentityCheck {
            name: "height_tail_laplace",
            lhs: conditioned.value,
            rhs: s * coth_minus_one(a * s),
        },
        IdentityCheck {
            name: "height_capped_laplace",
            lhs: lifetime + conditioned.value,
            rhs: s * coth_minus_one(a * s) + s,
        },
    ])
}
