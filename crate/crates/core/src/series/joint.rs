//! Joint law of `(D, Γ)`.
//!
//! The direct series gives the joint tail `S(y, z) = N_nr(D > y; Γ > z)`.
//! Its Jacobi transform, the four-sum theta series, is the complementary
//! quantity `U(y, z) = 1 - S(y, z) = N_nr(D ≤ y or Γ ≤ z)`; the joint
//! distribution function `F(y, z) = N_nr(D ≤ y; Γ ≤ z)` follows by
//! inclusion–exclusion from `U` and the marginal distribution functions.

use std::f64::consts::PI;

use super::marginal::{
    marginal_diam_cdf, marginal_diam_sf, marginal_height_cdf, marginal_height_sf,
};
use super::{sum_series, JointArgs, Majorant, Representation, SeriesEval, SeriesMode, SeriesSpec};
use crate::error::{Error, Result};

const UNDERFLOW_Y: f64 = 0.05;

fn survival_direct(args: &JointArgs, spec: &SeriesSpec) -> Result<SeriesEval> {
    let JointArgs { y, rho, delta, .. } = *args;
    let r2 = rho * rho;
    let y2 = y * y;
    let y4 = y2 * y2;
    let spine = Majorant::new(vec![2.0, 0.0, 4.0 * r2], r2, 0.0);
    let branch = Majorant::new(
        vec![
            0.0,
            0.0,
            0.0,
            (2.0 * y2 + 4.0) / 6.0,
            10.0 * y2 / 6.0,
            2.0 * y2 / 6.0,
            y4 / 6.0,
        ],
        y2 / 4.0,
        1.0,
    );
    let majorants: Vec<Majorant> = if delta == 0.0 {
        vec![spine]
    } else {
        vec![spine, branch]
    };
    sum_series(1, spec, Representation::Direct, &majorants, |n| {
        let nf = n as f64;
        let u = nf * nf * r2;
        let mut t = 2.0 * (2.0 * u - 1.0) * (-u).exp();
        if n >= 2 && delta != 0.0 {
            let plus = (nf + delta) * (nf + delta) * y2;
            let minus = (nf - delta) * (nf - delta) * y2;
            let centre = nf * nf * y2;
            let bracket = (plus - 2.0) * (-plus / 4.0).exp() - (minus - 2.0) * (-minus / 4.0).exp()
                + delta * y * (nf * nf * nf * y2 * y - 6.0 * nf * y) * (-centre / 4.0).exp();
            t += nf * (nf * nf - 1.0) / 6.0 * bracket;
        }
        t
    })
}

fn union_dual(args: &JointArgs, spec: &SeriesSpec) -> Result<SeriesEval> {
    let JointArgs { y, rho, delta, .. } = *args;
    let mut majorants = Vec::with_capacity(2);

    let height_live = rho >= UNDERFLOW_Y;
    let pref_h = 4.0 * PI.powf(2.5) / (rho * rho * rho);
    let rate_h = PI * PI / (rho * rho);
    if height_live {
        majorants.push(Majorant::new(vec![0.0, 0.0, pref_h], rate_h, 0.0));
    }

    // Exact zeros of sin(2πnδ) at δ ∈ {0, 1} are not left to rounding.
    let with_sin = delta != 0.0 && delta != 1.0;
    let with_delta = delta != 0.0;
    let diam_live = y >= UNDERFLOW_Y && (with_sin || with_delta);
    let big_a = 4.0 * PI * PI / (y * y);
    let y3 = y * y * y;
    let y5 = y3 * y * y;
    let c_sin = 32.0 * PI.powf(1.5) / 3.0;
    let c_cos = 16.0 * PI.sqrt() / 3.0;
    let d2 = delta * delta;
    if diam_live {
        let (a, a2, a3) = (big_a, big_a * big_a, big_a * big_a * big_a);
        let mut coeffs = vec![0.0; 7];
        if with_sin {
            let s3 = (3.0 * d2 - 1.0).abs() / y3;
            coeffs[1] += c_sin * (12.0 / y5 + s3);
            coeffs[3] += c_sin * (18.0 * a / y5 + s3 * a);
            coeffs[5] += c_sin * 4.0 * a2 / y5;
        }
        if with_delta {
            let c = c_cos * delta;
            let e = (d2 - 1.0).abs() / (2.0 * y);
            // cosine block
            coeffs[0] += c * 3.0 / y3;
            coeffs[2] += c * (15.0 * a / y3 + e * a);
            coeffs[4] += c * 6.0 * a2 / y3;
            // plain block
            coeffs[0] += c * 3.0 / y3;
            coeffs[2] += c * (27.0 * a / y3 + 1.5 * a / y);
            coeffs[4] += c * (24.0 * a2 / y3 + a2 / y);
            coeffs[6] += c * 4.0 * a3 / y3;
        }
        majorants.push(Majorant::new(coeffs, big_a, 0.0));
    }

    if majorants.is_empty() {
        return Ok(SeriesEval::exact(
            0.0,
            Representation::ThetaDual,
            f64::MIN_POSITIVE,
        ));
    }

    sum_series(1, spec, Representation::ThetaDual, &majorants, |n| {
        let nf = n as f64;
        let mut t = 0.0;
        if height_live {
            t += pref_h * nf * nf * (-nf * nf * rate_h).exp();
        }
        if diam_live {
            let a = big_a * nf * nf;
            let ea = (-a).exp();
            if with_sin {
                let s = (2.0 * PI * nf * delta).sin();
                t -= c_sin
                    * nf
                    * s
                    * (2.0 / y5 * (2.0 * a * a - 9.0 * a + 6.0)
                        - (3.0 * d2 - 1.0) / y3 * (a - 1.0))
                    * ea;
            }
            if with_delta {
                let c = if delta == 1.0 {
                    1.0
                } else {
                    (2.0 * PI * nf * delta).cos()
                };
                t += c_cos
                    * delta
                    * c
                    * ((6.0 * a * a - 15.0 * a + 3.0) / y3 - (d2 - 1.0) / (2.0 * y) * a)
                    * ea;
                t += c_cos
                    * delta
                    * ((4.0 * a * a * a - 24.0 * a * a + 27.0 * a - 3.0) / y3
                        + (2.0 * a * a - 3.0 * a) / (2.0 * y))
                    * ea;
            }
        }
        t
    })
}

/// Auto rule: sum the representation whose slowest leading exponent is
/// larger.
fn prefer_direct(args: &JointArgs) -> bool {
    let direct = (args.rho * args.rho).min(args.y * args.y / 4.0);
    let dual = (PI * PI / (args.rho * args.rho)).min(4.0 * PI * PI / (args.y * args.y));
    direct >= dual
}

fn auto(
    args: &JointArgs,
    spec: &SeriesSpec,
    direct: impl FnOnce() -> Result<SeriesEval>,
    dual: impl FnOnce() -> Result<SeriesEval>,
) -> Result<SeriesEval> {
    spec.validate()?;
    let (first, second): (
        Box<dyn FnOnce() -> Result<SeriesEval>>,
        Box<dyn FnOnce() -> Result<SeriesEval>>,
    ) = match spec.mode {
        SeriesMode::Direct => return direct(),
        SeriesMode::ThetaDual => return dual(),
        SeriesMode::Auto if prefer_direct(args) => (Box::new(direct), Box::new(dual)),
        SeriesMode::Auto => (Box::new(dual), Box::new(direct)),
    };
    match first() {
        Err(Error::NonConvergence { .. }) => second(),
        other => other,
    }
}

/// `S(y, z) = N_nr(D > y; Γ > z)`.
///
/// `z = 0` is routed to the diameter tail since `Γ > 0` almost surely.
pub fn joint_survival(args: &JointArgs, spec: &SeriesSpec) -> Result<SeriesEval> {
    if args.z == 0.0 {
        return marginal_diam_sf(args.y, spec);
    }
    auto(
        args,
        spec,
        || survival_direct(args, spec),
        || union_dual(args, spec).map(SeriesEval::complement),
    )
}

/// `U(y, z) = N_nr(D ≤ y or Γ ≤ z) = 1 - S(y, z)`, the four-sum theta
/// series. At `z ≥ y` it reduces to `N_nr(Γ ≤ z)`, at `z ≤ y/2` to
/// `N_nr(D ≤ y)`.
pub fn joint_union_cdf(args: &JointArgs, spec: &SeriesSpec) -> Result<SeriesEval> {
    if args.z == 0.0 {
        return Ok(SeriesEval::exact(1.0, Representation::ThetaDual, 0.0));
    }
    auto(
        args,
        spec,
        || survival_direct(args, spec).map(SeriesEval::complement),
        || union_dual(args, spec),
    )
}

/// `F(y, z) = N_nr(D ≤ y; Γ ≤ z)`.
///
/// `ThetaDual` combines the dual marginals with the four-sum series,
/// `F = F_D(y) + F_Γ(z) - U(y, z)`; `Direct` uses
/// `F = 1 - S_D(y) - S_Γ(z) + S(y, z)`.
pub fn joint_cdf(args: &JointArgs, spec: &SeriesSpec) -> Result<SeriesEval> {
    spec.validate()?;
    if args.z == 0.0 {
        return Ok(SeriesEval::exact(0.0, Representation::ThetaDual, 0.0));
    }
    let combine = |d: SeriesEval, g: SeriesEval, j: SeriesEval, value: f64| SeriesEval {
        value,
        representation: j.representation,
        terms_used: d.terms_used + g.terms_used + j.terms_used,
        trunc_bound: d.trunc_bound + g.trunc_bound + j.trunc_bound + 4.0 * f64::EPSILON,
    };
    match spec.mode {
        SeriesMode::Direct => {
            let d = marginal_diam_sf(args.y, spec)?;
            let g = marginal_height_sf(args.z, spec)?;
            let s = survival_direct(args, spec)?;
            Ok(combine(d, g, s, 1.0 - d.value - g.value + s.value))
        }
        SeriesMode::ThetaDual | SeriesMode::Auto => {
            let d = marginal_diam_cdf(args.y, spec)?;
            let g = marginal_height_cdf(args.z, spec)?;
            let u = joint_union_cdf(args, spec)?;
            Ok(combine(d, g, u, d.value + g.value - u.value))
        }
    }
}
