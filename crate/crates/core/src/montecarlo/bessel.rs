//! Hitting times of `Z = √2 · BES(3)` and their Laplace transform
//! `E[e^{-λ τ_r}] = r√λ / sinh(r√λ)`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::replicate_rng;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselCheck {
    pub mc_estimate: f64,
    pub std_error: f64,
    pub closed_form: f64,
    /// First-order allowance for the late detection of the crossing.
    pub bias_allowance: f64,
    pub replicates: usize,
    pub within: bool,
}

/// `x / sinh x`, continuous at 0.
fn x_over_sinh(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 - x * x / 6.0
    } else if x > 700.0 {
        2.0 * x * (-x).exp()
    } else {
        x / x.sinh()
    }
}

pub fn hitting_laplace_closed_form(r: f64, lambda: f64) -> Result<f64> {
    check(r, lambda)?;
    Ok(x_over_sinh(r * lambda.sqrt()))
}

/// `∂/∂r` of the closed form.
fn closed_form_slope(r: f64, lambda: f64) -> f64 {
    let s = lambda.sqrt();
    let x = r * s;
    if x < 1e-4 {
        return -s * x / 3.0;
    }
    if x > 350.0 {
        return 2.0 * s * (1.0 - x) * (-x).exp();
    }
    s * (x.sinh() - x * x.cosh()) / (x.sinh() * x.sinh())
}

fn check(r: f64, lambda: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    Ok(())
}

/// First grid time at which `|Z| ≥ r`, simulating `Z` as `√2` times the
/// norm of a three-dimensional Brownian motion.
pub fn hitting_time_with<R: Rng + ?Sized>(rng: &mut R, r: f64, dt: f64) -> f64 {
    let sd = (2.0 * dt).sqrt();
    let r2 = r * r;
    let mut x = [0.0f64; 3];
    let mut k: u64 = 0;
    loop {
        k += 1;
        for c in x.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *c += sd * g;
        }
        if x[0] * x[0] + x[1] * x[1] + x[2] * x[2] >= r2 {
            return k as f64 * dt;
        }
    }
}

pub fn bessel_hitting_check(
    r: f64,
    lambda: f64,
    dt: f64,
    m: usize,
    seed: u64,
) -> Result<BesselCheck> {
    check(r, lambda)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(
            "at least two replicates are needed".into(),
        ));
    }
    let draws: Vec<f64> = (0..m as u64)
        .into_par_iter()
        .map(|i| (-lambda * hitting_time_with(&mut replicate_rng(seed, i), r, dt)).exp())
        .collect();
    let mean = draws.iter().sum::<f64>() / m as f64;
    let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (m - 1) as f64;
    let std_error = (var / m as f64).sqrt();
    let closed_form = x_over_sinh(r * lambda.sqrt());
    let bias_allowance = closed_form_slope(r, lambda).abs() * (2.0 * dt).sqrt();
    let within = (mean - closed_form).abs() <= 3.0 * std_error + bias_allowance;
    Ok(BesselCheck {
        mc_estimate: mean,
        std_error,
        closed_form,
        bias_allowance,
        replicates: m,
        within,
    })
}
