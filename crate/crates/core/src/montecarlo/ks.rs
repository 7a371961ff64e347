//! One-sample Kolmogorov–Smirnov statistic against an analytic cdf.

use crate::error::{Error, Result};

/// `sup_x |F_m(x) - F(x)|` for a continuous `cdf`, sorting `sample` in place.
pub fn ks_statistic<F>(sample: &mut [f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if sample.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("sample contains NaN".into()));
    }
    sample.sort_by(f64::total_cmp);
    let m = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Asymptotic critical value `c(α) / √m` of the one-sample statistic.
pub fn ks_critical_value(m: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (m as f64).sqrt()
}
