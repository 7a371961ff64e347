use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};

/// Both sides of Jacobi's theta identity
/// `Σ e^{-(x+n)²t - 2πiny} = e^{2πixy} (π/t)^{1/2} Σ e^{-π²(y+n)²/t + 2πinx}`,
/// each summed over `|n| ≤ n_terms`, with the combined truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub bound: f64,
}

impl JacobiCheck {
    pub fn abs_diff(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// `Σ_{|n| > k} e^{-c (n + s)²}`, bounded by two geometric tails.
fn two_sided_tail(c: f64, shift: f64, k: u64) -> f64 {
    let m0 = k as f64 + 1.0 - shift.abs();
    if m0 <= 0.0 {
        return f64::INFINITY;
    }
    let ratio = (-c * (2.0 * m0 + 1.0)).exp();
    2.0 * (-c * m0 * m0).exp() / (1.0 - ratio)
}

pub fn jacobi_check(t: f64, x: f64, y: f64, n_terms: u64) -> Result<JacobiCheck> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be positive, got {t}")));
    }
    if !(x.is_finite() && y.is_finite()) {
        return Err(domain("x and y must be finite"));
    }
    let k = n_terms as i64;
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs_sum = Complex64::new(0.0, 0.0);
    for n in -k..=k {
        let nf = n as f64;
        lhs += Complex64::from_polar((-(x + nf) * (x + nf) * t).exp(), -2.0 * PI * nf * y);
        rhs_sum += Complex64::from_polar(
            (-PI * PI * (y + nf) * (y + nf) / t).exp(),
            2.0 * PI * nf * x,
        );
    }
    let scale = (PI / t).sqrt();
    let rhs = Complex64::from_polar(scale, 2.0 * PI * x * y) * rhs_sum;
    let rounding = 8.0 * f64::EPSILON * (2 * k + 1) as f64 * (lhs.norm() + rhs.norm() + 1.0);
    let bound =
        two_sided_tail(t, x, n_terms) + scale * two_sided_tail(PI * PI / t, y, n_terms) + rounding;
    Ok(JacobiCheck { lhs, rhs, bound })
}
