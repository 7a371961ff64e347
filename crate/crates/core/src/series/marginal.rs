//! Marginal laws of `Γ` and `D`, and the densities of `D` and `Δ = √2 D`.

use std::f64::consts::{PI, SQRT_2};

use super::{
    check_positive, sum_series, Majorant, Representation, SeriesEval, SeriesMode, SeriesSpec,
};
use crate::error::{Error, Result};

/// Auto mode sums the direct height series from here up (`n²y² = n²π²/y²`).
pub const HEIGHT_SWITCH: f64 = 1.772_453_850_905_515_9; // √π
/// Auto mode sums the direct diameter series from here up (`y²/4 = 4π²/y²`).
pub const DIAM_SWITCH: f64 = 3.544_907_701_811_031_8; // 2√π

/// Below this argument every theta-dual term underflows.
const UNDERFLOW_Y: f64 = 0.05;

fn sqrt_pi() -> f64 {
    PI.sqrt()
}

/// Turn `Σ_j c_j a^j` with `a = A k²` into absolute coefficients in `k`.
fn even_poly(a_coeffs: &[f64], big_a: f64) -> Vec<f64> {
    let mut out = vec![0.0; 2 * a_coeffs.len() - 1];
    for (j, c) in a_coeffs.iter().enumerate() {
        out[2 * j] = c.abs() * big_a.powi(j as i32);
    }
    out
}

fn underflowed() -> SeriesEval {
    SeriesEval::exact(0.0, Representation::ThetaDual, f64::MIN_POSITIVE)
}

/// Run `primary`, and on non-convergence fall back to `secondary`.
fn with_fallback(
    primary: impl FnOnce() -> Result<SeriesEval>,
    secondary: impl FnOnce() -> Result<SeriesEval>,
) -> Result<SeriesEval> {
    match primary() {
        Err(Error::NonConvergence { .. }) => secondary(),
        other => other,
    }
}

fn dispatch(
    y: f64,
    switch: f64,
    spec: &SeriesSpec,
    direct: impl FnOnce() -> Result<SeriesEval>,
    dual: impl FnOnce() -> Result<SeriesEval>,
) -> Result<SeriesEval> {
    spec.validate()?;
    match spec.mode {
        SeriesMode::Direct => direct(),
        SeriesMode::ThetaDual => dual(),
        SeriesMode::Auto if y >= switch => with_fallback(direct, dual),
        SeriesMode::Auto => with_fallback(dual, direct),
    }
}

// ---- height ---------------------------------------------------------------

fn height_sf_direct(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let y2 = y * y;
    let maj = Majorant::new(vec![2.0, 0.0, 4.0 * y2], y2, 0.0);
    sum_series(1, spec, Representation::Direct, &[maj], |n| {
        let u = (n * n) as f64 * y2;
        2.0 * (2.0 * u - 1.0) * (-u).exp()
    })
}

fn height_cdf_dual(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    if y < UNDERFLOW_Y {
        return Ok(underflowed());
    }
    let pref = 4.0 * PI.powf(2.5) / (y * y * y);
    let rate = PI * PI / (y * y);
    let maj = Majorant::new(vec![0.0, 0.0, pref], rate, 0.0);
    sum_series(1, spec, Representation::ThetaDual, &[maj], |n| {
        let n2 = (n * n) as f64;
        pref * n2 * (-n2 * rate).exp()
    })
}

fn height_pdf_direct(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let y2 = y * y;
    let maj = Majorant::new(vec![0.0, 0.0, 12.0 * y, 0.0, 8.0 * y * y2], y2, 0.0);
    sum_series(1, spec, Representation::Direct, &[maj], |n| {
        let n2 = (n * n) as f64;
        let u = n2 * y2;
        4.0 * n2 * y * (2.0 * u - 3.0) * (-u).exp()
    })
}

fn height_pdf_dual(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    if y < UNDERFLOW_Y {
        return Ok(underflowed());
    }
    let k = 4.0 * PI.powf(2.5);
    let y2 = y * y;
    let rate = PI * PI / y2;
    let c2 = 3.0 * k / (y2 * y2);
    let c4 = 2.0 * k * PI * PI / (y2 * y2 * y2);
    let maj = Majorant::new(vec![0.0, 0.0, c2, 0.0, c4], rate, 0.0);
    sum_series(1, spec, Representation::ThetaDual, &[maj], |n| {
        let n2 = (n * n) as f64;
        n2 * (c4 * n2 - c2) * (-n2 * rate).exp()
    })
}

/// `N_nr(Γ > y)`.
pub fn marginal_height_sf(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        HEIGHT_SWITCH,
        spec,
        || height_sf_direct(y, spec),
        || height_cdf_dual(y, spec).map(SeriesEval::complement),
    )
}

/// `N_nr(Γ ≤ y)`.
pub fn marginal_height_cdf(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        HEIGHT_SWITCH,
        spec,
        || height_sf_direct(y, spec).map(SeriesEval::complement),
        || height_cdf_dual(y, spec),
    )
}

/// Density of `Γ`, by term-wise differentiation of either representation.
pub fn density_height(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        HEIGHT_SWITCH,
        spec,
        || height_pdf_direct(y, spec),
        || height_pdf_dual(y, spec),
    )
}

// ---- diameter -------------------------------------------------------------

fn diam_sf_direct(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let y2 = y * y;
    let y4 = y2 * y2;
    let maj = Majorant::new(
        vec![
            2.0,
            0.0,
            2.0 + 2.0 * y2,
            0.0,
            2.0 * y2 + y4 / 6.0,
            0.0,
            y4 / 6.0,
        ],
        y2 / 4.0,
        0.0,
    );
    sum_series(2, spec, Representation::Direct, &[maj], |n| {
        let n2 = (n * n) as f64;
        let u = n2 * y2;
        (n2 - 1.0) * (u * u / 6.0 - 2.0 * u + 2.0) * (-u / 4.0).exp()
    })
}

fn diam_cdf_dual(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    if y < UNDERFLOW_Y {
        return Ok(underflowed());
    }
    let big_a = 4.0 * PI * PI / (y * y);
    let s = sqrt_pi() / 3.0;
    let y3 = y * y * y;
    // (√π/3) [ (8/y³)(24a − 36a² + 8a³) + (16/y) a² ]
    let a_poly = [
        0.0,
        s * 8.0 * 24.0 / y3,
        s * (-8.0 * 36.0 / y3 + 16.0 / y),
        s * 64.0 / y3,
    ];
    let abs_poly = [0.0, a_poly[1], s * (8.0 * 36.0 / y3 + 16.0 / y), a_poly[3]];
    let maj = Majorant::new(even_poly(&abs_poly, big_a), big_a, 0.0);
    sum_series(1, spec, Representation::ThetaDual, &[maj], |n| {
        let a = big_a * (n * n) as f64;
        (a * (a_poly[1] + a * (a_poly[2] + a * a_poly[3]))) * (-a).exp()
    })
}

fn diam_pdf_direct(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let y2 = y * y;
    let y3 = y2 * y;
    let y5 = y3 * y2;
    let c2 = 60.0 * y / 12.0;
    let c4 = 20.0 * y * (3.0 + y2) / 12.0;
    let c6 = y3 * (20.0 + y2) / 12.0;
    let c8 = y5 / 12.0;
    let maj = Majorant::new(vec![0.0, 0.0, c2, 0.0, c4, 0.0, c6, 0.0, c8], y2 / 4.0, 0.0);
    sum_series(1, spec, Representation::Direct, &[maj], |n| {
        let m = (n * n) as f64;
        m * (-c2 + m * (c4 + m * (-c6 + m * c8))) * (-m * y2 / 4.0).exp()
    })
}

/// Shared shape of the theta-dual diameter density and Szekeres' density:
/// `pref Σ ( (c4/y⁴)(4x⁴ − 36x³ + 75x² − 30x) + (c2/y²)(2x³ − 5x²) ) e^{-x}`
/// with `x = X n²`.
fn theta_density(
    y: f64,
    big_x: f64,
    pref: f64,
    c4: f64,
    c2: f64,
    spec: &SeriesSpec,
) -> Result<SeriesEval> {
    if y < UNDERFLOW_Y {
        return Ok(underflowed());
    }
    let u = pref * c4 / y.powi(4);
    let v = pref * c2 / (y * y);
    let poly = [
        0.0,
        -30.0 * u,
        75.0 * u - 5.0 * v,
        -36.0 * u + 2.0 * v,
        4.0 * u,
    ];
    let abs_poly = [
        0.0,
        30.0 * u,
        75.0 * u + 5.0 * v,
        36.0 * u + 2.0 * v,
        4.0 * u,
    ];
    let maj = Majorant::new(even_poly(&abs_poly, big_x), big_x, 0.0);
    sum_series(1, spec, Representation::ThetaDual, &[maj], |n| {
        let x = big_x * (n * n) as f64;
        x * (poly[1] + x * (poly[2] + x * (poly[3] + x * poly[4]))) * (-x).exp()
    })
}

fn diam_pdf_dual(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let big_a = 4.0 * PI * PI / (y * y);
    theta_density(y, big_a, 2.0 * sqrt_pi() / 3.0, 16.0, 8.0, spec)
}

fn szekeres_pdf_dual(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    let big_b = 8.0 * PI * PI / (y * y);
    theta_density(y, big_b, (2.0 * PI).sqrt() / 3.0, 64.0, 16.0, spec)
}

/// `N_nr(D > y)`.
pub fn marginal_diam_sf(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        DIAM_SWITCH,
        spec,
        || diam_sf_direct(y, spec),
        || diam_cdf_dual(y, spec).map(SeriesEval::complement),
    )
}

/// `N_nr(D ≤ y)`.
pub fn marginal_diam_cdf(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        DIAM_SWITCH,
        spec,
        || diam_sf_direct(y, spec).map(SeriesEval::complement),
        || diam_cdf_dual(y, spec),
    )
}

/// Density `f_D(y)`; `Direct` sums the Gaussian-type series, `ThetaDual`
/// its Jacobi transform.
pub fn density_diam(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    dispatch(
        y,
        DIAM_SWITCH,
        spec,
        || diam_pdf_direct(y, spec),
        || diam_pdf_dual(y, spec),
    )
}

/// Density `f_Δ(y)` of Szekeres' limit `Δ = √2 D`.
///
/// `ThetaDual` evaluates Szekeres' series in `b = 8(πn/y)²` directly; the
/// other modes delegate to `f_D(y/√2)/√2`.
pub fn density_szekeres(y: f64, spec: &SeriesSpec) -> Result<SeriesEval> {
    check_positive("y", y)?;
    spec.validate()?;
    if spec.mode == SeriesMode::ThetaDual {
        return szekeres_pdf_dual(y, spec);
    }
    let inner = density_diam(y / SQRT_2, spec)?;
    Ok(SeriesEval {
        value: inner.value / SQRT_2,
        trunc_bound: inner.trunc_bound / SQRT_2,
        ..inner
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: SeriesMode) -> SeriesSpec {
        SeriesSpec {
            mode,
            ..SeriesSpec::default()
        }
    }

    #[test]
    fn switch_points() {
        assert_eq!(HEIGHT_SWITCH, PI.sqrt());
        assert_eq!(DIAM_SWITCH, 2.0 * PI.sqrt());
    }

    #[test]
    fn auto_picks_representation_by_switch() {
        let auto = spec(SeriesMode::Auto);
        assert_eq!(
            marginal_height_sf(2.0, &auto).unwrap().representation,
            Representation::Direct
        );
        assert_eq!(
            marginal_height_sf(1.0, &auto).unwrap().representation,
            Representation::ThetaDual
        );
        assert_eq!(
            marginal_diam_sf(4.0, &auto).unwrap().representation,
            Representation::Direct
        );
        assert_eq!(
            marginal_diam_sf(3.0, &auto).unwrap().representation,
            Representation::ThetaDual
        );
    }

    #[test]
    fn large_argument_tails_vanish() {
        let auto = spec(SeriesMode::Auto);
        for y in [20.0, 40.0, 100.0] {
            assert!(marginal_height_sf(y, &auto).unwrap().value.abs() < 1e-100);
            assert!(marginal_diam_sf(2.0 * y, &auto).unwrap().value.abs() < 1e-100);
        }
    }

    #[test]
    fn tiny_arguments_underflow_to_zero() {
        let auto = spec(SeriesMode::Auto);
        for y in [1e-3, 0.01, 0.049] {
            let g = marginal_height_cdf(y, &auto).unwrap();
            assert_eq!(g.value, 0.0);
            assert_eq!(g.trunc_bound, f64::MIN_POSITIVE);
            assert_eq!(marginal_diam_cdf(y, &auto).unwrap().value, 0.0);
            assert_eq!(density_diam(y, &auto).unwrap().value, 0.0);
        }
    }

    #[test]
    fn domain_errors() {
        let auto = spec(SeriesMode::Auto);
        for f in [
            marginal_height_sf,
            marginal_height_cdf,
            marginal_diam_sf,
            marginal_diam_cdf,
            density_diam,
        ] {
            assert!(matches!(f(0.0, &auto), Err(Error::Domain(_))));
            assert!(matches!(f(-2.0, &auto), Err(Error::Domain(_))));
            assert!(matches!(f(f64::INFINITY, &auto), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn height_duality_at_small_argument() {
        let d = marginal_height_sf(0.3, &spec(SeriesMode::Direct)).unwrap();
        let t = marginal_height_sf(0.3, &spec(SeriesMode::ThetaDual)).unwrap();
        assert_eq!(t.representation, Representation::ThetaDual);
        assert!(
            (d.value - t.value).abs() < 1e-12,
            "{} vs {}",
            d.value,
            t.value
        );
    }

    #[test]
    fn height_density_matches_finite_difference() {
        let auto = spec(SeriesMode::Auto);
        let h = 1e-4;
        for y in [0.6, 1.0, 1.77, 2.5, 4.0] {
            let fd = (marginal_height_cdf(y + h, &auto).unwrap().value
                - marginal_height_cdf(y - h, &auto).unwrap().value)
                / (2.0 * h);
            let direct = density_height(y, &spec(SeriesMode::Direct)).unwrap().value;
            let dual = density_height(y, &spec(SeriesMode::ThetaDual))
                .unwrap()
                .value;
            assert!((fd - direct).abs() < 1e-7, "y={y}: fd {fd} direct {direct}");
            assert!((direct - dual).abs() < 1e-10, "y={y}: {direct} vs {dual}");
        }
    }

    #[test]
    fn szekeres_direct_equals_delegation() {
        for y in [1.0, 2.0, 3.0, 5.0] {
            let closed_series = density_szekeres(y, &spec(SeriesMode::ThetaDual))
                .unwrap()
                .value;
            let deleg = density_diam(y / SQRT_2, &spec(SeriesMode::Auto))
                .unwrap()
                .value
                / SQRT_2;
            assert!(
                (closed_series - deleg).abs() < 1e-12,
                "y={y}: {closed_series} vs {deleg}"
            );
        }
    }
}
