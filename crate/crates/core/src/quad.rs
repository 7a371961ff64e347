//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair on each panel, with global
//! bisection of the panel carrying the largest error estimate. Semi-infinite
//! ranges are mapped onto `(0, 1]` with `x = a + (1 - t) / t`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod abscissae XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub evals: usize,
}

/// Tolerances for [`Quadrature::integrate`]. The target is
/// `max(abs_tol, rel_tol * |I|)`.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_centre = f(centre);
    let mut kronrod = WGK[7] * f_centre;
    let mut gauss = WG[3] * f_centre;
    let mut res_abs = kronrod.abs();
    let mut fv = [0.0_f64; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (f_centre - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let scale = half.abs();
    let (kronrod, res_abs, res_asc) = (kronrod * half, res_abs * scale, res_asc * scale);
    let mut err = (kronrod - gauss * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel {
        a,
        b,
        value: kronrod,
        err,
    }
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over the finite interval `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadResult> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "finite bounds required, got [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(QuadResult {
                value: 0.0,
                abs_err: 0.0,
                evals: 0,
            });
        }
        let first = kronrod15(&f, a, b);
        let mut evals = 15;
        let mut heap = BinaryHeap::new();
        // Panels too narrow to split further are parked here and still count
        // towards the total.
        let mut frozen_value = 0.0;
        let mut frozen_err = 0.0;
        let mut total = first.value;
        let mut total_err = first.err;
        heap.push(first);

        let mut subdivisions = 0;
        loop {
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if total_err <= target {
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if !(worst.a < mid && mid < worst.b)
                || (worst.b - worst.a).abs() <= 1e-14 * mid.abs().max(f64::MIN_POSITIVE)
            {
                frozen_value += worst.value;
                frozen_err += worst.err;
                continue;
            }
            if subdivisions >= self.max_subdivisions {
                heap.push(worst);
                return Err(Error::QuadratureFailure {
                    a,
                    b,
                    err: total_err,
                    subdivisions,
                });
            }
            let left = kronrod15(&f, worst.a, mid);
            let right = kronrod15(&f, mid, worst.b);
            evals += 30;
            subdivisions += 1;
            heap.push(left);
            heap.push(right);
            // Re-sum instead of updating incrementally, so cancellation in
            // the running totals never hides a large panel error.
            total = frozen_value + heap.iter().map(|p| p.value).sum::<f64>();
            total_err = frozen_err + heap.iter().map(|p| p.err).sum::<f64>();
        }
        let target = self.abs_tol.max(self.rel_tol * total.abs());
        if total_err > target {
            return Err(Error::QuadratureFailure {
                a,
                b,
                err: total_err,
                subdivisions,
            });
        }
        Ok(QuadResult {
            value: total,
            abs_err: total_err,
            evals,
        })
    }

    /// Integrate `f` over `[a, ∞)`.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<QuadResult> {
        let mapped = |t: f64| {
            let x = a + (1.0 - t) / t;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (t * t)
            }
        };
        self.integrate(mapped, 0.0, 1.0)
    }
}
