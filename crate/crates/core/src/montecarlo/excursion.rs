//! Discretised normalised Brownian excursions and their height and
//! diameter.
//!
//! A Gaussian random walk with unit total variance is turned into a bridge
//! by removing its linear drift, then rotated at its first minimum (the
//! Vervaat transform), which yields an excursion of lifetime 1 in law.

use std::ops::{Add, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::rng::replicate_rng;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// The Itô excursion conditioned on lifetime 1.
    StandardIto,
    /// `√2` times the standard excursion; the laws in `series` refer to it.
    PaperSqrt2,
}

impl Normalization {
    pub fn scale(self) -> f64 {
        match self {
            Self::StandardIto => 1.0,
            Self::PaperSqrt2 => std::f64::consts::SQRT_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::StandardIto => "standard_ito",
            Self::PaperSqrt2 => "paper_sqrt2",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "standard_ito" | "ito" => Ok(Self::StandardIto),
            "paper" | "paper_sqrt2" | "sqrt2" => Ok(Self::PaperSqrt2),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcursionPath {
    pub grid_size: usize,
    pub values: Vec<f64>,
    pub argmax_index: usize,
    pub normalization: Normalization,
}

impl ExcursionPath {
    /// Wrap given grid values, checking the endpoint and sign constraints.
    pub fn from_values(values: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument(
                "an excursion needs at least two grid points".into(),
            ));
        }
        if values[0] != 0.0 || values[values.len() - 1] != 0.0 {
            return Err(Error::InvalidArgument(
                "excursion must start and end at 0".into(),
            ));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument(
                "excursion values must be finite and nonnegative".into(),
            ));
        }
        let argmax_index = first_argmax(&values);
        Ok(Self {
            grid_size: values.len() - 1,
            values,
            argmax_index,
            normalization,
        })
    }

    pub fn height(&self) -> f64 {
        self.values[self.argmax_index]
    }
}

/// A subtree grafted on the spine from the root to the highest point:
/// `s` is its distance from the top of the spine and `gamma` its height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinalRecord {
    pub s: f64,
    pub gamma: f64,
}

fn first_argmax<T: Copy + PartialOrd>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Brownian bridge on `n + 1` grid points with unit lifetime.
pub fn brownian_bridge_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let sigma = (1.0 / n as f64).sqrt();
    let mut w = Vec::with_capacity(n + 1);
    w.push(0.0);
    let mut level = 0.0;
    for _ in 0..n {
        let g: f64 = rng.sample(StandardNormal);
        level += sigma * g;
        w.push(level);
    }
    let end = w[n];
    for (k, x) in w.iter_mut().enumerate() {
        *x -= (k as f64 / n as f64) * end;
    }
    w
}

/// Rotate a bridge at its first minimum over `0..n`.
pub fn vervaat(bridge: &[f64]) -> Vec<f64> {
    let n = bridge.len() - 1;
    let mut k = 0;
    for i in 1..n {
        if bridge[i] < bridge[k] {
            k = i;
        }
    }
    let base = bridge[k];
    let mut out: Vec<f64> = (0..n).map(|i| bridge[(k + i) % n] - base).collect();
    out.push(0.0);
    out
}

pub fn sample_excursion_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    normalization: Normalization,
) -> Result<ExcursionPath> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid size must be at least 2, got {n}"
        )));
    }
    let mut values = vervaat(&brownian_bridge_with(rng, n));
    let scale = normalization.scale();
    if scale != 1.0 {
        values.iter_mut().for_each(|v| *v *= scale);
    }
    let argmax_index = first_argmax(&values);
    Ok(ExcursionPath {
        grid_size: n,
        values,
        argmax_index,
        normalization,
    })
}

pub fn sample_excursion(
    n: usize,
    seed: u64,
    normalization: Normalization,
) -> Result<ExcursionPath> {
    sample_excursion_with(&mut replicate_rng(seed, 0), n, normalization)
}

/// Argmax, height and diameter of the tree coded by `v`.
///
/// The highest point is an endpoint of a diameter, so the diameter is the
/// largest `(Γ - m) + (v_t - m)` where `m` is the minimum of `v` between `t`
/// and the argmax. Both sides are swept outward from the argmax.
pub fn scan_height_diameter<T>(v: &[T]) -> (usize, T, T)
where
    T: Copy + PartialOrd + Add<Output = T> + Sub<Output = T>,
{
    let top = first_argmax(v);
    let gamma = v[top];
    let zero = gamma - gamma;
    let mut diameter = zero;
    let mut sweep = |indices: &mut dyn Iterator<Item = usize>| {
        let mut m = gamma;
        for t in indices {
            if v[t] < m {
                m = v[t];
            }
            let cand = (gamma - m) + (v[t] - m);
            if cand > diameter {
                diameter = cand;
            }
        }
    };
    sweep(&mut (0..top).rev());
    sweep(&mut (top + 1..v.len()));
    (top, gamma, diameter)
}

/// Spine records: each stretch of the outward sweeps on which the running
/// minimum `m` is constant contributes `(Γ - m, max v - m)`.
pub fn spinal_records(v: &[f64]) -> Vec<SpinalRecord> {
    let top = first_argmax(v);
    let gamma = v[top];
    let mut out = Vec::new();
    let mut sweep = |indices: &mut dyn Iterator<Item = usize>| {
        let mut m = gamma;
        let mut peak = gamma;
        for t in indices {
            if v[t] < m {
                if m < gamma {
                    out.push(SpinalRecord {
                        s: gamma - m,
                        gamma: peak - m,
                    });
                }
                m = v[t];
                peak = v[t];
            } else if v[t] > peak {
                peak = v[t];
            }
        }
        if m < gamma {
            out.push(SpinalRecord {
                s: gamma - m,
                gamma: peak - m,
            });
        }
    };
    sweep(&mut (0..top).rev());
    sweep(&mut (top + 1..v.len()));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightDiameter {
    pub gamma: f64,
    pub diameter: f64,
    pub spine: Vec<SpinalRecord>,
}

pub fn excursion_height_diameter(path: &ExcursionPath) -> HeightDiameter {
    let (_, gamma, diameter) = scan_height_diameter(&path.values);
    HeightDiameter {
        gamma,
        diameter,
        spine: spinal_records(&path.values),
    }
}

/// `max_{s ≤ t} v_s + v_t - 2 min_{[s, t]} v` in quadratic time.
pub fn brute_force_diameter(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for s in 0..v.len() {
        let mut m = v[s];
        for t in s..v.len() {
            m = m.min(v[t]);
            best = best.max(v[s] + v[t] - 2.0 * m);
        }
    }
    best
}
