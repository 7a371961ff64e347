//! Python bindings for the Brownian tree height and diameter laws.

use std::f64::consts::SQRT_2;

use crt_core::laplace::{self, LaplaceArgs};
use crt_core::montecarlo::{self as mc, Family, Normalization, StudyConfig};
use crt_core::series::{self, jacobi_check as jacobi};
use crt_core::{
    DistLaw, Error, JointArgs, LawKind, QuantileQuery, SeriesEval, SeriesMode, SeriesSpec,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec(mode: &str, tol: f64, max_terms: usize) -> PyResult<SeriesSpec> {
    let mode = match mode {
        "auto" => SeriesMode::Auto,
        "direct" => SeriesMode::Direct,
        "dual" | "theta_dual" => SeriesMode::ThetaDual,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown series mode '{other}'"
            )))
        }
    };
    SeriesSpec::new(mode, tol, max_terms).map_err(py_err)
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

/// One series evaluation with its truncation certificate.
#[pyclass(name = "SeriesValue", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PySeriesValue {
    value: f64,
    representation: String,
    terms_used: usize,
    trunc_bound: f64,
}

impl From<SeriesEval> for PySeriesValue {
    fn from(e: SeriesEval) -> Self {
        let representation = match e.representation {
            crt_core::Representation::Direct => "direct",
            crt_core::Representation::ThetaDual => "theta_dual",
        };
        Self {
            value: e.value,
            representation: representation.into(),
            terms_used: e.terms_used,
            trunc_bound: e.trunc_bound,
        }
    }
}

#[pymethods]
impl PySeriesValue {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!(
            "SeriesValue(value={:e}, representation='{}', terms_used={}, trunc_bound={:e})",
            self.value, self.representation, self.terms_used, self.trunc_bound
        )
    }
}

/// Evaluate a marginal or joint series. `what` is one of `sf`, `cdf`,
/// `pdf`, or `union` for the joint law.
#[pyfunction]
#[pyo3(signature = (law, what, x, z=None, mode="auto", tol=1e-13, max_terms=10_000))]
fn evaluate(
    law: &str,
    what: &str,
    x: f64,
    z: Option<f64>,
    mode: &str,
    tol: f64,
    max_terms: usize,
) -> PyResult<PySeriesValue> {
    let s = spec(mode, tol, max_terms)?;
    let e = if law == "joint" {
        let z = z.ok_or_else(|| PyValueError::new_err("the joint law needs z"))?;
        let args = JointArgs::new(x, z).map_err(py_err)?;
        match what {
            "sf" => series::joint_survival(&args, &s),
            "cdf" => series::joint_cdf(&args, &s),
            "union" => series::joint_union_cdf(&args, &s),
            other => {
                return Err(PyValueError::new_err(format!(
                    "'{other}' is not available for the joint law"
                )))
            }
        }
    } else {
        if z.is_some() {
            return Err(PyValueError::new_err("z applies only to the joint law"));
        }
        match (parse::<LawKind>(law)?, what) {
            (LawKind::HeightGamma, "sf") => series::marginal_height_sf(x, &s),
            (LawKind::HeightGamma, "cdf") => series::marginal_height_cdf(x, &s),
            (LawKind::HeightGamma, "pdf") => series::density_height(x, &s),
            (LawKind::DiameterD, "sf") => series::marginal_diam_sf(x, &s),
            (LawKind::DiameterD, "cdf") => series::marginal_diam_cdf(x, &s),
            (LawKind::DiameterD, "pdf") => series::density_diam(x, &s),
            (LawKind::SzekeresDelta, "sf") => series::marginal_diam_sf(x / SQRT_2, &s),
            (LawKind::SzekeresDelta, "cdf") => series::marginal_diam_cdf(x / SQRT_2, &s),
            (LawKind::SzekeresDelta, "pdf") => series::density_szekeres(x, &s),
            (_, other) => return Err(PyValueError::new_err(format!("unknown quantity '{other}'"))),
        }
    };
    e.map(Into::into).map_err(py_err)
}

/// `P(D > y, Γ > z)`.
#[pyfunction]
fn joint_survival(y: f64, z: f64) -> PyResult<f64> {
    let args = JointArgs::new(y, z).map_err(py_err)?;
    Ok(series::joint_survival(&args, &SeriesSpec::default())
        .map_err(py_err)?
        .value)
}

/// `P(D ≤ y, Γ ≤ z)`.
#[pyfunction]
fn joint_cdf(y: f64, z: f64) -> PyResult<f64> {
    let args = JointArgs::new(y, z).map_err(py_err)?;
    Ok(series::joint_cdf(&args, &SeriesSpec::default())
        .map_err(py_err)?
        .value)
}

/// A marginal law: `height`, `diameter` or `szekeres`.
#[pyclass(name = "Law", frozen)]
struct PyLaw {
    inner: DistLaw,
}

#[pymethods]
impl PyLaw {
    #[new]
    #[pyo3(signature = (kind, mode="auto", tol=1e-13, max_terms=10_000))]
    fn new(kind: &str, mode: &str, tol: f64, max_terms: usize) -> PyResult<Self> {
        let inner = DistLaw::new(parse(kind)?, spec(mode, tol, max_terms)?).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().name()
    }

    fn cdf(&self, x: f64) -> PyResult<f64> {
        self.inner.cdf(x).map_err(py_err)
    }

    fn sf(&self, x: f64) -> PyResult<f64> {
        self.inner.sf(x).map_err(py_err)
    }

    fn pdf(&self, x: f64) -> PyResult<f64> {
        self.inner.pdf(x).map_err(py_err)
    }

    #[pyo3(signature = (p, tol_x=None))]
    fn quantile(&self, p: f64, tol_x: Option<f64>) -> PyResult<f64> {
        let q = match tol_x {
            Some(t) => QuantileQuery::with_tol(p, t),
            None => QuantileQuery::new(p),
        }
        .map_err(py_err)?;
        self.inner.quantile(&q).map_err(py_err)
    }

    /// `(value, abs_err)` of `E[X^order]`.
    fn moment(&self, order: u32) -> PyResult<(f64, f64)> {
        let m = self.inner.moment(order).map_err(py_err)?;
        Ok((m.value, m.abs_err))
    }

    #[pyo3(signature = (count, seed=0))]
    fn sample(&self, py: Python<'_>, count: usize, seed: u64) -> PyResult<Vec<f64>> {
        py.detach(|| self.inner.sample(count, seed)).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Law('{}')", self.inner.kind().name())
    }
}

/// Closed form of `L_λ(y, z)`, the Laplace transform in the excursion
/// lifetime of the joint tail of diameter and height.
#[pyfunction]
fn laplace_closed_form(lambda_: f64, y: f64, z: f64) -> PyResult<f64> {
    let args = LaplaceArgs::new(lambda_, y, z).map_err(py_err)?;
    laplace::closed_form_llambda(&args).map_err(py_err)
}

/// Quadrature value, error estimate and evaluation count.
#[pyfunction]
#[pyo3(signature = (lambda_, y, z, tol=1e-9))]
fn laplace_numeric(lambda_: f64, y: f64, z: f64, tol: f64) -> PyResult<(f64, f64, usize)> {
    let args = LaplaceArgs::new(lambda_, y, z).map_err(py_err)?;
    let n = laplace::numeric_l(&args, tol).map_err(py_err)?;
    Ok((n.value, n.abs_err, n.evals))
}

/// `[(name, lhs, rhs), ...]` for the excursion-measure identities.
#[pyfunction]
fn excursion_identities(lambda_: f64, a: f64) -> PyResult<Vec<(String, f64, f64)>> {
    let checks = laplace::excursion_measure_identities(lambda_, a).map_err(py_err)?;
    Ok(checks
        .iter()
        .map(|c| (c.name.to_string(), c.lhs, c.rhs))
        .collect())
}

/// Both sides of Jacobi's theta identity as `(lhs, rhs, bound)`.
#[pyfunction]
#[pyo3(signature = (t, x=0.0, y=0.0, n_terms=20))]
fn jacobi_check(t: f64, x: f64, y: f64, n_terms: u64) -> PyResult<((f64, f64), (f64, f64), f64)> {
    let c = jacobi(t, x, y, n_terms).map_err(py_err)?;
    Ok(((c.lhs.re, c.lhs.im), (c.rhs.re, c.rhs.im), c.bound))
}

/// `(height, diameter)` of a uniform labelled tree on `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn labelled_tree(n: usize, seed: u64) -> PyResult<(u32, u32)> {
    let s = mc::sample_labelled_tree(n, seed).map_err(py_err)?;
    Ok((s.height, s.diameter))
}

/// `(height, diameter)` of a uniform planar tree on `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn planar_tree(n: usize, seed: u64) -> PyResult<(u32, u32)> {
    let s = mc::sample_planar_tree(n, seed).map_err(py_err)?;
    Ok((s.height, s.diameter))
}

/// A discretised excursion on `n` steps: `(values, height, diameter)`.
#[pyfunction]
#[pyo3(signature = (n, seed=0, normalization="paper"))]
fn excursion(n: usize, seed: u64, normalization: &str) -> PyResult<(Vec<f64>, f64, f64)> {
    let norm: Normalization = parse(normalization)?;
    let path = mc::sample_excursion(n, seed, norm).map_err(py_err)?;
    let hd = mc::excursion_height_diameter(&path);
    Ok((path.values, hd.gamma, hd.diameter))
}

/// Convergence study; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (family, n, m, seed=0, threads=None, normalization="paper"))]
fn convergence_study(
    py: Python<'_>,
    family: &str,
    n: usize,
    m: usize,
    seed: u64,
    threads: Option<usize>,
    normalization: &str,
) -> PyResult<String> {
    let family: Family = parse(family)?;
    let config = StudyConfig {
        threads,
        normalization: parse(normalization)?,
        ..StudyConfig::new(family, n, m, seed)
    };
    let report = py
        .detach(|| mc::convergence_study(&config))
        .map_err(py_err)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn brownian_tree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeriesValue>()?;
    m.add_class::<PyLaw>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(joint_survival, m)?)?;
    m.add_function(wrap_pyfunction!(joint_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(excursion_identities, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_check, m)?)?;
    m.add_function(wrap_pyfunction!(labelled_tree, m)?)?;
    m.add_function(wrap_pyfunction!(planar_tree, m)?)?;
    m.add_function(wrap_pyfunction!(excursion, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_study, m)?)?;
    Ok(())
}
