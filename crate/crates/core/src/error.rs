use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "series did not reach tolerance {tol:e} within {max_terms} terms (tail bound {bound:e})"
    )]
    NonConvergence {
        tol: f64,
        max_terms: usize,
        bound: f64,
    },

    #[error("bracket [{lo}, {hi}] does not straddle p = {p} (cdf values {cdf_lo}, {cdf_hi})")]
    BracketFailure {
        p: f64,
        lo: f64,
        hi: f64,
        cdf_lo: f64,
        cdf_hi: f64,
    },

    #[error("adaptive quadrature failed on [{a}, {b}]: error estimate {err:e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        a: f64,
        b: f64,
        err: f64,
        subdivisions: usize,
    },

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
