//! Exact laws of the height `Γ` and diameter `D` of the Brownian tree.
//!
//! The crate is organised around four layers:
//!
//! * [`series`] evaluates the theta-type series for the marginal and joint
//!   laws in both their direct and Jacobi-dual forms, with certified
//!   truncation bounds.
//! * [`laws`] wraps those series into queryable one-dimensional laws
//!   (cdf, sf, pdf, quantile, moments, inverse-CDF sampling).
//! * [`laplace`] holds the closed-form Laplace transforms of the joint tail
//!   and the excursion-measure identities, together with quadrature checks.
//! * [`montecarlo`] simulates finite random trees and discretised Brownian
//!   excursions and measures their distance to the limit laws.
//!
//! Throughout, the excursion is normalised as `√2` times the standard Itô
//! excursion of unit lifetime, which is the scaling under which rescaled
//! uniform planar trees converge.

pub mod error;
pub mod laplace;
pub mod laws;
pub mod montecarlo;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
pub use laws::{DistLaw, LawKind, MomentResult, QuantileQuery};
pub use series::{JointArgs, Representation, SeriesEval, SeriesMode, SeriesSpec, ThetaCoeff};
