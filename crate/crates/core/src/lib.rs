//! Two-qubit separability probabilities under operator-monotone and
//! Hilbert-Schmidt-family measures.
//!
//! The crate has two halves that check each other:
//!
//! * a quasirandom estimation pipeline ([`lds`] → [`statespace`] →
//!   [`measures`] → [`septest`] → [`estimator`], orchestrated by
//!   [`pipeline`]) that streams density matrices sampled from the Euler-angle
//!   parameterization of SU(4) and forms importance-weighted separability
//!   and absolute-separability probability estimates;
//! * deterministic reference values ([`refvalues`], backed by [`quad`] and
//!   [`special`]) evaluating the conjectured closed forms and quadrature
//!   targets those estimates are compared against.
//!
//! Numeric kernels that benefit from genericity ([`quad`], [`special`],
//! the monotone-function evaluation in [`measures`]) are generic over the
//! [`scalar::Real`] trait; the sampling pipeline and its fixed-point
//! sequence arithmetic are concrete in `f64`.

pub mod error;
pub mod estimator;
pub mod lds;
pub mod linalg;
pub mod measures;
pub mod pipeline;
pub mod quad;
pub mod refvalues;
pub mod scalar;
pub mod septest;
pub mod special;
pub mod statespace;

pub use error::{Error, Result};
pub use estimator::{EstimatorState, TruncationPolicy};
pub use lds::QuasirandomStream;
pub use measures::{LogWeight, MeasureKind};
pub use pipeline::{run, RunConfig, RunResult, RunSummary};
pub use scalar::Real;

/// Concrete instantiations of the generic numeric kernels.
pub type QuadResult = quad::QuadResult<f64>;

/// Dilogarithm at double precision.
pub fn li2(z: f64) -> Result<f64> {
    special::li2(z)
}
