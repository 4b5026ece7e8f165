use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quadrature failed to reach its requested tolerance.
    #[error("quadrature for `{quantity}` did not converge (err estimate {err:.3e})")]
    NonConvergence { quantity: String, err: f64 },
    /// Matrix input violated a structural precondition (e.g. hermiticity).
    #[error("matrix error: {0}")]
    Matrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
