use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A request for zero items (empty table, zero terms).
    #[error("empty request: {0}")]
    EmptyRequest(String),
    /// The truncation bound could not be driven below the tolerance.
    #[error("no convergence after {terms} terms: bound {bound:e} exceeds tolerance {tol:e}")]
    NonConvergence { terms: usize, bound: f64, tol: f64 },
    /// Parameters violate an identity's validity constraints.
    #[error("constraint violated: {0}")]
    Constraint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
