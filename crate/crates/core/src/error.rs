use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error taxonomy shared by the whole crate. The CLI maps these onto exit
/// codes: parameter/precondition problems -> 2, structural or
/// rank-ambiguity failures -> 3, capacity limits -> 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched or out-of-range parameters (wrong level, wrong rank,
    /// invalid period matrix, failed precondition).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A configured desk-scale capacity bound would be exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Exact arithmetic failure (inversion of zero).
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// The singular value spectrum does not show the required gap between
    /// kept and discarded values; the full spectrum is attached.
    #[error("rank ambiguity: gap ratio {gap:.3e} below threshold {threshold:.3e}")]
    RankAmbiguity {
        gap: f64,
        threshold: f64,
        singular_values: Vec<f64>,
    },

    /// A result violates a structural expectation (wrong nullity, an
    /// equivariance check failed, a degenerate embedding point).
    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}
