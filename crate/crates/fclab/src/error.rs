//! Crate-wide error type.

/// Errors surfaced by evaluators, quadrature, and experiment drivers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature could not meet its tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Integration path conflicts with the spectrum or the function's
    /// region of holomorphy.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Resolvent requested too close to the spectrum.
    #[error("evaluation point within {dist:.3e} of the spectrum")]
    NearSpectrum { dist: f64 },

    /// A discrete grid failed its validation (e.g. biorthogonality).
    #[error("discretization error: {0}")]
    Discretization(String),

    /// Iterative numerics failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Bad experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
