use thiserror::Error;

/// Everything that can go wrong while deriving, evaluating or simulating a
/// network configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("hypergeometric series did not converge after {terms} terms (z = {z})")]
    NoConvergence { terms: usize, z: String },

    #[error("hypergeometric series lost precision (largest term {largest_term:.3e}, sum {sum:.3e})")]
    Cancellation { largest_term: f64, sum: f64 },

    #[error("hypergeometric argument outside the supported parameter family: {0}")]
    UnsupportedArgument(String),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("desired-signal Laplace transform evaluated at its pole s = -1")]
    PoleAtMinusOne,

    #[error("integration failed: {0}")]
    IntegrationFailure(String),

    #[error("user channel Gram matrix is numerically singular")]
    SingularChannel,

    #[error("simulation window too small: {0}")]
    WindowTooSmall(String),

    #[error("operation requires integral antenna/user counts, got K = {0}")]
    NonIntegralUsers(f64),

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the inputs rather than by numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::UnknownName { .. }
                | Error::NonIntegralUsers(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
