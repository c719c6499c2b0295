use thiserror::Error;

/// Errors produced by the analytic and simulation engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter record violates one of its invariants.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// The requested false-alarm probability cannot be met (P_fa >= C, or no
    /// threshold in the probed range satisfies the constraint).
    #[error("infeasible radar target: {0}")]
    InfeasibleTarget(String),

    /// A sweep configuration document could not be read.
    #[error("line {line}: `{key}`: {reason}")]
    Parse { line: usize, key: String, reason: String },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimate {estimate:e}, \
         error {abs_error:e} after {subdivisions} subdivisions ({evaluations} evaluations)"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
        evaluations: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
