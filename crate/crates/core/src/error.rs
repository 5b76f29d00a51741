use thiserror::Error;

/// Errors raised by the envelope solver and its companion routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),

    #[error("{law} cannot be evaluated at {x}")]
    EvaluationDomain { law: &'static str, x: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("b-function role {role} does not apply to a {law} law")]
    RoleMismatch { role: &'static str, law: &'static str },

    #[error("state has no quantum numbers")]
    EmptyState,

    #[error("no closed-form auxiliary Q for lambda={lambda}, l={l}, D={dim}; supply a user-defined Q")]
    UnsupportedAuxiliary { lambda: f64, l: u32, dim: u32 },

    #[error("auxiliary exponent must satisfy 0 != lambda > -2, got {0}")]
    InvalidAuxiliaryExponent(f64),

    #[error("no stationary point: {hint}")]
    NoStationaryPoint { hint: String },

    #[error("stationary scan exhausted: {0}")]
    ScanExhausted(String),

    #[error("shape has no critical point (2w + y w' never vanishes)")]
    NoCriticalPoint,

    #[error("potential is not a short-range well")]
    NotShortRange,

    #[error("operation requires nonrelativistic kinematics")]
    NonRelativisticRequired,

    #[error("collapse regime: {0}")]
    CollapseRegime(String),

    #[error("oscillator is unbound (nu + N rho = {0} <= 0)")]
    UnboundOscillator(f64),

    #[error("radial eigenvalue not converged: {0}")]
    NotConverged(String),

    #[error("radial potential is unbounded below near the origin")]
    UnboundedBelow,

    #[error("simplex geometry needs D >= N - 1 (N={n}, D={dim})")]
    DimensionTooSmall { n: u32, dim: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
