use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at non-positive integer {0}")]
    PoleAtNonPositiveInteger(f64),
    #[error("pole of the Riemann zeta function at s = 1")]
    PoleAtOne,
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("operation unsupported for group kind: {0}")]
    UnsupportedKind(String),
    #[error("no hyperbolic element with trace at most {0}")]
    NoHyperbolicFound(f64),
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("leading coefficient a vanishes")]
    ZeroACoefficient,
    #[error("tail estimate {tail:e} exceeds tolerance {tol:e}")]
    DivergentTail { tail: f64, tol: f64 },
    #[error("series does not start with the unit term (1, 1)")]
    NonUnitLeading,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("pole hit at {0}")]
    PoleHit(String),
    #[error("insufficient terms: {0}")]
    InsufficientTerms(String),
    #[error("wrong trichotomy: {0}")]
    WrongTrichotomy(String),
    #[error("log A vanishes")]
    UnitA,
    #[error("function too small on contour near {0}")]
    BoundaryTooClose(String),
    #[error("unknown group id {0:?}")]
    UnknownGroup(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
