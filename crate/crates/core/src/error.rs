use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("polarization failed the ampleness screen: {0}")]
    NotAmple(String),
    #[error("cone model insufficient: {0}")]
    ConeModelInsufficient(String),
    #[error("unrecognized Fujita face: {0}")]
    UnrecognizedFace(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("no admissible solution on support: {0}")]
    InfeasibleSupport(String),
    #[error("verification failure: {0}")]
    VerificationFailure(String),
    #[error("class {label} is not contractible (current square {square})")]
    NotContractible { label: String, square: String },
}

impl Error {
    /// Stable kebab-case tag used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidClass(_) => "invalid-class",
            Error::NotAmple(_) => "not-ample",
            Error::ConeModelInsufficient(_) => "cone-model-insufficient",
            Error::UnrecognizedFace(_) => "unrecognized-face",
            Error::HypothesisNotMet(_) => "hypothesis-not-met",
            Error::InvalidDecomposition(_) => "invalid-decomposition",
            Error::InfeasibleSupport(_) => "infeasible-support",
            Error::VerificationFailure(_) => "verification-failure",
            Error::NotContractible { .. } => "not-contractible",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
