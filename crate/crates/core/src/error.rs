use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefinedHomomorphism(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ambient group mismatch")]
    AmbientMismatch,
    #[error("element is not in the expected group: {0}")]
    NotAMember(String),
    #[error("malformed tower: {0}")]
    MalformedTower(String),
    #[error("level map does not commute: {0}")]
    NotCommuting(String),
    #[error("index order violation: {0}")]
    IndexOrder(String),
    #[error("core verification failed: {0}")]
    CoreVerificationFailed(String),
    #[error("hypothesis failed re-verification: {0}")]
    HypothesisViolated(String),
    #[error("vanishing pattern violated: {0}")]
    VanishingPattern(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("non-normalizable input: {0}")]
    NonNormalizable(String),
    #[error("invalid simplicial data: {0}")]
    InvalidSimplicial(String),
    #[error("horizon too short: {0}")]
    Horizon(String),
    #[error("certificate failed replay: {0}")]
    CertificateReplay(String),
}

impl Error {
    /// Failures that indicate a bug in an internal algorithm rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CoreVerificationFailed(_) | Error::CertificateReplay(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
