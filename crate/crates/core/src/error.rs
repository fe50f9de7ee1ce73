use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at the origin: {0}")]
    Pole(String),
    #[error("near-boundary singularity: {0}")]
    NearBoundary(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("non-finite integrand at node {node} (z = {re} + {im}i)")]
    Evaluation { node: usize, re: f64, im: f64 },
    #[error("zero of the integrand suspected on the contour at angle {angle}")]
    Contour { angle: f64 },
    #[error("truncation guard: {0}")]
    TruncationGuard(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::NearBoundary(_) => "near_boundary",
            Error::Accuracy(_) => "accuracy",
            Error::Convergence(_) => "convergence",
            Error::Evaluation { .. } => "evaluation",
            Error::Contour { .. } => "contour",
            Error::TruncationGuard(_) => "truncation_guard",
            Error::Consistency(_) => "consistency",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
