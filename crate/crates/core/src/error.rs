use thiserror::Error;

use crate::model::AgentId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("meeting rates are defined for distinct agents, got ({0}, {0})")]
    InvalidPair(AgentId),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parameters fall outside the range where a construction or check applies.
    #[error("parameter regime violated: {0}")]
    Regime(String),

    /// The structural stability criterion is only meaningful when b is 0 or infinitesimal.
    #[error("unsupported cost regime: {0}")]
    UnsupportedRegime(String),

    #[error("construction failed: {0}")]
    Construction(String),

    /// A degree-sequence assumption does not hold; `id` is 1, 2 or 3.
    #[error("degree-sequence assumption ({id}) fails: {detail}")]
    Assumption { id: u8, detail: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("internal invariant breached: {0}")]
    Invariant(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Domain rejections, as opposed to malformed input.
    pub fn is_domain_rejection(&self) -> bool {
        matches!(
            self,
            Error::Regime(_)
                | Error::UnsupportedRegime(_)
                | Error::Construction(_)
                | Error::Assumption { .. }
                | Error::Infeasible(_)
        )
    }
}
