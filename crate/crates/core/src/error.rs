use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("variable `{0}` has fewer than 2 observed levels")]
    DegenerateVariable(String),

    #[error("no complete rows remain after removing rows with missing values")]
    EmptyDataset,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("recode of `{variable}`: {reason}")]
    Recode { variable: String, reason: String },

    #[error("variable `{0}` has no tier assignment")]
    UnassignedTier(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graphs have different node sets")]
    NodeSetMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("joint state space of {0} configurations is too large to enumerate")]
    StateSpaceTooLarge(u128),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
