use thiserror::Error;

/// Errors from ensemble construction, acquisition, and selection.
#[derive(Debug, Error)]
pub enum LearnError {
    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    #[error("invalid argument `{name}`: {detail}")]
    InvalidArgument { name: &'static str, detail: String },

    #[error("no feasible design in the search space: {detail}")]
    Infeasible { detail: String },

    #[error(transparent)]
    Surrogate(#[from] pneuma_surrogate::SurrogateError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("ensemble store format error: {detail}")]
    Format { detail: String },
}
