use thiserror::Error;

/// Errors from surrogate configuration, training, and model files.
#[derive(Debug, Error)]
pub enum SurrogateError {
    /// A configuration field violates its contract.
    #[error("invalid config: {detail}")]
    InvalidConfig { detail: String },

    /// Training was asked to run on no data.
    #[error("empty training set")]
    EmptyTrainingSet,

    /// The training data itself is unusable.
    #[error("invalid training data: {detail}")]
    InvalidData { detail: String },

    /// An argument violates its documented contract.
    #[error("invalid argument {name}: {detail}")]
    InvalidArgument {
        name: &'static str,
        detail: String,
    },

    /// File-system failure while reading or writing a model.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    /// A model file is corrupt or from an unsupported version.
    #[error("bad model file: {detail}")]
    Format { detail: String },
}
