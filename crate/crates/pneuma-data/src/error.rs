use std::fmt;

use thiserror::Error;

/// One schema violation, tagged with the JSON path where it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted/indexed path into the document, e.g.
    /// `membranes.m03.trials[1].samples[17].time_s`.
    pub path: String,
    /// What is wrong at that path.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.detail)
    }
}

/// Errors from dataset ingestion, trimming, tables, and design-space work.
#[derive(Debug, Error)]
pub enum DataError {
    /// File-system failure while reading or writing.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    /// The file is not well-formed JSON; the location comes from the parser.
    #[error("malformed JSON: {detail}")]
    Parse { detail: String },

    /// The document is valid JSON but violates the dataset schema.
    #[error("{} schema violation(s); first: {}", violations.len(), violations[0])]
    Schema { violations: Vec<Violation> },

    /// An argument violates its documented contract.
    #[error("invalid argument {name}: {detail}")]
    InvalidArgument {
        name: &'static str,
        detail: String,
    },

    /// A CSV table could not be read back.
    #[error("malformed table: {detail}")]
    Table { detail: String },

    /// The constrained design space contains no feasible point.
    #[error("infeasible design space: {detail}")]
    Infeasible { detail: String },
}

impl DataError {
    pub(crate) fn schema(violations: Vec<Violation>) -> Self {
        debug_assert!(!violations.is_empty());
        DataError::Schema { violations }
    }
}
