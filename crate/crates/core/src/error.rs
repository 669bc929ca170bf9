use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("path is {len} bytes long, limit is {max}")]
    PathTooLong { len: usize, max: usize },

    #[error("path contains a NUL byte at offset {offset}")]
    EmbeddedNul { offset: usize },

    #[error("max_path_len must be greater than zero")]
    InvalidLimits,

    #[error("not a canonical path: {0:?}")]
    NotCanonical(String),

    #[error("line {line}: entry {entry:?} is not canonical (canonical form is {canonical:?})")]
    NonCanonicalEntry {
        line: usize,
        entry: String,
        canonical: String,
    },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("component name {0:?} is empty or contains '/'")]
    InvalidName(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error(
        "canonicalizers disagree on {input:?}: stack gives {stack:?}, rewriting gives {oracle:?}"
    )]
    OracleMismatch {
        input: String,
        stack: String,
        oracle: String,
    },

    #[error("enumeration of {requested} strings exceeds the budget of {budget}")]
    BudgetExceeded { requested: String, budget: u64 },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Self {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }
}
