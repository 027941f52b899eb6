use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column '{column}': cannot parse '{cell}' as a number")]
    InvalidNumber {
        line: usize,
        column: String,
        cell: String,
    },

    #[error("duplicate entity code '{0}'")]
    DuplicateEntity(String),

    #[error("duplicate variable id '{0}'")]
    DuplicateVariable(String),

    #[error("unknown variable '{0}'")]
    UnknownVariable(String),

    #[error("unknown entity '{0}'")]
    UnknownEntity(String),

    #[error("column '{0}' has no observed values")]
    EmptyColumn(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("need at least {required} {what}, got {found}")]
    TooFew {
        what: &'static str,
        required: usize,
        found: usize,
    },

    #[error("design matrix is rank deficient: column '{0}' is a linear combination of earlier columns")]
    RankDeficient(String),

    #[error("{name} has zero variance")]
    ZeroVariance { name: String },

    #[error("standard error of '{0}' is zero")]
    ZeroStdError(String),

    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
