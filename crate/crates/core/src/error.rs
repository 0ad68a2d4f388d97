use crate::coding::FormLabel;
use crate::Language;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("duplicate key: example {id:?} coded twice by {coder:?}")]
    DuplicateKey { id: String, coder: String },

    #[error("degenerate distribution: every assignment falls in one category, kappa is undefined")]
    DegenerateDistribution,

    #[error("no form specification for {0}")]
    MissingFormSpec(FormLabel),

    #[error("form specification for {form} has no directive for language {language}")]
    MissingDirective { form: FormLabel, language: Language },

    #[error("unsupported language: {0}")]
    UnsupportedLanguage(String),

    #[error("ensurative warnings unsupported")]
    UnsupportedMode,

    #[error("lexicon miss: no {language} entry for {key:?}")]
    LexiconMiss { key: String, language: Language },

    #[error("malformed network: {0}")]
    Network(String),

    #[error("malformed tree: {0}")]
    Tree(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Domain errors are failures of the request itself rather than of the
    /// inputs' syntax or the environment.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedMode
                | Error::UnsupportedLanguage(_)
                | Error::LexiconMiss { .. }
                | Error::MissingFormSpec(_)
                | Error::MissingDirective { .. }
                | Error::DegenerateDistribution
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
