use thiserror::Error;

/// Errors produced by the tree calculus and the conversion pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid label {0:?}")]
    InvalidLabel(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("edge {index} out of range (tree has {count} edges)")]
    InvalidEdge { index: usize, count: usize },

    #[error("vertex {0} is not univalent")]
    NotUnivalent(usize),

    #[error("invalid IHX site: {0}")]
    InvalidSite(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("invalid grope: {0}")]
    InvalidGrope(String),

    #[error("invalid hybrid tree: {0}")]
    InvalidHybrid(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// True for errors caused by malformed text input.
    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::InvalidLabel(_) | Error::Json(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
