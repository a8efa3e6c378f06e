use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid digit {0:?}: words are over {{1,2}}")]
    InvalidDigit(char),
    #[error("empty word where a nonempty word is required")]
    EmptyWord,
    #[error("digit run of odd length at position {0}: not an {{a,b}}-word")]
    OddRun(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("word is not renormalizable: {0}")]
    NotRenormalizable(String),
    #[error("no one-digit completion of the word is an {{a,b}}-word")]
    NoValidExtension,
    #[error("cut does not match the {0} template")]
    TemplateMismatch(&'static str),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty language")]
    EmptyLanguage,
    #[error("precondition could not be certified: {0}")]
    PreconditionUnverified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
