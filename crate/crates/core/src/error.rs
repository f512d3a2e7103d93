use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong between reading a file and printing a table.
///
/// Display strings start with the variant name so that command-line users
/// see which invariant was violated.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("EmptyInput: no observations found")]
    EmptyInput,

    #[error("MalformedInput: {0}")]
    MalformedInput(String),

    #[error("NonNumericValue: line {line}: cannot parse `{value}` as a number")]
    NonNumericValue { line: usize, value: String },

    #[error("UnbalancedDesign: group `{group}` has {found} observations, expected {expected}")]
    UnbalancedDesign {
        group: String,
        found: usize,
        expected: usize,
    },

    #[error("TooFewGroups: need at least 2 groups, found {0}")]
    TooFewGroups(usize),

    #[error("TooFewReplicates: need at least 2 observations per group, found {0}")]
    TooFewReplicates(usize),

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("DegenerateError: {0}")]
    Degenerate(String),

    #[error("NonConjugateConfig: direct sampling needs tau_eps = 0 and kappa_eps = tau_alpha / n_J (got tau_eps = {tau_eps}, kappa_eps = {kappa_eps}, tau_alpha / n_J = {expected_kappa})")]
    NonConjugateConfig {
        tau_eps: f64,
        kappa_eps: f64,
        expected_kappa: f64,
    },

    #[error("DegeneratePosterior: {0}")]
    DegeneratePosterior(String),

    #[error("TooFewDraws: need at least {needed} posterior draws, got {got}")]
    TooFewDraws { needed: usize, got: usize },

    #[error("UnknownGroup: group index {index} out of range for {n_groups} groups")]
    UnknownGroup { index: usize, n_groups: usize },

    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// True for failures caused by a degenerate model rather than bad input.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_) | Error::DegeneratePosterior(_))
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
