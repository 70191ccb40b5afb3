use thiserror::Error;

/// Errors raised by state construction, channel construction and the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("NotHermitian: worst |rho_jk - conj(rho_kj)| = {worst:e}")]
    NotHermitian { worst: f64 },

    #[error("TraceNotOne: trace = {re} + {im}i (|tr - 1| = {deviation:e})")]
    TraceNotOne { re: f64, im: f64, deviation: f64 },

    #[error("NotPositive: smallest eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("NotNormalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("InvalidPhase: angle[{index}] = {value}")]
    InvalidPhase { index: usize, value: f64 },

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("DimensionTooLarge: dimension {dim} exceeds the limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("OutOfRange: {name} = {value} not in [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("ParamOutOfRange: {name} = {value} ({reason})")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("IncompleteKraus: max |sum K^dag K - I| = {deviation:e}")]
    IncompleteKraus { deviation: f64 },

    #[error("ValidationFailed: channel output is not a state ({0})")]
    ValidationFailed(Box<Error>),

    #[error("UnsupportedKind: no closed form for channel kind `{0}`")]
    UnsupportedKind(&'static str),

    #[error("NotApplicable: {0}")]
    NotApplicable(&'static str),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Name of the violated invariant, as used in CLI diagnostics.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::NotPositive { .. } => "NotPositive",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::InvalidPhase { .. } => "InvalidPhase",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DimensionTooLarge { .. } => "DimensionTooLarge",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::IncompleteKraus { .. } => "IncompleteKraus",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::NotApplicable(_) => "NotApplicable",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
