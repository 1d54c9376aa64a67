use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum DafrError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}, column `{column}`: empty or non-finite value")]
    MissingValue { row: usize, column: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("feature width mismatch: expected {expected} columns, got {actual}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("MAPE is undefined when a target is zero (row {row}); shift or exclude zero targets")]
    ZeroTarget { row: usize },

    #[error("need at least {needed} rows, got {actual}")]
    TooFewRows { needed: usize, actual: usize },

    #[error("rank-deficient design: feature column {column} is linearly dependent on earlier columns; try a ridge penalty > 0")]
    RankDeficient { column: usize },

    #[error(
        "segment {segment} has {rows} rows, minimum is {min} (sizes front/mid/back = {sizes:?}); adjust q_front/q_back"
    )]
    SegmentTooSmall {
        segment: &'static str,
        rows: usize,
        min: usize,
        sizes: [usize; 3],
    },

    #[error("fitting {segment} model: {source}")]
    SegmentFit {
        segment: &'static str,
        #[source]
        source: Box<DafrError>,
    },

    #[error("segment thresholds have not been resolved")]
    UnresolvedThresholds,

    #[error("model parse: {0}")]
    ModelParse(String),

    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl DafrError {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            DafrError::Io { .. } => "io",
            DafrError::Csv(_) => "csv",
            DafrError::MissingColumn(_) => "missing_column",
            DafrError::NonNumeric { .. } => "non_numeric",
            DafrError::MissingValue { .. } => "missing_value",
            DafrError::Empty(_) => "empty",
            DafrError::LengthMismatch { .. } => "length_mismatch",
            DafrError::WidthMismatch { .. } => "width_mismatch",
            DafrError::InvalidArgument(_) => "invalid_argument",
            DafrError::NonFinite(_) => "non_finite",
            DafrError::ZeroTarget { .. } => "zero_target",
            DafrError::TooFewRows { .. } => "too_few_rows",
            DafrError::RankDeficient { .. } => "rank_deficient",
            DafrError::SegmentTooSmall { .. } => "segment_too_small",
            DafrError::SegmentFit { source, .. } => source.code(),
            DafrError::UnresolvedThresholds => "unresolved_thresholds",
            DafrError::ModelParse(_) => "model_parse",
            DafrError::Serialize(_) => "serialize",
        }
    }

    /// True for errors caused by bad user input (files, columns, argument
    /// values) rather than by the numerical pipeline itself.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            DafrError::Io { .. }
                | DafrError::Csv(_)
                | DafrError::MissingColumn(_)
                | DafrError::NonNumeric { .. }
                | DafrError::MissingValue { .. }
                | DafrError::InvalidArgument(_)
        )
    }
}

pub type Result<T, E = DafrError> = std::result::Result<T, E>;
