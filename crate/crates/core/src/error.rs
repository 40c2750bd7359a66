use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cost range {k_opt}..={k_max}")]
    InvalidRange { k_opt: i64, k_max: i64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid model parameters: {0}")]
    InvalidSpec(String),

    #[error("kernel has no row for cost {0}")]
    MissingRow(i64),

    #[error("distribution range {dist:?} does not match kernel range {kernel:?}")]
    RangeMismatch { dist: (i64, i64), kernel: (i64, i64) },

    #[error("target {target} is above starting cost {start}")]
    BadTarget { start: i64, target: i64 },

    #[error("no probability mass at or below target {0}")]
    UnreachableTarget(i64),

    #[error("cost {0} has no improving neighbours and the neighbourhood is unbounded")]
    DeadEnd(i64),

    #[error("descent from {start} to {target} never completes (restart coefficient {restart})")]
    Divergent { start: i64, target: i64, restart: f64 },

    #[error("enumeration of {0} cities exceeds the budget")]
    TooLarge(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that come from the analysis itself rather than from bad input.
    pub fn is_analysis(&self) -> bool {
        matches!(
            self,
            Error::Divergent { .. } | Error::DeadEnd(_) | Error::UnreachableTarget(_)
        )
    }
}
