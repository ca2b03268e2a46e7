use thiserror::Error;

pub type Result<T> = std::result::Result<T, DiscError>;

#[derive(Debug, Error)]
pub enum DiscError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series is not real-valued on the circle (asymmetry {asymmetry:e})")]
    NotRealValued { asymmetry: f64 },

    #[error("series is not analytic type: coefficient at k = {k} is nonzero")]
    NotAnalytic { k: i64 },

    #[error("grid size {grid} below required {required}")]
    GridTooSmall { grid: usize, required: usize },

    #[error("invalid piecewise-linear data: {0}")]
    InvalidPiecewise(String),

    #[error("no node count up to {max_nodes} satisfies the approximation bounds")]
    ApproximationFailed { max_nodes: usize },

    #[error("truncation ceiling {ceiling} reached with tail bound {tail:e} above target {target:e}")]
    TruncationFailed { ceiling: u64, tail: f64, target: f64 },

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("chain stopped after {achieved} of {requested} levels: {reason}")]
    ChainStalled {
        achieved: usize,
        requested: usize,
        reason: String,
    },
}
