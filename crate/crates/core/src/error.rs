use thiserror::Error;

use crate::remez::RemezResult;
use crate::scalar::Mode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed-mode arithmetic: {left:?} with {right:?}")]
    ModeMismatch { left: Mode, right: Mode },

    #[error("degree {k} exceeds declared smoothness n = {n}")]
    InsufficientSmoothness { k: usize, n: usize },

    #[error("degree {k} exceeds the floating-mode cap of {cap}")]
    DegreeCap { k: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite sample f({x}) = {value}")]
    NonFiniteSample { x: f64, value: f64 },

    #[error("quadrature did not settle with {nodes} nodes: relative change {change:e}")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error(
        "conditioning failure for k = {k}, eps = {eps:e}: pivot {pivot_min:e} below threshold"
    )]
    Conditioning { k: usize, eps: f64, pivot_min: f64 },

    #[error("inverse structure mismatch at ({r}, {s}): scaled entries differ across eps")]
    InverseMismatch { r: usize, s: usize },

    #[error("singular matrix")]
    Singular,

    #[error("Remez exchange did not converge after {} iterations", .0.iterations)]
    RemezNotConverged(Box<RemezResult>),

    #[error("unknown function '{name}'; known: {known}")]
    UnknownFunction { name: String, known: String },

    #[error("slope fit refused for coefficient {index}: {usable} usable points, need 5")]
    FitRefused { index: usize, usable: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
