use std::path::PathBuf;

use thiserror::Error;

use crate::sampler::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network shape: {0}")]
    InvalidShape(String),

    #[error("non-finite input point ({x}, {t})")]
    NonFiniteInput { x: f64, t: f64 },

    #[error("neuron index {index} out of range for a layer of width {width}")]
    NeuronIndex { index: usize, width: usize },

    #[error("non-finite loss in partition {partition} at point ({x}, {t})")]
    NonFiniteLoss { partition: Partition, x: f64, t: f64 },

    #[error("optimizer step produced a non-finite value at parameter {index}")]
    NonFiniteUpdate { index: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("Stirling number S({m}, {n}) is undefined for n > m")]
    StirlingOrder { m: u32, n: u32 },

    #[error("order {0} exceeds the supported cap")]
    OrderTooLarge(u32),

    #[error("zone undefined: eps_n = {0} is not below 1/2")]
    ZoneUndefined(f64),

    #[error("first-layer x-weight of neuron {0} is degenerate; use the full-domain rule")]
    DegenerateWeight(usize),

    #[error("problem `{0}` has no exact solution")]
    NoExactSolution(String),

    #[error("filtered partition {0} is empty")]
    EmptyPartition(Partition),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config parse error in {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("missing file {0}")]
    MissingFile(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
