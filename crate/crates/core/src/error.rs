use std::path::PathBuf;

use thiserror::Error;

use crate::agents::VehicleId;

/// Errors raised while building or driving a world.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("a plan needs at least one PoI to choose from")]
    NoPois,
    #[error("vehicle {0} cannot form a tie with itself")]
    SelfTie(VehicleId),
    #[error("{needed} distinct cells requested but the {width}x{height} grid has only {available}")]
    GridTooSmall {
        width: u32,
        height: u32,
        needed: u64,
        available: u64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid world: {0}")]
    InvalidWorld(String),
}

/// Errors raised while loading an experiment or writing its outputs.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("failed to read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("`{key}` out of range: {reason}")]
    OutOfRange { key: String, reason: String },
    #[error("malformed config: {0}")]
    Parse(String),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("cannot write output to {}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("run {run_index} (seed {seed}) of {cell} panicked: {message}")]
    RunPanicked {
        cell: String,
        run_index: usize,
        seed: u64,
        message: String,
    },
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}
