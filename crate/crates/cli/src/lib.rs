//! Experiment runner: config loading, runs, audits and metric reports.

pub mod commands;
pub mod config;
pub mod files;
pub mod problem;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Engine(#[from] ipro_core::engine::EngineError),
    #[error(transparent)]
    Oracle(#[from] ipro_core::oracle::OracleError),
    #[error(transparent)]
    Momdp(#[from] ipro_core::momdp::MomdpError),
    #[error(transparent)]
    Metrics(#[from] ipro_core::metrics::MetricsError),
    #[error(transparent)]
    Geometry(#[from] ipro_core::geometry::GeometryError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
