//! Experiment driver: configuration, admission filters, the resumable
//! (circuit × k × strategy) sweep and the summary artifacts.

use std::path::PathBuf;

use thiserror::Error;

use crate::generators::GenError;
use crate::partition::PartitionError;
use crate::stats::StatsError;

pub mod config;
pub mod record;
pub mod summary;
pub mod sweep;

pub use config::{admit, admit_counts, distortion_preset, Admission, BenchConfig, CircuitSource};
pub use record::{job_key, BenchRecord, Status, RESULTS_HEADER};
pub use summary::{read_results, summarize, Summary};
pub use sweep::{load_circuits, run_sweep, JOURNAL_FILE, RESULTS_FILE};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("config syntax: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("results csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("circuit id `{0}` appears more than once")]
    DuplicateCircuit(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> HarnessError {
    let path = path.into();
    move |source| HarnessError::Io { path, source }
}
