//! Energy extraction, RMSD with optimal superposition, and the timing
//! benchmark.

mod bench;
mod energy;
mod rms;

pub use bench::{chain_count, run_benchmark, BenchmarkInput, BenchmarkReport, BenchmarkRow};
pub use energy::extract_energy;
pub use rms::{kabsch_fit, rmsd, rmsd_series, KabschFit, RmsdSeries};

use thiserror::Error;

use crate::system::SystemError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("unknown energy term `{name}`; available: {}", available.join(", "))]
    UnknownTerm { name: String, available: Vec<String> },
    #[error("no {0}")]
    Empty(&'static str),
    #[error("degenerate point set: {0}")]
    Degenerate(String),
    #[error("{what}: expected {expected} atoms, found {found}")]
    AtomCount { what: String, expected: usize, found: usize },
    #[error(transparent)]
    System(#[from] SystemError),
}
