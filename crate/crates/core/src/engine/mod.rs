//! Force evaluation, energy minimization and leapfrog dynamics.

mod celllist;
mod forces;
pub mod kernels;
mod md;
mod minimize;
mod sink;

pub use celllist::CellList;
pub use forces::{compute_forces, EnergyTerms, ForceField, ForceOutput, PairSearch};
pub use md::{kinetic_energy, leapfrog_step, run_md, temperature, MdSummary, SimState};
pub use minimize::{minimize, MinimizeResult};
pub use sink::{MdSink, MemorySink, WriterSink};

use thiserror::Error;

use crate::formats::FormatError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cutoff {rcut} nm exceeds half the smallest box height ({half_height} nm)")]
    CutoffTooLong { rcut: f64, half_height: f64 },
    #[error("atoms {i} and {j} are {r:.3e} nm apart")]
    Singularity { i: usize, j: usize, r: f64 },
    #[error("non-finite {what} for atom {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("simulation blew up at step {step}: non-finite {what}")]
    BlowUp { step: u64, what: &'static str },
    #[error("run input requests `{found}`, expected `{expected}`")]
    WrongIntegrator { found: &'static str, expected: &'static str },
    #[error("{0}")]
    Setup(String),
    #[error("thread pool: {0}")]
    Threads(String),
    #[error(transparent)]
    Output(#[from] FormatError),
}

/// A dedicated pool of `threads` workers, or `None` (the global pool) when
/// `threads == 0`.
pub(crate) fn thread_pool(threads: usize) -> Result<Option<std::sync::Arc<rayon::ThreadPool>>, EngineError> {
    if threads == 0 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map(|p| Some(std::sync::Arc::new(p)))
        .map_err(|e| EngineError::Threads(e.to_string()))
}
