//! Readers and writers for every file the pipeline touches.
//!
//! Text formats: PDB (read), gro (read/write), mdp (read), xvg (write) and a
//! plain-text topology. Binary formats are toolkit-defined little-endian
//! containers with a 4-byte magic and a `u32` version: trajectories (`MTRJ`),
//! energies (`MENE`) and run inputs (`MRUN`).

mod container;
mod energy;
mod gro;
mod mdp;
mod pdb;
mod runinput;
mod top;
mod trajectory;
mod xvg;

pub use energy::{read_energy, write_energy, EnergyReader, EnergyRecord, EnergySeries, EnergyWriter, ENERGY_MAGIC};
pub use gro::{parse_gro, write_gro};
pub use mdp::{parse_mdp, Integrator, MdpParams};
pub use pdb::{parse_pdb, parse_pdb_bytes};
pub use runinput::{read_runinput, write_runinput, RUNINPUT_MAGIC};
pub use top::{parse_topology, write_topology, TopologyFile};
pub use trajectory::{read_trajectory, write_trajectory, Frame, TrajectoryReader, TrajectoryWriter, TRAJECTORY_MAGIC};
pub use xvg::XvgData;

/// Version written into every binary container.
pub const FORMAT_VERSION: u32 = 1;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no atoms: input contains no ATOM/HETATM records")]
    NoAtoms,
    #[error("bad magic: expected {expected:?}")]
    BadMagic { expected: &'static str },
    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("truncated file: {0}")]
    Truncated(String),
    #[error("corrupt file: {0}")]
    Corrupt(String),
    #[error("ragged columns: column `{name}` has {len} values, expected {expected}")]
    Ragged { name: String, len: usize, expected: usize },
    #[error("cannot write: {0}")]
    Unwritable(String),
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}
