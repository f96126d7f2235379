//! System preparation: topology generation, box setup, solvation and
//! preprocessing into a validated run input.

mod editconf;
mod forcefield;
mod grompp;
mod insert;
mod solvate;
mod topogen;

pub use editconf::define_box;
pub use forcefield::{ChargeRule, ElementParams, ForceFieldTable, WaterModel, WaterSite};
pub use grompp::{generate_velocities, preprocess, RunInput};
pub use insert::insert_random;
pub use solvate::{solvate, water_box, SolvateReport, LATTICE_SPACING};
pub use topogen::{prepare_topology, ANGLE_K, BOND_K, BOND_TOLERANCE, MIN_PAIR_DISTANCE};

use thiserror::Error;

use crate::system::{SystemError, TopologyError};

#[derive(Debug, Error)]
pub enum PrepError {
    #[error("no atoms: {0}")]
    Empty(&'static str),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("force-field table: {0}")]
    ForceField(String),
    #[error("atoms {i} and {j} are only {distance:.4} nm apart; the structure looks corrupt")]
    Overlap { i: usize, j: usize, distance: f64 },
    #[error("box too small for even one water (smallest height {height:.3} nm)")]
    BoxTooSmall { height: f64 },
    #[error("solute atom {0} lies outside the box")]
    OutsideBox(usize),
    #[error("structure has no box")]
    NoBox,
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("topology describes {topology} atoms, structure has {structure}")]
    AtomCountMismatch { topology: usize, structure: usize },
    #[error("atom {index} ({name}): {reason}")]
    BadAtom { index: usize, name: String, reason: String },
    #[error("cutoff exceeds half box height: rcut {rcut} nm, half the smallest height is {half_height:.4} nm")]
    CutoffTooLong { rcut: f64, half_height: f64 },
    #[error("could not place molecule {placed} of {requested} after {attempts} attempts")]
    InsertFailed { placed: usize, requested: usize, attempts: usize },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}
