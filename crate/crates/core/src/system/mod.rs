//! Shared domain types: vectors, periodic boxes, atoms, structures, groups
//! and topologies.

mod group;
mod simbox;
mod structure;
mod topology;
mod vec3;

pub use group::{Group, GroupLimits};
pub use simbox::{BoxKind, SimBox};
pub use structure::{Atom, Structure};
pub use topology::{Angle, Bond, MoleculeBlock, Topology, TopologyError, WATER_RESIDUE};
pub use vec3::Vec3;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("box size must be positive, got {0}")]
    NonPositiveSize(f64),
    #[error("degenerate box: {0}")]
    DegenerateBox(String),
    #[error("cubic box must have equal diagonal and zero off-diagonal elements")]
    NotCubic,
    #[error("unknown box type `{0}` (expected triclinic, cubic or octahedron)")]
    UnknownBoxKind(String),
    #[error("structure has {atoms} atoms but {what} has {len} entries")]
    LengthMismatch { atoms: usize, what: &'static str, len: usize },
    #[error("group `{name}`: {reason}")]
    InvalidGroup { name: String, reason: String },
    #[error("unknown group `{0}` (available: System, Protein, Backbone, C-alpha, Water, non-Water)")]
    UnknownGroup(String),
}
