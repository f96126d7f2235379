//! A small molecular-dynamics pipeline.
//!
//! The stages mirror a classic preparation and simulation workflow:
//! structure conversion with topology generation ([`prep::prepare_topology`]),
//! box definition ([`prep::define_box`]), solvation with SPC water
//! ([`prep::solvate`]), preprocessing into a frozen run input
//! ([`prep::preprocess`]), steepest-descent minimization and leapfrog NVE
//! dynamics ([`engine`]), and analysis of the resulting energy and trajectory
//! files ([`analysis`]).
//!
//! Geometry is generic over the scalar type ([`Real`]); the pipeline types are
//! double precision and exposed through the aliases below.

pub mod analysis;
pub mod engine;
pub mod formats;
pub mod prep;
pub mod real;
pub mod system;

pub use real::Real;
pub use system::{Angle, Atom, Bond, BoxKind, Group, GroupLimits, MoleculeBlock, Structure, Topology};

/// Double-precision vector used by the pipeline.
pub type Vec3 = system::Vec3<f64>;
/// Double-precision periodic box used by the pipeline.
pub type SimBox = system::SimBox<f64>;
/// Single-precision vector.
pub type Vec3f = system::Vec3<f32>;
/// Single-precision periodic box.
pub type SimBoxf = system::SimBox<f32>;

/// Coulomb conversion factor `1/(4πε0)` in kJ mol⁻¹ nm e⁻².
pub const COULOMB_FACTOR: f64 = 138.935458;
/// Boltzmann constant in kJ mol⁻¹ K⁻¹.
pub const BOLTZMANN: f64 = 0.0083144621;

/// A small synthetic eight-chain protein (1008 atoms) in PDB format, used by
/// the benchmark and the tests.
pub const SAMPLE_PROTEIN_PDB: &str = include_str!("../data/lysozyme_like.pdb");
