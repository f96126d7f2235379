use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::PrepError;
use crate::formats::MdpParams;
use crate::system::{Atom, Structure, Topology, Vec3};
use crate::BOLTZMANN;

/// Structure, expanded topology and parameters, validated together. Built
/// only by [`preprocess`] or [`RunInput::from_parts`], so every instance
/// satisfies the run invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct RunInput {
    structure: Structure,
    topology: Topology,
    params: MdpParams,
}

impl RunInput {
    /// Validates already-expanded parts without modifying them.
    pub fn from_parts(structure: Structure, topology: Topology, params: MdpParams) -> Result<Self, PrepError> {
        params.check().map_err(PrepError::Parameters)?;
        structure.check_lengths()?;
        if structure.is_empty() {
            return Err(PrepError::Empty("structure is empty"));
        }
        let simbox = structure.simbox.ok_or(PrepError::NoBox)?;
        if topology.n_atoms() != structure.n_atoms() {
            return Err(PrepError::AtomCountMismatch { topology: topology.n_atoms(), structure: structure.n_atoms() });
        }
        if !topology.expanded {
            return Err(PrepError::Parameters("run input topology must be in atomic form".into()));
        }
        topology.validate(structure.n_atoms())?;
        for (index, a) in structure.atoms.iter().enumerate() {
            check_atom(index, a)?;
        }
        let bad = |index: usize, what: &str| PrepError::BadAtom {
            index,
            name: structure.atoms[index].name.clone(),
            reason: format!("non-finite {what}"),
        };
        if let Some(i) = structure.positions.iter().position(|p| !p.is_finite()) {
            return Err(bad(i, "position"));
        }
        if let Some(v) = &structure.velocities {
            if let Some(i) = v.iter().position(|p| !p.is_finite()) {
                return Err(bad(i, "velocity"));
            }
        }
        let half_height = simbox.min_height() / 2.0;
        if params.rcut >= half_height {
            return Err(PrepError::CutoffTooLong { rcut: params.rcut, half_height });
        }
        Ok(RunInput { structure, topology, params })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn params(&self) -> &MdpParams {
        &self.params
    }

    pub fn into_parts(self) -> (Structure, Topology, MdpParams) {
        (self.structure, self.topology, self.params)
    }

    /// Same input with new coordinates (and velocities), revalidated.
    pub fn with_structure(&self, structure: Structure) -> Result<Self, PrepError> {
        RunInput::from_parts(structure, self.topology.clone(), self.params.clone())
    }

    /// Same input with different parameters, revalidated.
    pub fn with_params(&self, params: MdpParams) -> Result<Self, PrepError> {
        RunInput::from_parts(self.structure.clone(), self.topology.clone(), params)
    }
}

fn check_atom(index: usize, a: &Atom) -> Result<(), PrepError> {
    let fail = |reason: String| Err(PrepError::BadAtom { index, name: a.name.clone(), reason });
    if !(a.mass > 0.0) || !a.mass.is_finite() {
        return fail(format!("mass must be positive, got {}", a.mass));
    }
    if !a.charge.is_finite() {
        return fail("charge is not finite".into());
    }
    if !(a.epsilon >= 0.0) || !a.epsilon.is_finite() {
        return fail(format!("epsilon must be non-negative, got {}", a.epsilon));
    }
    // sigma only matters when the atom has a Lennard-Jones well
    if (a.epsilon > 0.0 && !(a.sigma > 0.0)) || !a.sigma.is_finite() || a.sigma < 0.0 {
        return fail(format!("sigma must be positive, got {}", a.sigma));
    }
    Ok(())
}

/// Maxwell–Boltzmann velocities at `temperature`: Gaussian draws from a
/// seeded generator, center-of-mass motion removed, then rescaled so the
/// kinetic temperature (3N − 3 degrees of freedom) equals `temperature`
/// exactly.
pub fn generate_velocities(masses: &[f64], temperature: f64, seed: u64) -> Vec<Vec3<f64>> {
    let n = masses.len();
    if n == 0 || temperature <= 0.0 {
        return vec![Vec3::zero(); n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut v: Vec<Vec3<f64>> = masses
        .iter()
        .map(|&m| {
            let s = (BOLTZMANN * temperature / m).sqrt();
            Vec3::new(unit.sample(&mut rng), unit.sample(&mut rng), unit.sample(&mut rng)) * s
        })
        .collect();
    let total_mass: f64 = masses.iter().sum();
    let momentum: Vec3<f64> = masses.iter().zip(&v).map(|(&m, &vi)| vi * m).sum();
    let drift = momentum / total_mass;
    for vi in &mut v {
        *vi -= drift;
    }
    let ndf = (3 * n).saturating_sub(3);
    if ndf == 0 {
        return vec![Vec3::zero(); n];
    }
    let ke: f64 = 0.5 * masses.iter().zip(&v).map(|(&m, vi)| m * vi.norm2()).sum::<f64>();
    let target = 0.5 * ndf as f64 * BOLTZMANN * temperature;
    if ke > 0.0 {
        let scale = (target / ke).sqrt();
        for vi in &mut v {
            *vi = *vi * scale;
        }
    }
    v
}

/// Combines coordinates, topology and parameters into a run input: expands
/// the topology to atomic form, validates everything, and generates
/// velocities when requested. Deterministic for a fixed seed, and applying it
/// to its own output gives the same result.
pub fn preprocess(structure: &Structure, topology: &Topology, params: &MdpParams) -> Result<RunInput, PrepError> {
    let mut structure = structure.clone();
    if params.gen_vel {
        let masses: Vec<f64> = structure.atoms.iter().map(|a| a.mass).collect();
        if let Some((index, a)) = structure.atoms.iter().enumerate().find(|(_, a)| !(a.mass > 0.0)) {
            return Err(PrepError::BadAtom { index, name: a.name.clone(), reason: format!("mass must be positive, got {}", a.mass) });
        }
        structure.velocities = Some(generate_velocities(&masses, params.gen_temp, params.gen_seed));
    }
    if topology.n_atoms() != structure.n_atoms() {
        return Err(PrepError::AtomCountMismatch { topology: topology.n_atoms(), structure: structure.n_atoms() });
    }
    RunInput::from_parts(structure, topology.expand(), params.clone())
}
