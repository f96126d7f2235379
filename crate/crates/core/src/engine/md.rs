use std::time::Instant;

use super::forces::{EnergyTerms, ForceField};
use super::sink::MdSink;
use super::EngineError;
use crate::formats::{EnergyRecord, Frame, Integrator};
use crate::prep::RunInput;
use crate::system::{SimBox, Structure, Vec3};
use crate::BOLTZMANN;

/// Dynamic state of a leapfrog run. Velocities are at the half step
/// `t − dt/2`; forces and `terms` belong to the current positions.
#[derive(Debug, Clone)]
pub struct SimState {
    pub positions: Vec<Vec3<f64>>,
    pub velocities: Vec<Vec3<f64>>,
    pub forces: Vec<Vec3<f64>>,
    pub terms: EnergyTerms,
    pub simbox: SimBox<f64>,
    pub step: u64,
    pub time: f64,
}

impl SimState {
    /// Missing velocities start at zero.
    pub fn new(structure: &Structure, ff: &ForceField) -> Result<Self, EngineError> {
        let simbox = structure.simbox.ok_or_else(|| EngineError::Setup("structure has no box".into()))?;
        let positions = structure.positions.clone();
        let velocities = structure.velocities.clone().unwrap_or_else(|| vec![Vec3::zero(); positions.len()]);
        let out = ff.compute(&positions, &simbox)?;
        Ok(SimState { positions, velocities, forces: out.forces, terms: out.terms, simbox, step: 0, time: 0.0 })
    }

    pub fn frame(&self) -> Frame {
        Frame {
            step: self.step,
            time: self.time,
            positions: self.positions.clone(),
            velocities: Some(self.velocities.clone()),
            forces: Some(self.forces.clone()),
            simbox: self.simbox,
        }
    }
}

pub fn kinetic_energy(masses: &[f64], velocities: &[Vec3<f64>]) -> f64 {
    0.5 * masses.iter().zip(velocities).map(|(&m, v)| m * v.norm2()).sum::<f64>()
}

/// Instantaneous temperature with `3N − 3` degrees of freedom.
pub fn temperature(kinetic: f64, n_atoms: usize) -> f64 {
    let ndf = (3 * n_atoms).saturating_sub(3).max(1) as f64;
    2.0 * kinetic / (ndf * BOLTZMANN)
}

/// Kinetic energy at the current time from the average of the two half-step
/// velocities around it, without changing the state.
fn on_step_kinetic(state: &SimState, masses: &[f64], dt: f64) -> f64 {
    let mut ke = 0.0;
    for i in 0..masses.len() {
        let v_new = state.velocities[i] + state.forces[i] * (dt / masses[i]);
        let v = (state.velocities[i] + v_new) * 0.5;
        ke += 0.5 * masses[i] * v.norm2();
    }
    ke
}

/// One kick-drift step: `v(t+dt/2) = v(t−dt/2) + F(t)/m·dt`,
/// `x(t+dt) = x(t) + v(t+dt/2)·dt`, then forces at the new positions.
///
/// Returns the kinetic energy at `t` (average of the half-step velocities).
pub fn leapfrog_step(state: &mut SimState, ff: &ForceField, masses: &[f64], dt: f64) -> Result<f64, EngineError> {
    let step = state.step;
    let mut ke = 0.0;
    for i in 0..masses.len() {
        let v_old = state.velocities[i];
        let v_new = v_old + state.forces[i] * (dt / masses[i]);
        let v_avg = (v_old + v_new) * 0.5;
        ke += 0.5 * masses[i] * v_avg.norm2();
        state.velocities[i] = v_new;
        state.positions[i] += v_new * dt;
        if !state.positions[i].is_finite() || !v_new.is_finite() {
            return Err(EngineError::BlowUp { step, what: "coordinates" });
        }
    }
    let out = ff.compute(&state.positions, &state.simbox).map_err(|e| match e {
        EngineError::NonFinite { .. } => EngineError::BlowUp { step, what: "coordinates" },
        other => other,
    })?;
    if !out.terms.potential().is_finite() || out.forces.iter().any(|f| !f.is_finite()) {
        return Err(EngineError::BlowUp { step: step + 1, what: "forces" });
    }
    state.forces = out.forces;
    state.terms = out.terms;
    state.step += 1;
    state.time += dt;
    Ok(ke)
}

#[derive(Debug, Clone)]
pub struct MdSummary {
    pub steps: u64,
    /// Seconds spent in the integration loop.
    pub wall_seconds: f64,
    pub steps_per_second: f64,
    pub final_energy: EnergyRecord,
    /// Final positions and half-step velocities.
    pub final_structure: Structure,
}

fn record(state: &SimState, kinetic: f64, n_atoms: usize) -> EnergyRecord {
    let potential = state.terms.potential();
    EnergyRecord {
        step: state.step,
        time: state.time,
        potential,
        kinetic,
        total: potential + kinetic,
        temperature: temperature(kinetic, n_atoms),
        terms: state.terms.named(),
    }
}

/// Leapfrog NVE dynamics for `params.nsteps` steps. Frames are emitted every
/// `nstxout` steps and energies every `nstenergy` steps, both including step
/// 0 and the last step when it falls on the interval. On error the sink is
/// flushed so that everything written so far stays readable.
pub fn run_md(input: &RunInput, sink: &mut dyn MdSink, threads: usize) -> Result<MdSummary, EngineError> {
    let params = input.params();
    if params.integrator != Integrator::Md {
        return Err(EngineError::WrongIntegrator { found: params.integrator.as_str(), expected: "md" });
    }
    let result = run_md_inner(input, sink, threads);
    if result.is_err() {
        let _ = sink.flush();
    }
    result
}

fn run_md_inner(input: &RunInput, sink: &mut dyn MdSink, threads: usize) -> Result<MdSummary, EngineError> {
    let params = input.params();
    let structure = input.structure();
    let ff = ForceField::new(&structure.atoms, input.topology(), params.rcut)?.with_threads(threads)?;
    let masses: Vec<f64> = structure.atoms.iter().map(|a| a.mass).collect();
    let n = masses.len();
    let mut state = SimState::new(structure, &ff)?;
    let dt = params.dt;
    let started = Instant::now();
    let final_energy = loop {
        let step = state.step;
        if step % params.nstxout == 0 {
            sink.frame(&state.frame())?;
        }
        if step == params.nsteps {
            let rec = record(&state, on_step_kinetic(&state, &masses, dt), n);
            if step % params.nstenergy == 0 {
                sink.energy(&rec)?;
            }
            break rec;
        }
        let before = state.clone_energies();
        let ke = leapfrog_step(&mut state, &ff, &masses, dt)?;
        if step % params.nstenergy == 0 {
            sink.energy(&before.into_record(ke, n))?;
        }
    };
    let wall_seconds = started.elapsed().as_secs_f64();
    sink.flush()?;
    let mut final_structure = structure.clone();
    final_structure.positions = state.positions;
    final_structure.velocities = Some(state.velocities);
    Ok(MdSummary {
        steps: params.nsteps,
        wall_seconds,
        steps_per_second: if wall_seconds > 0.0 { params.nsteps as f64 / wall_seconds } else { f64::INFINITY },
        final_energy,
        final_structure,
    })
}

/// Step, time and potential terms captured before a step advances the state.
struct Snapshot {
    step: u64,
    time: f64,
    terms: EnergyTerms,
}

impl Snapshot {
    fn into_record(self, kinetic: f64, n_atoms: usize) -> EnergyRecord {
        let potential = self.terms.potential();
        EnergyRecord {
            step: self.step,
            time: self.time,
            potential,
            kinetic,
            total: potential + kinetic,
            temperature: temperature(kinetic, n_atoms),
            terms: self.terms.named(),
        }
    }
}

impl SimState {
    fn clone_energies(&self) -> Snapshot {
        Snapshot { step: self.step, time: self.time, terms: self.terms }
    }
}
