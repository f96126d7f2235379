use super::forces::{ForceField, ForceOutput};
use super::sink::MdSink;
use super::EngineError;
use crate::formats::{EnergyRecord, Frame, Integrator};
use crate::prep::RunInput;
use crate::system::{Structure, Vec3};

/// Step size below which the minimizer gives up.
const MIN_STEP: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub structure: Structure,
    /// Initial record plus one per accepted step; potentials strictly decrease.
    pub energies: Vec<EnergyRecord>,
    pub converged: bool,
    /// Largest per-atom force at the final positions (kJ mol⁻¹ nm⁻¹).
    pub max_force: f64,
    /// Iterations performed, accepted or not.
    pub iterations: u64,
}

fn max_force(forces: &[Vec3<f64>]) -> f64 {
    forces.iter().map(|f| f.norm()).fold(0.0, f64::max)
}

fn em_record(step: u64, out: &ForceOutput) -> EnergyRecord {
    let potential = out.terms.potential();
    EnergyRecord {
        step,
        time: step as f64,
        potential,
        kinetic: 0.0,
        total: potential,
        temperature: 0.0,
        terms: out.terms.named(),
    }
}

/// Steepest descent with an adaptive step: each trial moves every atom along
/// its force, the largest displacement being `h`. Accepted trials grow `h` by
/// 1.2, rejected ones shrink it by 0.2. Stops when the largest force drops
/// below `emtol`, after `nsteps` iterations, or when `h` underflows.
///
/// Energies of the initial and each accepted configuration go to `sink`,
/// followed by a frame of the final configuration.
pub fn minimize(input: &RunInput, sink: &mut dyn MdSink, threads: usize) -> Result<MinimizeResult, EngineError> {
    let params = input.params();
    if params.integrator != Integrator::Steep {
        return Err(EngineError::WrongIntegrator { found: params.integrator.as_str(), expected: "steep" });
    }
    let result = minimize_inner(input, sink, threads);
    if result.is_err() {
        let _ = sink.flush();
    }
    result
}

fn minimize_inner(input: &RunInput, sink: &mut dyn MdSink, threads: usize) -> Result<MinimizeResult, EngineError> {
    let params = input.params();
    let structure = input.structure();
    let simbox = structure.simbox.ok_or_else(|| EngineError::Setup("structure has no box".into()))?;
    let ff = ForceField::new(&structure.atoms, input.topology(), params.rcut)?.with_threads(threads)?;
    let mut x = structure.positions.clone();
    let mut current = ff.compute(&x, &simbox)?;
    let mut energies = vec![em_record(0, &current)];
    sink.energy(&energies[0])?;
    let mut h = params.emstep;
    let mut fmax = max_force(&current.forces);
    let mut converged = fmax < params.emtol;
    let mut iterations = 0;
    while !converged && iterations < params.nsteps && h >= MIN_STEP {
        iterations += 1;
        let scale = h / fmax;
        let trial: Vec<Vec3<f64>> = x.iter().zip(&current.forces).map(|(&p, &f)| p + f * scale).collect();
        let accepted = match ff.compute(&trial, &simbox) {
            Ok(out) if out.terms.potential() < current.terms.potential() => Some(out),
            Ok(_) | Err(EngineError::Singularity { .. }) => None,
            Err(e) => return Err(e),
        };
        match accepted {
            Some(out) => {
                x = trial;
                current = out;
                fmax = max_force(&current.forces);
                converged = fmax < params.emtol;
                let rec = em_record(iterations, &current);
                sink.energy(&rec)?;
                energies.push(rec);
                h *= 1.2;
            }
            None => h *= 0.2,
        }
    }
    sink.frame(&Frame {
        step: iterations,
        time: iterations as f64,
        positions: x.clone(),
        velocities: None,
        forces: Some(current.forces.clone()),
        simbox,
    })?;
    sink.flush()?;
    let mut out = structure.clone();
    out.positions = x;
    out.velocities = None;
    Ok(MinimizeResult { structure: out, energies, converged, max_force: fmax, iterations })
}
