use std::path::PathBuf;

use clap::Args;
use minimd::engine::{minimize, run_md, WriterSink};
use minimd::formats::{read_runinput, Integrator, MdpParams};

use crate::error::CliError;
use crate::io;

#[derive(Args, Debug)]
pub struct MdrunArgs {
    /// Run input from grompp.
    #[arg(long = "in", short = 's')]
    input: PathBuf,
    /// Trajectory output.
    #[arg(long, short = 'o')]
    traj: Option<PathBuf>,
    /// Energy output.
    #[arg(long, short = 'e')]
    energy: Option<PathBuf>,
    /// Final coordinates (gro).
    #[arg(long, short = 'c')]
    confout: Option<PathBuf>,
    /// Minimize even if the run input asks for dynamics.
    #[arg(long)]
    minimize: bool,
}

pub fn mdrun(args: &MdrunArgs, threads: usize) -> Result<(), CliError> {
    let input = read_runinput(&io::read_bytes(&args.input)?).map_err(|e| CliError::from(e).at(&args.input))?;
    let input = if args.minimize && input.params().integrator != Integrator::Steep {
        input.with_params(MdpParams { integrator: Integrator::Steep, ..input.params().clone() })?
    } else {
        input
    };
    let traj = args.traj.as_deref().map(io::create).transpose()?;
    let energy = args.energy.as_deref().map(io::create).transpose()?;
    let mut sink = WriterSink::new(traj, energy)?;

    let final_structure = match input.params().integrator {
        Integrator::Steep => {
            let r = minimize(&input, &mut sink, threads)?;
            let last = r.energies.last().map_or(f64::NAN, |e| e.potential);
            println!(
                "steepest descent {} after {} iterations: potential {:.4} kJ/mol, max force {:.4} kJ/mol/nm",
                if r.converged { "converged" } else { "stopped" },
                r.iterations,
                last,
                r.max_force
            );
            r.structure
        }
        Integrator::Md => {
            let s = run_md(&input, &mut sink, threads)?;
            let e = &s.final_energy;
            println!(
                "{} steps in {:.3} s ({:.1} steps/s): total {:.4} kJ/mol, T {:.2} K",
                s.steps, s.wall_seconds, s.steps_per_second, e.total, e.temperature
            );
            s.final_structure
        }
    };
    if let Some(path) = &args.confout {
        io::write_structure(path, &final_structure)?;
    }
    Ok(())
}
