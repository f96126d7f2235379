mod analyze;
mod bench;
mod error;
mod io;
mod prepare;
mod run;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::{CliError, ExitStatus};

#[derive(Parser, Debug)]
#[command(name = "minimd", version, about = "Prepare, run and analyze small molecular-dynamics simulations")]
struct Cli {
    /// Worker threads for force evaluation (0 = all cores; 1 is the reference mode).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a PDB file to gro coordinates and a topology.
    Convert(prepare::ConvertArgs),
    /// Put the structure in a periodic box.
    Editconf(prepare::EditconfArgs),
    /// Fill the box with water around the solute.
    Solvate(prepare::SolvateArgs),
    /// Combine coordinates, topology and run parameters into a run input.
    Grompp(prepare::GromppArgs),
    /// Run energy minimization or dynamics.
    Mdrun(run::MdrunArgs),
    /// Extract energy terms from an energy file.
    Energy(analyze::EnergyArgs),
    /// RMSD of a trajectory against a reference structure.
    Rms(analyze::RmsArgs),
    /// Time minimization and dynamics over a set of systems.
    Bench(bench::BenchArgs),
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let threads = cli.threads;
    match cli.command {
        Command::Convert(args) => prepare::convert(&args),
        Command::Editconf(args) => prepare::editconf(&args),
        Command::Solvate(args) => prepare::solvate(&args),
        Command::Grompp(args) => prepare::grompp(&args),
        Command::Mdrun(args) => run::mdrun(&args, threads),
        Command::Energy(args) => analyze::energy(&args),
        Command::Rms(args) => analyze::rms(&args),
        Command::Bench(args) => bench::bench(&args, threads),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(ExitStatus::Usage as u8),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::from(ExitStatus::Success as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status as u8)
        }
    }
}
