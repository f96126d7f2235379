use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use minimd::analysis::{run_benchmark, BenchmarkInput};
use minimd::formats::{parse_pdb, Integrator, MdpParams};
use minimd::prep::{define_box, prepare_topology, preprocess, solvate, water_box, ForceFieldTable};
use minimd::{BoxKind, Structure, Topology};

use crate::error::CliError;
use crate::io;

/// One benchmark system.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    /// A cubic box of this many waters.
    Water(usize),
    /// The bundled sample protein, solvated.
    Protein,
    /// A PDB file, solvated.
    Pdb(PathBuf),
}

impl FromStr for SystemSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("protein") {
            return Ok(SystemSpec::Protein);
        }
        match s.split_once(':') {
            Some(("water", n)) => match n.parse::<usize>() {
                Ok(n) if n > 0 => Ok(SystemSpec::Water(n)),
                _ => Err(format!("`{s}`: water count must be a positive integer")),
            },
            Some(("pdb", path)) if !path.is_empty() => Ok(SystemSpec::Pdb(PathBuf::from(path))),
            _ => Err(format!("unknown system `{s}` (expected water:N, protein or pdb:PATH)")),
        }
    }
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Systems to time, comma separated: water:N, protein, pdb:PATH.
    #[arg(long, value_delimiter = ',', default_value = "water:216,water:729,water:1728")]
    systems: Vec<SystemSpec>,
    /// Repeats per system; the median wall time is reported.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 200)]
    em_steps: u64,
    #[arg(long, default_value_t = 500)]
    md_steps: u64,
    /// Nonbonded cutoff (nm).
    #[arg(long, default_value_t = 0.9)]
    rcut: f64,
    /// Solute-to-face distance (nm) for solvated systems.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Velocity-generation seed.
    #[arg(long, default_value_t = 1993)]
    seed: u64,
    /// Write the table here as well as to stdout.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Wall time against atom count (xvg).
    #[arg(long)]
    xvg: Option<PathBuf>,
    /// Force-field table replacing the built-in one.
    #[arg(long, env = "MINIMD_FF")]
    ff: Option<PathBuf>,
}

fn solvated(pdb: &str, ff: &ForceFieldTable, d: f64) -> Result<(Structure, Topology), CliError> {
    let (s, t) = prepare_topology(&parse_pdb(pdb)?, ff)?;
    let boxed = define_box(&s, BoxKind::Cubic, d)?;
    let simbox = boxed.simbox.expect("define_box sets a box");
    let (s, t, _) = solvate(&boxed, &t, ff.water()?, &simbox)?;
    Ok((s, t))
}

fn build(spec: &SystemSpec, args: &BenchArgs, ff: &ForceFieldTable) -> Result<BenchmarkInput, CliError> {
    let (label, (structure, topology)) = match spec {
        SystemSpec::Water(n) => (format!("water:{n}"), water_box(*n, ff.water()?)?),
        SystemSpec::Protein => ("protein".to_string(), solvated(minimd::SAMPLE_PROTEIN_PDB, ff, args.d)?),
        SystemSpec::Pdb(path) => (path.display().to_string(), solvated(&io::read_text(path)?, ff, args.d)?),
    };
    let em = MdpParams { integrator: Integrator::Steep, nsteps: args.em_steps, rcut: args.rcut, ..MdpParams::default() };
    let md = MdpParams {
        integrator: Integrator::Md,
        nsteps: args.md_steps,
        rcut: args.rcut,
        nstxout: args.md_steps.max(1),
        nstenergy: 10,
        gen_vel: true,
        gen_seed: args.seed,
        ..MdpParams::default()
    };
    let label_err = |e: minimd::prep::PrepError| CliError::usage(format!("{label}: {e}"));
    Ok(BenchmarkInput {
        minimize: preprocess(&structure, &topology, &em).map_err(label_err)?,
        dynamics: preprocess(&structure, &topology, &md).map_err(label_err)?,
        label,
    })
}

pub fn bench(args: &BenchArgs, threads: usize) -> Result<(), CliError> {
    if args.systems.is_empty() {
        return Err(CliError::usage("no systems given"));
    }
    let ff = io::load_forcefield(args.ff.as_ref())?;
    let inputs = args.systems.iter().map(|s| build(s, args, &ff)).collect::<Result<Vec<_>, _>>()?;
    let report = run_benchmark(&inputs, args.repeats, threads);
    let table = report.table();
    print!("{table}");
    if let Some(path) = &args.table {
        io::write_text(path, &table)?;
    }
    if let Some(path) = &args.xvg {
        io::write_text(path, &report.xvg().to_xvg()?)?;
    }
    if report.rows.iter().all(|r| r.error.is_some()) {
        return Err(CliError { status: crate::error::ExitStatus::Numerical, message: "every system failed".into() });
    }
    Ok(())
}
