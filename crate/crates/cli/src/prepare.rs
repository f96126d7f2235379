use std::path::PathBuf;

use clap::{Args, ValueEnum};
use minimd::formats::{parse_mdp, parse_pdb, write_runinput};
use minimd::prep::{define_box, prepare_topology, preprocess};
use minimd::{BoxKind, SimBox};

use crate::error::CliError;
use crate::io;

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// Input PDB file.
    #[arg(long, short = 'f')]
    pdb: PathBuf,
    /// Output coordinates (gro).
    #[arg(long, short = 'o')]
    gro: PathBuf,
    /// Output topology.
    #[arg(long, short = 'p')]
    top: PathBuf,
    /// Force-field table replacing the built-in one.
    #[arg(long, env = "MINIMD_FF")]
    ff: Option<PathBuf>,
}

pub fn convert(args: &ConvertArgs) -> Result<(), CliError> {
    let ff = io::load_forcefield(args.ff.as_ref())?;
    let text = io::read_text(&args.pdb)?;
    let pdb = parse_pdb(&text).map_err(|e| CliError::from(e).at(&args.pdb))?;
    let (mut structure, topology) = prepare_topology(&pdb, &ff)?;
    // gro needs a box; use the bounding box until editconf sets a real one
    let (lo, hi) = structure.bounds().expect("prepared structures are non-empty");
    let size = (hi - lo).component_max(minimd::Vec3::splat(0.1));
    structure.simbox = Some(SimBox::rectangular(size.x, size.y, size.z)?);
    io::write_structure(&args.gro, &structure)?;
    io::write_top(&args.top, &structure, &topology)?;
    println!(
        "{} atoms, {} bonds, {} angles",
        structure.n_atoms(),
        topology.bonds.len(),
        topology.angles.len()
    );
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum BoxType {
    Cubic,
    Triclinic,
    Octahedron,
}

impl From<BoxType> for BoxKind {
    fn from(b: BoxType) -> Self {
        match b {
            BoxType::Cubic => BoxKind::Cubic,
            BoxType::Triclinic => BoxKind::Triclinic,
            BoxType::Octahedron => BoxKind::Octahedron,
        }
    }
}

#[derive(Args, Debug)]
pub struct EditconfArgs {
    /// Input coordinates (gro or pdb).
    #[arg(long = "in", short = 'f')]
    input: PathBuf,
    /// Output coordinates (gro).
    #[arg(long, short = 'o')]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "cubic")]
    box_type: BoxType,
    /// Minimum distance (nm) between the solute and the box faces.
    #[arg(long, short = 'd', default_value_t = 1.0, allow_negative_numbers = true)]
    d: f64,
}

pub fn editconf(args: &EditconfArgs) -> Result<(), CliError> {
    let structure = io::read_structure(&args.input)?;
    let boxed = define_box(&structure, args.box_type.into(), args.d)?;
    io::write_structure(&args.out, &boxed)?;
    let b = boxed.simbox.expect("define_box sets a box");
    println!("{} box, volume {:.4} nm^3", b.kind(), b.volume());
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum WaterKind {
    Spc,
}

#[derive(Args, Debug)]
pub struct SolvateArgs {
    /// Solute coordinates with a box (gro).
    #[arg(long = "in", short = 'f')]
    input: PathBuf,
    /// Solute topology; rewritten with the added waters unless --top-out is given.
    #[arg(long, short = 'p')]
    top: PathBuf,
    /// Output coordinates (gro).
    #[arg(long, short = 'o')]
    out: PathBuf,
    /// Where to write the solvated topology.
    #[arg(long)]
    top_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "spc")]
    water: WaterKind,
    /// Force-field table replacing the built-in one.
    #[arg(long, env = "MINIMD_FF")]
    ff: Option<PathBuf>,
}

pub fn solvate(args: &SolvateArgs) -> Result<(), CliError> {
    let ff = io::load_forcefield(args.ff.as_ref())?;
    let WaterKind::Spc = args.water;
    let water = ff.water()?;
    let (structure, topology) = io::read_parameterized(&args.input, &args.top)?;
    let simbox = structure.simbox.ok_or(minimd::prep::PrepError::NoBox)?;
    let (out, top, report) = minimd::prep::solvate(&structure, &topology, water, &simbox)?;
    io::write_structure(&args.out, &out)?;
    io::write_top(args.top_out.as_ref().unwrap_or(&args.top), &out, &top)?;
    println!(
        "added {} waters ({} lattice sites, {} overlapping, {} outside)",
        report.added, report.candidates, report.removed_overlap, report.removed_outside
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct GromppArgs {
    /// Run parameters (mdp).
    #[arg(long, short = 'f')]
    mdp: PathBuf,
    /// Coordinates (gro).
    #[arg(long, short = 'c')]
    gro: PathBuf,
    /// Topology.
    #[arg(long, short = 'p')]
    top: PathBuf,
    /// Output run input.
    #[arg(long, short = 'o')]
    out: PathBuf,
    /// Velocity-generation seed, replacing gen_seed from the mdp file.
    #[arg(long)]
    seed: Option<u64>,
}

pub fn grompp(args: &GromppArgs) -> Result<(), CliError> {
    let (mut params, warnings) =
        parse_mdp(&io::read_text(&args.mdp)?).map_err(|e| CliError::from(e).at(&args.mdp))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", args.mdp.display());
    }
    if let Some(seed) = args.seed {
        params.gen_seed = seed;
    }
    let (structure, topology) = io::read_parameterized(&args.gro, &args.top)?;
    let input = preprocess(&structure, &topology, &params)?;
    io::write_bytes(&args.out, &write_runinput(&input)?)?;
    println!(
        "{} atoms, {} bonds, {} angles, integrator {}, {} steps",
        input.structure().n_atoms(),
        input.topology().bonds.len(),
        input.topology().angles.len(),
        params.integrator,
        params.nsteps
    );
    Ok(())
}
