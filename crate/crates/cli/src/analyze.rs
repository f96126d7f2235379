use std::path::{Path, PathBuf};

use clap::Args;
use minimd::analysis::{extract_energy, rmsd_series};
use minimd::formats::{read_energy, read_runinput, read_trajectory, RUNINPUT_MAGIC};
use minimd::{Group, Structure};

use crate::error::CliError;
use crate::io;

#[derive(Args, Debug)]
pub struct EnergyArgs {
    /// Energy file from mdrun.
    #[arg(long = "in", short = 'f')]
    input: PathBuf,
    /// Terms to extract, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "Potential,Kinetic,Total,Temperature")]
    terms: Vec<String>,
    /// Output xvg.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

pub fn energy(args: &EnergyArgs) -> Result<(), CliError> {
    let series = read_energy(&io::read_bytes(&args.input)?).map_err(|e| CliError::from(e).at(&args.input))?;
    let terms: Vec<&str> = args.terms.iter().map(|t| t.trim()).collect();
    let data = extract_energy(&series, &terms)?;
    println!("{} records", data.x.len());
    for (name, values) in &data.columns {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let drift = values.last().unwrap_or(&mean) - values.first().unwrap_or(&mean);
        println!("{name:<12} average {mean:14.4}  rmsd {sd:12.4}  drift {drift:12.4}");
    }
    if let Some(path) = &args.out {
        io::write_text(path, &data.to_xvg()?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct RmsArgs {
    /// Trajectory from mdrun.
    #[arg(long, short = 'f')]
    traj: PathBuf,
    /// Reference structure: a run input, gro or pdb file.
    #[arg(long = "ref", short = 's')]
    reference: PathBuf,
    /// Topology supplying masses when the reference is a coordinate file.
    #[arg(long, short = 'p')]
    top: Option<PathBuf>,
    /// Atom group: System, Protein, Backbone, C-alpha, Water or non-Water.
    #[arg(long, default_value = "Backbone")]
    group: String,
    /// Superpose each frame on the reference before measuring.
    #[arg(long)]
    fit: bool,
    /// Weight all atoms equally instead of by mass.
    #[arg(long)]
    no_mass: bool,
    /// Output xvg.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

fn read_reference(path: &Path, top: Option<&PathBuf>) -> Result<Structure, CliError> {
    let bytes = io::read_bytes(path)?;
    if bytes.starts_with(RUNINPUT_MAGIC) {
        let input = read_runinput(&bytes).map_err(|e| CliError::from(e).at(path))?;
        return Ok(input.into_parts().0);
    }
    match top {
        Some(top) => Ok(io::read_parameterized(path, top)?.0),
        None => io::read_structure(path),
    }
}

pub fn rms(args: &RmsArgs) -> Result<(), CliError> {
    let frames = read_trajectory(&io::read_bytes(&args.traj)?).map_err(|e| CliError::from(e).at(&args.traj))?;
    let reference = read_reference(&args.reference, args.top.as_ref())?;
    let group = Group::select(&reference, &args.group)?;
    let series = rmsd_series(&frames, &reference, &group, args.fit, !args.no_mass)?;
    let max = series.values.iter().copied().fold(0.0, f64::max);
    println!(
        "{} frames, group {} ({} atoms){}, final RMSD {:.4} nm, max {:.4} nm",
        series.values.len(),
        series.group,
        group.len(),
        if series.fit { ", fitted" } else { "" },
        series.values.last().copied().unwrap_or(0.0),
        max
    );
    if let Some(path) = &args.out {
        io::write_text(path, &series.to_xvg().to_xvg()?)?;
    }
    Ok(())
}
