use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use minimd::formats::{parse_gro, parse_pdb, parse_topology, write_gro, write_topology, FormatError, TopologyFile};
use minimd::prep::ForceFieldTable;
use minimd::{Structure, Topology};

use crate::error::CliError;

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::from(FormatError::Io(e)).at(path)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_error(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn write_bytes(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|e| io_error(path, e))
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

/// Reads a gro file, or a PDB file when the extension says so.
pub fn read_structure(path: &Path) -> Result<Structure, CliError> {
    let text = read_text(path)?;
    let is_pdb = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("pdb") || e.eq_ignore_ascii_case("ent"));
    let parsed = if is_pdb { parse_pdb(&text) } else { parse_gro(&text) };
    parsed.map_err(|e| CliError::from(e).at(path))
}

pub fn write_structure(path: &Path, structure: &Structure) -> Result<(), CliError> {
    let text = write_gro(structure).map_err(|e| CliError::from(e).at(path))?;
    write_text(path, &text)
}

/// Coordinates from `gro` with per-atom parameters restored from `top`.
pub fn read_parameterized(gro: &Path, top: &Path) -> Result<(Structure, Topology), CliError> {
    let mut structure = read_structure(gro)?;
    let file = parse_topology(&read_text(top)?).map_err(|e| CliError::from(e).at(top))?;
    file.apply_to(&mut structure).map_err(|e| CliError::from(e).at(top))?;
    Ok((structure, file.topology))
}

pub fn write_top(path: &Path, structure: &Structure, topology: &Topology) -> Result<(), CliError> {
    write_text(path, &write_topology(&TopologyFile::from_structure(structure, topology)))
}

/// The table at `path`, or the built-in one.
pub fn load_forcefield(path: Option<&PathBuf>) -> Result<ForceFieldTable, CliError> {
    match path {
        Some(p) => ForceFieldTable::parse(&read_text(p)?).map_err(|e| CliError::from(e).at(p)),
        None => Ok(ForceFieldTable::builtin()),
    }
}
