use std::collections::HashSet;

use super::{parse_err, FormatError};
use crate::system::{Atom, Structure, Vec3};

fn field(line: &[u8], start: usize, end: usize) -> String {
    let end = end.min(line.len());
    if start >= end {
        return String::new();
    }
    String::from_utf8_lossy(&line[start..end]).trim().to_string()
}

/// Parses ATOM/HETATM records of the first model. Coordinates are converted
/// from Å to nm.
pub fn parse_pdb(text: &str) -> Result<Structure, FormatError> {
    parse_pdb_bytes(text.as_bytes())
}

/// Byte-level variant of [`parse_pdb`]; accepts arbitrary input without panicking.
pub fn parse_pdb_bytes(data: &[u8]) -> Result<Structure, FormatError> {
    let mut atoms = Vec::new();
    let mut positions = Vec::new();
    let mut title = String::new();
    let mut seen_alt: HashSet<(u8, String, String, String)> = HashSet::new();

    for (lineno, raw) in data.split(|&b| b == b'\n').enumerate() {
        let line = raw.strip_suffix(b"\r").unwrap_or(raw);
        let lineno = lineno + 1;
        let is_end = line.starts_with(b"END") && line[3..].iter().all(|c| c.is_ascii_whitespace());
        if is_end || line.starts_with(b"ENDMDL") {
            break;
        }
        if line.starts_with(b"TITLE") && title.is_empty() {
            title = field(line, 10, 80);
            continue;
        }
        if !(line.starts_with(b"ATOM") || line.starts_with(b"HETATM")) {
            continue;
        }
        if line.len() < 54 {
            return Err(parse_err(lineno, format!("atom record too short ({} columns, need 54)", line.len())));
        }
        let name = field(line, 12, 16);
        let alt_loc = line[16];
        let residue_name = field(line, 17, 20);
        let chain = line[21];
        let res_field = field(line, 22, 27);
        if alt_loc != b' ' {
            let key = (chain, res_field.clone(), residue_name.clone(), name.clone());
            if !seen_alt.insert(key) {
                continue;
            }
        }
        let residue_seq = field(line, 22, 26).parse::<i32>().unwrap_or(0);
        let mut xyz = [0.0; 3];
        for (k, v) in xyz.iter_mut().enumerate() {
            let (a, b) = (30 + 8 * k, 38 + 8 * k);
            let s = field(line, a, b);
            let value: f64 = s.parse().map_err(|_| {
                parse_err(lineno, format!("malformed {} coordinate `{s}` in columns {}-{}", ["x", "y", "z"][k], a + 1, b))
            })?;
            if !value.is_finite() {
                return Err(parse_err(lineno, format!("non-finite coordinate `{s}`")));
            }
            *v = value / 10.0;
        }
        let mut element = field(line, 76, 78);
        element.retain(|c| c.is_ascii_alphabetic());
        if element.is_empty() {
            element = Atom::element_from_name(&name);
        } else {
            let mut chars = element.chars();
            let first = chars.next().map(|c| c.to_ascii_uppercase()).unwrap_or_default();
            element = std::iter::once(first).chain(chars.map(|c| c.to_ascii_lowercase())).collect();
        }
        atoms.push(Atom::new(&name, &element, &residue_name, residue_seq));
        positions.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
    }
    if atoms.is_empty() {
        return Err(FormatError::NoAtoms);
    }
    Ok(Structure { title, atoms, positions, velocities: None, simbox: None })
}
