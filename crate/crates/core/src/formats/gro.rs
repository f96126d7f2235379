use std::fmt::Write as _;

use super::{parse_err, FormatError};
use crate::system::{Atom, SimBox, Structure, Vec3};

const MAX_COORD: f64 = 9999.9995;
const MIN_COORD: f64 = -999.9995;

/// Writes a gromos87 structure. Velocities are written when present.
///
/// Rectangular boxes get a three-value box line; anything else gets the
/// nine-value form `v1x v2y v3z v1y v1z v2x v2z v3x v3y`.
pub fn write_gro(structure: &Structure) -> Result<String, FormatError> {
    let simbox = structure
        .simbox
        .as_ref()
        .ok_or_else(|| FormatError::Unwritable("gro output needs a simulation box".into()))?;
    structure.check_lengths().map_err(|e| FormatError::Unwritable(e.to_string()))?;
    if let Some(p) = structure
        .positions
        .iter()
        .find(|p| [p.x, p.y, p.z].iter().any(|&c| !(MIN_COORD..MAX_COORD).contains(&c)))
    {
        return Err(FormatError::Unwritable(format!("coordinate {p:?} does not fit the 8.3 field")));
    }
    let mut out = String::with_capacity(64 + 69 * structure.n_atoms());
    let title = structure.title.lines().next().unwrap_or("");
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{:5}", structure.n_atoms());
    for (i, (atom, p)) in structure.atoms.iter().zip(&structure.positions).enumerate() {
        let resnr = atom.residue_seq.rem_euclid(100_000);
        let _ = write!(
            out,
            "{:>5}{:<5}{:>5}{:>5}{:8.3}{:8.3}{:8.3}",
            resnr,
            truncate(&atom.residue_name, 5),
            truncate(&atom.name, 5),
            (i + 1) % 100_000,
            p.x,
            p.y,
            p.z
        );
        if let Some(v) = &structure.velocities {
            let v = v[i];
            let _ = write!(out, "{:8.4}{:8.4}{:8.4}", v.x, v.y, v.z);
        }
        out.push('\n');
    }
    let [a, b, c] = *simbox.vectors();
    if simbox.is_rectangular() {
        let _ = writeln!(out, "{:10.5}{:10.5}{:10.5}", a.x, b.y, c.z);
    } else {
        let _ = writeln!(
            out,
            "{:10.5}{:10.5}{:10.5}{:10.5}{:10.5}{:10.5}{:10.5}{:10.5}{:10.5}",
            a.x, b.y, c.z, a.y, a.z, b.x, b.z, c.x, c.y
        );
    }
    Ok(out)
}

fn truncate(s: &str, n: usize) -> &str {
    match s.char_indices().nth(n) {
        Some((idx, _)) => &s[..idx],
        None => s,
    }
}

fn fixed<'a>(line: &'a str, start: usize, end: usize, lineno: usize, what: &str) -> Result<&'a str, FormatError> {
    line.get(start..end)
        .ok_or_else(|| parse_err(lineno, format!("line too short for {what} (columns {}-{end})", start + 1)))
}

fn number(s: &str, lineno: usize, what: &str) -> Result<f64, FormatError> {
    let v: f64 = s.trim().parse().map_err(|_| parse_err(lineno, format!("malformed {what} `{}`", s.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(lineno, format!("non-finite {what}")))
    }
}

/// Parses a gromos87 structure. The coordinate field width is taken from the
/// spacing of decimal points on the first atom line, as the format allows
/// variable precision.
pub fn parse_gro(text: &str) -> Result<Structure, FormatError> {
    let mut lines = text.lines();
    let title = lines.next().ok_or_else(|| parse_err(1, "empty file"))?.trim_end().to_string();
    let count_line = lines.next().ok_or_else(|| parse_err(2, "missing atom-count line"))?;
    let n: usize = count_line.trim().parse().map_err(|_| parse_err(2, format!("malformed atom count `{}`", count_line.trim())))?;
    let mut atoms = Vec::with_capacity(n);
    let mut positions = Vec::with_capacity(n);
    let mut velocities: Vec<Vec3<f64>> = Vec::new();
    let mut width = 0usize;
    for i in 0..n {
        let lineno = i + 3;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(lineno, format!("atom count says {n} but the file ends after {i} atoms")))?;
        if !line.is_ascii() {
            return Err(parse_err(lineno, "non-ASCII atom line"));
        }
        if i == 0 {
            width = coordinate_width(line).ok_or_else(|| parse_err(lineno, "cannot determine coordinate field width"))?;
        }
        let resnr = fixed(line, 0, 5, lineno, "residue number")?.trim();
        let residue_seq: i32 = resnr.parse().map_err(|_| parse_err(lineno, format!("malformed residue number `{resnr}`")))?;
        let residue_name = fixed(line, 5, 10, lineno, "residue name")?.trim();
        let name = fixed(line, 10, 15, lineno, "atom name")?.trim();
        fixed(line, 15, 20, lineno, "atom number")?;
        let mut xyz = [0.0; 3];
        for (k, v) in xyz.iter_mut().enumerate() {
            let s = fixed(line, 20 + k * width, 20 + (k + 1) * width, lineno, "coordinate")?;
            *v = number(s, lineno, "coordinate")?;
        }
        let vstart = 20 + 3 * width;
        let rest = line.get(vstart..).unwrap_or("");
        if !rest.trim().is_empty() {
            let vw = width;
            let mut v = [0.0; 3];
            for (k, c) in v.iter_mut().enumerate() {
                let s = fixed(line, vstart + k * vw, vstart + (k + 1) * vw, lineno, "velocity")?;
                *c = number(s, lineno, "velocity")?;
            }
            if velocities.len() != i {
                return Err(parse_err(lineno, "velocities present on some atom lines but not others"));
            }
            velocities.push(Vec3::new(v[0], v[1], v[2]));
        } else if !velocities.is_empty() {
            return Err(parse_err(lineno, "velocities present on some atom lines but not others"));
        }
        atoms.push(Atom::new(name, &Atom::element_from_name(name), residue_name, residue_seq));
        positions.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
    }
    let box_lineno = n + 3;
    let box_line = lines.next().ok_or_else(|| parse_err(box_lineno, "missing box line"))?;
    let values: Vec<f64> = box_line
        .split_whitespace()
        .map(|s| number(s, box_lineno, "box value"))
        .collect::<Result<_, _>>()?;
    let v = match values.len() {
        3 => [values[0], 0.0, 0.0, 0.0, values[1], 0.0, 0.0, 0.0, values[2]],
        9 => {
            let (v1x, v2y, v3z, v1y, v1z, v2x, v2z, v3x, v3y) =
                (values[0], values[1], values[2], values[3], values[4], values[5], values[6], values[7], values[8]);
            [v1x, v1y, v1z, v2x, v2y, v2z, v3x, v3y, v3z]
        }
        k => return Err(parse_err(box_lineno, format!("box line has {k} values, expected 3 or 9"))),
    };
    if let Some((extra, _)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(box_lineno + extra + 1, format!("atom count says {n} but more atom lines follow")));
    }
    let vectors = [Vec3::new(v[0], v[1], v[2]), Vec3::new(v[3], v[4], v[5]), Vec3::new(v[6], v[7], v[8])];
    let simbox = SimBox::infer_kind(vectors, 2e-5).map_err(|e| parse_err(box_lineno, e.to_string()))?;
    Ok(Structure {
        title,
        atoms,
        positions,
        velocities: if velocities.is_empty() { None } else { Some(velocities) },
        simbox: Some(simbox),
    })
}

/// Distance between the first two decimal points after column 20.
fn coordinate_width(line: &str) -> Option<usize> {
    let tail = line.get(20..)?;
    let mut dots = tail.match_indices('.').map(|(i, _)| i);
    let first = dots.next()?;
    let second = dots.next()?;
    let w = second - first;
    (w > 1).then_some(w)
}
