//! Plain-text topology.
//!
//! ```text
//! [ system ]
//! <title>
//! [ form ]
//! molecular | atomic
//! [ atoms ]
//! ; nr resnr resname name element mass charge sigma epsilon vdw_radius
//! [ bonds ]
//! ; ai aj kb r0
//! [ angles ]
//! ; ai aj ak ka theta0(rad)
//! [ exclusions ]
//! ; ai aj...   (partners with a larger index only)
//! [ molecules ]
//! ; name first_atom atom_count copies
//! ```
//!
//! Indices are 1-based. In molecular form `[ atoms ]` lists only the first
//! copy of each block. Reals are written in shortest round-trip form, so
//! write-then-parse reproduces every parameter exactly.

use std::fmt::Write as _;

use super::{parse_err, FormatError};
use crate::system::{Angle, Atom, Bond, MoleculeBlock, Structure, Topology};

/// Contents of a topology file: per-atom parameters for the listed atoms and
/// the bonded topology.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyFile {
    pub title: String,
    /// Parameter-carrying atoms keyed by their global index.
    pub atoms: Vec<(usize, Atom)>,
    pub topology: Topology,
}

impl TopologyFile {
    /// Builds the file contents for `structure`, whose atoms carry parameters.
    pub fn from_structure(structure: &Structure, topology: &Topology) -> Self {
        let listed: Vec<usize> = if topology.expanded {
            (0..structure.n_atoms()).collect()
        } else {
            topology.blocks.iter().flat_map(|b| b.first_atom..b.first_atom + b.atom_count).collect()
        };
        TopologyFile {
            title: structure.title.clone(),
            atoms: listed.into_iter().filter_map(|i| structure.atoms.get(i).map(|a| (i, a.clone()))).collect(),
            topology: topology.clone(),
        }
    }

    /// Copies per-atom parameters onto `structure`, replicating template atoms
    /// to every copy of their block. Names must match.
    pub fn apply_to(&self, structure: &mut Structure) -> Result<(), FormatError> {
        let n = structure.n_atoms();
        if self.topology.n_atoms() != n {
            return Err(FormatError::Corrupt(format!(
                "topology describes {} atoms but the structure has {n}",
                self.topology.n_atoms()
            )));
        }
        let template: std::collections::HashMap<usize, &Atom> = self.atoms.iter().map(|(i, a)| (*i, a)).collect();
        for block in &self.topology.blocks {
            for copy in 0..block.copies {
                for k in 0..block.atom_count {
                    let target = block.first_atom + copy * block.atom_count + k;
                    let source = if self.topology.expanded { target } else { block.first_atom + k };
                    let t = template
                        .get(&source)
                        .ok_or_else(|| FormatError::Corrupt(format!("no parameters for atom {}", source + 1)))?;
                    let atom = &mut structure.atoms[target];
                    if atom.name != t.name || atom.residue_name != t.residue_name {
                        return Err(FormatError::Corrupt(format!(
                            "atom {} is {} {} in the structure but {} {} in the topology",
                            target + 1,
                            atom.residue_name,
                            atom.name,
                            t.residue_name,
                            t.name
                        )));
                    }
                    atom.element = t.element.clone();
                    atom.mass = t.mass;
                    atom.charge = t.charge;
                    atom.sigma = t.sigma;
                    atom.epsilon = t.epsilon;
                    atom.vdw_radius = t.vdw_radius;
                }
            }
        }
        Ok(())
    }
}

/// Names are whitespace-delimited fields; an empty name is written as `-`.
fn token(s: &str) -> String {
    if s.is_empty() {
        "-".to_string()
    } else {
        s.split_whitespace().collect::<Vec<_>>().join("_")
    }
}

fn untoken(s: &str) -> &str {
    if s == "-" {
        ""
    } else {
        s
    }
}

pub fn write_topology(file: &TopologyFile) -> String {
    let t = &file.topology;
    let mut out = String::new();
    let _ = writeln!(out, "; minimd topology\n\n[ system ]\n{}\n", file.title.lines().next().unwrap_or(""));
    let _ = writeln!(out, "[ form ]\n{}\n", if t.expanded { "atomic" } else { "molecular" });
    let _ = writeln!(out, "[ atoms ]\n; nr resnr resname name element mass charge sigma epsilon vdw_radius");
    for (i, a) in &file.atoms {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {} {} {}",
            i + 1,
            a.residue_seq,
            token(&a.residue_name),
            token(&a.name),
            token(&a.element),
            a.mass,
            a.charge,
            a.sigma,
            a.epsilon,
            a.vdw_radius
        );
    }
    let _ = writeln!(out, "\n[ bonds ]\n; ai aj kb r0");
    for b in &t.bonds {
        let _ = writeln!(out, "{} {} {} {}", b.i + 1, b.j + 1, b.kb, b.r0);
    }
    let _ = writeln!(out, "\n[ angles ]\n; ai aj ak ka theta0");
    for a in &t.angles {
        let _ = writeln!(out, "{} {} {} {} {}", a.i + 1, a.j + 1, a.k + 1, a.ka, a.theta0);
    }
    let _ = writeln!(out, "\n[ exclusions ]\n; ai aj...");
    for (i, ex) in t.exclusions.iter().enumerate() {
        let higher: Vec<String> = ex.iter().filter(|&&j| j > i).map(|j| (j + 1).to_string()).collect();
        if !higher.is_empty() {
            let _ = writeln!(out, "{} {}", i + 1, higher.join(" "));
        }
    }
    let _ = writeln!(out, "\n[ molecules ]\n; name first_atom atom_count copies");
    for b in &t.blocks {
        let _ = writeln!(out, "{} {} {} {}", token(&b.name), b.first_atom + 1, b.atom_count, b.copies);
    }
    out
}

pub fn parse_topology(text: &str) -> Result<TopologyFile, FormatError> {
    let mut section = String::new();
    let mut title = String::new();
    let mut form = None;
    let mut atoms = Vec::new();
    let mut topo = Topology::default();
    let mut exclusion_pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = line.trim_matches(|c| c == '[' || c == ']').trim().to_ascii_lowercase();
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let index = |s: &str| -> Result<usize, FormatError> {
            match s.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(parse_err(lineno, format!("bad atom index `{s}`"))),
            }
        };
        let real = |s: &str| -> Result<f64, FormatError> {
            s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| parse_err(lineno, format!("bad number `{s}`")))
        };
        let want = |n: usize| {
            if f.len() == n {
                Ok(())
            } else {
                Err(parse_err(lineno, format!("[ {section} ] line needs {n} fields, found {}", f.len())))
            }
        };
        match section.as_str() {
            "system" => title = line.to_string(),
            "form" => {
                form = Some(match line {
                    "molecular" => false,
                    "atomic" => true,
                    other => return Err(parse_err(lineno, format!("unknown form `{other}`"))),
                })
            }
            "atoms" => {
                want(10)?;
                let residue_seq = f[1].parse().map_err(|_| parse_err(lineno, format!("bad residue number `{}`", f[1])))?;
                let mut atom = Atom::new(untoken(f[3]), untoken(f[4]), untoken(f[2]), residue_seq);
                atom.mass = real(f[5])?;
                atom.charge = real(f[6])?;
                atom.sigma = real(f[7])?;
                atom.epsilon = real(f[8])?;
                atom.vdw_radius = real(f[9])?;
                atoms.push((index(f[0])?, atom));
            }
            "bonds" => {
                want(4)?;
                topo.bonds.push(Bond { i: index(f[0])?, j: index(f[1])?, kb: real(f[2])?, r0: real(f[3])? });
            }
            "angles" => {
                want(5)?;
                topo.angles.push(Angle { i: index(f[0])?, j: index(f[1])?, k: index(f[2])?, ka: real(f[3])?, theta0: real(f[4])? });
            }
            "exclusions" => {
                let i = index(f[0])?;
                for s in &f[1..] {
                    exclusion_pairs.push((i, index(s)?));
                }
            }
            "molecules" => {
                want(4)?;
                let count = |s: &str| s.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad count `{s}`")));
                topo.blocks.push(MoleculeBlock { name: untoken(f[0]).to_string(), first_atom: index(f[1])?, atom_count: count(f[2])?, copies: count(f[3])? });
            }
            "" => return Err(parse_err(lineno, "data before the first section header")),
            other => return Err(parse_err(lineno, format!("unknown section [ {other} ]"))),
        }
    }
    topo.expanded = form.ok_or_else(|| parse_err(0, "missing [ form ] section"))?;
    topo.exclusions = vec![Vec::new(); topo.n_atoms()];
    for (i, j) in exclusion_pairs {
        if i.max(j) >= topo.exclusions.len() {
            return Err(FormatError::Corrupt(format!("exclusion {}-{} out of range", i + 1, j + 1)));
        }
        topo.exclude(i, j);
    }
    Ok(TopologyFile { title, atoms, topology: topo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{Vec3, WATER_RESIDUE};

    fn water_system(copies: usize) -> (Structure, Topology) {
        let mut atoms = Vec::new();
        let mut positions = Vec::new();
        for c in 0..copies {
            for (name, el, q) in [("OW", "O", -0.82), ("HW1", "H", 0.41), ("HW2", "H", 0.41)] {
                let mut a = Atom::new(name, el, WATER_RESIDUE, c as i32 + 1);
                a.mass = if el == "O" { 15.9994 } else { 1.008 };
                a.charge = q;
                a.sigma = if el == "O" { 0.3166 } else { 0.0 };
                a.epsilon = if el == "O" { 0.65 } else { 0.0 };
                a.vdw_radius = 0.1 + 0.1 / 3.0;
                atoms.push(a);
                positions.push(Vec3::new(c as f64, 0.0, 0.0));
            }
        }
        let mut t = Topology {
            bonds: vec![Bond { i: 0, j: 1, kb: 345000.0, r0: 0.1 }, Bond { i: 0, j: 2, kb: 345000.0, r0: 0.1 }],
            angles: vec![Angle { i: 1, j: 0, k: 2, ka: 383.0, theta0: 1.9106 }],
            exclusions: vec![Vec::new(); 3],
            blocks: vec![MoleculeBlock { name: WATER_RESIDUE.into(), first_atom: 0, atom_count: 3, copies }],
            expanded: false,
        };
        t.exclude_bonded();
        t.exclusions.resize(3 * copies, Vec::new());
        (Structure::new("waters", atoms, positions).unwrap(), t)
    }

    #[test]
    fn molecular_round_trip_and_apply() {
        let (s, t) = water_system(4);
        let file = TopologyFile::from_structure(&s, &t);
        assert_eq!(file.atoms.len(), 3);
        let back = parse_topology(&write_topology(&file)).unwrap();
        assert_eq!(back, file);
        let mut bare = s.clone();
        for a in &mut bare.atoms {
            a.mass = 0.0;
            a.charge = 0.0;
        }
        back.apply_to(&mut bare).unwrap();
        assert_eq!(bare, s);
    }

    #[test]
    fn atomic_round_trip() {
        let (s, t) = water_system(3);
        let t = t.expand();
        let file = TopologyFile::from_structure(&s, &t);
        assert_eq!(file.atoms.len(), 9);
        let back = parse_topology(&write_topology(&file)).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.topology.bonds.len(), 6);
    }

    #[test]
    fn empty_names_survive() {
        let (mut s, t) = water_system(1);
        s.atoms[0].element = String::new();
        let file = TopologyFile::from_structure(&s, &t.expand());
        assert_eq!(parse_topology(&write_topology(&file)).unwrap(), file);
    }

    #[test]
    fn name_mismatch_and_malformed_input() {
        let (s, t) = water_system(2);
        let file = TopologyFile::from_structure(&s, &t);
        let mut other = s.clone();
        other.atoms[4].name = "XX".into();
        assert!(file.apply_to(&mut other).is_err());
        let text = write_topology(&file);
        assert!(parse_topology(&text.replace("[ form ]\nmolecular", "")).is_err());
        assert!(parse_topology(&text.replace("1 2 345000 0.1", "1 2 345000")).is_err());
        assert!(parse_topology("[ bogus ]\n1\n").is_err());
    }
}
