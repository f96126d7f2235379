use std::collections::HashMap;

use super::{ForceFieldTable, PrepError};
use crate::system::{Angle, Bond, Structure, Topology, Vec3};

/// Bond force constant (kJ mol⁻¹ nm⁻²).
pub const BOND_K: f64 = 250_000.0;
/// Angle force constant (kJ mol⁻¹ rad⁻²).
pub const ANGLE_K: f64 = 400.0;
/// Atoms are bonded when closer than this factor times the summed covalent radii.
pub const BOND_TOLERANCE: f64 = 1.1;
/// Any pair closer than this (nm) marks the input as corrupt.
pub const MIN_PAIR_DISTANCE: f64 = 0.04;

const PROTEIN_RESIDUES: [&str; 22] = [
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE", "PRO", "SER",
    "THR", "TRP", "TYR", "VAL", "HID", "HIE",
];

/// Assigns force-field parameters and infers bonds, angles and 1-2/1-3
/// exclusions from the geometry. Equilibrium values are the input's own
/// distances and angles, so the input is a minimum of the bonded terms.
pub fn prepare_topology(structure: &Structure, ff: &ForceFieldTable) -> Result<(Structure, Topology), PrepError> {
    if structure.is_empty() {
        return Err(PrepError::Empty("structure is empty"));
    }
    structure.check_lengths()?;
    let mut out = structure.clone();
    for atom in &mut out.atoms {
        ff.assign(atom)?;
    }
    let radii: Vec<f64> = out
        .atoms
        .iter()
        .map(|a| ff.element(&a.element).map(|e| e.covalent_radius))
        .collect::<Result<_, _>>()?;
    let bonded = bonded_pairs(&out.positions, &radii)?;
    let n = out.n_atoms();
    let mut neighbours = vec![Vec::new(); n];
    let mut topology = Topology::empty(block_name(&out), n);
    for &(i, j) in &bonded {
        let r0 = (out.positions[i] - out.positions[j]).norm();
        topology.bonds.push(Bond { i, j, kb: BOND_K, r0 });
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    for (j, nb) in neighbours.iter_mut().enumerate() {
        nb.sort_unstable();
        for (a, &i) in nb.iter().enumerate() {
            for &k in &nb[a + 1..] {
                let u = out.positions[i] - out.positions[j];
                let v = out.positions[k] - out.positions[j];
                let cos = (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0);
                topology.angles.push(Angle { i, j, k, ka: ANGLE_K, theta0: cos.acos() });
            }
        }
    }
    topology.exclude_bonded();
    Ok((out, topology))
}

fn block_name(s: &Structure) -> &'static str {
    if s.atoms.iter().any(|a| PROTEIN_RESIDUES.contains(&a.residue_name.as_str())) {
        "Protein"
    } else {
        "Other"
    }
}

/// Pairs `(i, j)`, `i < j`, within bonding distance, found with a uniform
/// spatial hash. Errors on any pair closer than [`MIN_PAIR_DISTANCE`].
fn bonded_pairs(x: &[Vec3<f64>], radii: &[f64]) -> Result<Vec<(usize, usize)>, PrepError> {
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let cell = (2.0 * BOND_TOLERANCE * max_r).max(MIN_PAIR_DISTANCE);
    let key = |p: Vec3<f64>| [(p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64];
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, &p) in x.iter().enumerate() {
        if !p.is_finite() {
            return Err(PrepError::BadAtom { index: i, name: String::new(), reason: "non-finite coordinate".into() });
        }
        grid.entry(key(p)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (i, &p) in x.iter().enumerate() {
        let k = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(cell_atoms) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) else { continue };
                    for &j in cell_atoms {
                        if j <= i {
                            continue;
                        }
                        let d = (p - x[j]).norm();
                        if d < MIN_PAIR_DISTANCE {
                            return Err(PrepError::Overlap { i, j, distance: d });
                        }
                        if d <= BOND_TOLERANCE * (radii[i] + radii[j]) {
                            pairs.push((i, j));
                        }
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    Ok(pairs)
}
