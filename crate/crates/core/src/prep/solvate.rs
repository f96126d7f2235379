use rayon::prelude::*;

use super::{PrepError, WaterModel};
use crate::engine::CellList;
use crate::system::{Angle, Bond, BoxKind, MoleculeBlock, SimBox, Structure, Topology, Vec3, WATER_RESIDUE};

/// Target spacing (nm) of the water lattice; the actual spacing is stretched
/// so that a whole number of waters fits along each box axis.
pub const LATTICE_SPACING: f64 = 0.31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolvateReport {
    /// Lattice sites considered.
    pub candidates: usize,
    /// Waters removed for overlapping the solute.
    pub removed_overlap: usize,
    /// Waters removed because an atom ended up outside the box.
    pub removed_outside: usize,
    pub added: usize,
}

/// Fills `simbox` with waters on a lattice (oxygens on the lattice points), drops every water with an atom
/// closer than the summed van der Waals radii to any solute atom (minimum
/// image), and appends the survivors as one water block.
pub fn solvate(
    solute: &Structure,
    topology: &Topology,
    water: &WaterModel,
    simbox: &SimBox<f64>,
) -> Result<(Structure, Topology, SolvateReport), PrepError> {
    solute.check_lengths()?;
    if topology.n_atoms() != solute.n_atoms() {
        return Err(PrepError::AtomCountMismatch { topology: topology.n_atoms(), structure: solute.n_atoms() });
    }
    for (i, a) in solute.atoms.iter().enumerate() {
        if !(a.vdw_radius > 0.0) {
            return Err(PrepError::BadAtom {
                index: i,
                name: a.name.clone(),
                reason: "no van der Waals radius assigned".into(),
            });
        }
    }
    if let Some(i) = solute.positions.iter().position(|&p| !simbox.contains(p)) {
        return Err(PrepError::OutsideBox(i));
    }
    let heights = simbox.heights();
    let dims = heights.map(|h| (h / LATTICE_SPACING + 1e-9).floor() as usize);
    if dims.contains(&0) {
        return Err(PrepError::BoxTooSmall { height: simbox.min_height() });
    }
    let water_vdw = water.sites.iter().map(|s| s.atom.vdw_radius).fold(0.0, f64::max);
    let solute_vdw = solute.atoms.iter().map(|a| a.vdw_radius).fold(0.0, f64::max);
    let reach = water_vdw + solute_vdw;
    let cells = if solute.is_empty() {
        None
    } else {
        CellList::build(&solute.positions, simbox, reach).ok()
    };

    let n_sites = dims[0] * dims[1] * dims[2];
    let placed: Vec<Placement> = (0..n_sites)
        .into_par_iter()
        .map(|site| {
            let (i, j, k) = (site / (dims[1] * dims[2]), (site / dims[2]) % dims[1], site % dims[2]);
            let s = Vec3::new(
                (i as f64 + 0.5) / dims[0] as f64,
                (j as f64 + 0.5) / dims[1] as f64,
                (k as f64 + 0.5) / dims[2] as f64,
            );
            let mut oxygen = simbox.to_cartesian(s);
            if simbox.kind() == BoxKind::Octahedron {
                oxygen = simbox.wrap_compact(oxygen);
            }
            let x = water.place(oxygen, k % 2 == 1);
            if !x.iter().all(|&p| simbox.contains(p)) {
                return Placement::Outside;
            }
            let clash = |p: Vec3<f64>, r: f64| {
                let hit = |a: usize| simbox.minimum_image(p - solute.positions[a]).norm() < r + solute.atoms[a].vdw_radius;
                match &cells {
                    Some(cl) => cl.candidates_near(simbox, p).any(hit),
                    None => (0..solute.n_atoms()).any(hit),
                }
            };
            if x.iter().zip(&water.sites).any(|(&p, site)| clash(p, site.atom.vdw_radius)) {
                Placement::Overlap
            } else {
                Placement::Kept(x)
            }
        })
        .collect();

    let mut out = solute.clone();
    out.simbox = Some(*simbox);
    let mut report = SolvateReport { candidates: n_sites, ..Default::default() };
    let mut resseq = solute.atoms.last().map_or(0, |a| a.residue_seq);
    let mut velocities = out.velocities.take();
    for p in placed {
        match p {
            Placement::Outside => report.removed_outside += 1,
            Placement::Overlap => report.removed_overlap += 1,
            Placement::Kept(x) => {
                resseq += 1;
                for (site, pos) in water.sites.iter().zip(x) {
                    let mut atom = site.atom.clone();
                    atom.residue_seq = resseq;
                    out.atoms.push(atom);
                    out.positions.push(pos);
                    if let Some(v) = &mut velocities {
                        v.push(Vec3::zero());
                    }
                }
                report.added += 1;
            }
        }
    }
    out.velocities = velocities;

    let mut top = if solute.is_empty() { Topology::default() } else { topology.clone() };
    if report.added > 0 {
        top.append(&water_topology(water, report.added));
    }
    Ok((out, top, report))
}

enum Placement {
    Outside,
    Overlap,
    Kept([Vec3<f64>; 3]),
}

/// Molecular-form topology for `copies` waters.
fn water_topology(water: &WaterModel, copies: usize) -> Topology {
    let mut t = Topology {
        bonds: vec![
            Bond { i: 0, j: 1, kb: water.bond_k, r0: water.bond_length },
            Bond { i: 0, j: 2, kb: water.bond_k, r0: water.bond_length },
        ],
        angles: vec![Angle { i: 1, j: 0, k: 2, ka: water.angle_k, theta0: water.angle }],
        exclusions: vec![Vec::new(); 3],
        blocks: vec![MoleculeBlock { name: WATER_RESIDUE.to_string(), first_atom: 0, atom_count: 3, copies }],
        expanded: false,
    };
    t.exclude_bonded();
    t
}

/// A cubic box of exactly `waters` molecules: the smallest lattice cube that
/// holds them, filled in lattice order and truncated to the requested count.
pub fn water_box(waters: usize, water: &WaterModel) -> Result<(Structure, Topology), PrepError> {
    if waters == 0 {
        return Err(PrepError::Empty("water box with zero molecules"));
    }
    let mut per_axis = (waters as f64).cbrt().round() as usize;
    while per_axis.pow(3) < waters {
        per_axis += 1;
    }
    let simbox = SimBox::from_type(BoxKind::Cubic, per_axis as f64 * LATTICE_SPACING)?;
    let empty = Structure { title: format!("{waters} waters"), ..Default::default() };
    let (mut s, mut top, _) = solvate(&empty, &Topology::default(), water, &simbox)?;
    s.atoms.truncate(3 * waters);
    s.positions.truncate(3 * waters);
    top.blocks[0].copies = waters;
    Ok((s, top))
}
