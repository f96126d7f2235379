#![allow(dead_code)]

use minimd::formats::{Integrator, MdpParams};
use minimd::prep::{preprocess, water_box, ForceFieldTable, RunInput};
use minimd::system::{Angle, Atom, Bond, MoleculeBlock, SimBox, Structure, Topology, Vec3};
use minimd::BoxKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LYSOZYME_PDB: &str = minimd::SAMPLE_PROTEIN_PDB;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn md_params(nsteps: u64) -> MdpParams {
    MdpParams { integrator: Integrator::Md, nsteps, rcut: 0.9, nstxout: 100, nstenergy: 10, ..Default::default() }
}

pub fn em_params(nsteps: u64) -> MdpParams {
    MdpParams { integrator: Integrator::Steep, nsteps, rcut: 0.9, ..Default::default() }
}

pub fn water_input(waters: usize, params: &MdpParams) -> RunInput {
    let ff = ForceFieldTable::builtin();
    let (s, t) = water_box(waters, ff.water().unwrap()).unwrap();
    preprocess(&s, &t, params).unwrap()
}

fn random_unit(r: &mut ChaCha8Rng) -> Vec3<f64> {
    loop {
        let v = Vec3::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// `molecules` bent triatomics with random LJ parameters and charges in a
/// random periodic box (cubic, rectangular or skewed), no two atoms of
/// different molecules closer than `min_sep`.
pub fn random_molecules(seed: u64, molecules: usize, min_sep: f64) -> (Structure, Topology, SimBox<f64>) {
    let mut r = rng(seed);
    let simbox = match r.random_range(0..3) {
        0 => SimBox::from_type(BoxKind::Cubic, r.random_range(2.0..2.6)).unwrap(),
        1 => SimBox::rectangular(r.random_range(2.0..2.6), r.random_range(2.0..2.6), r.random_range(2.0..2.6)).unwrap(),
        _ => SimBox::from_type(BoxKind::Octahedron, r.random_range(2.4..2.8)).unwrap(),
    };
    let mut atoms = Vec::new();
    let mut x: Vec<Vec3<f64>> = Vec::new();
    let mut topology = Topology::default();
    topology.expanded = true;
    let mut m = 0;
    while m < molecules {
        let center = simbox.to_cartesian(Vec3::new(r.random(), r.random(), r.random()));
        let a = center + random_unit(&mut r) * r.random_range(0.09..0.16);
        let b = center + random_unit(&mut r) * r.random_range(0.09..0.16);
        let trial = [a, center, b];
        let clash = trial.iter().any(|&p| x.iter().any(|&q| simbox.minimum_image(p - q).norm() < min_sep));
        if clash {
            continue;
        }
        let base = x.len();
        for (k, &p) in trial.iter().enumerate() {
            let mut atom = Atom::new(["A1", "B", "A2"][k], "C", "MOL", m as i32 + 1);
            atom.mass = r.random_range(1.0..20.0);
            atom.charge = r.random_range(-0.8..0.8);
            atom.sigma = r.random_range(0.2..0.35);
            atom.epsilon = r.random_range(0.1..1.0);
            atom.vdw_radius = 0.15;
            atoms.push(atom);
            x.push(p);
        }
        topology.bonds.push(Bond { i: base, j: base + 1, kb: r.random_range(1e4..3e5), r0: r.random_range(0.09..0.15) });
        topology.bonds.push(Bond { i: base + 1, j: base + 2, kb: r.random_range(1e4..3e5), r0: r.random_range(0.09..0.15) });
        topology.angles.push(Angle { i: base, j: base + 1, k: base + 2, ka: r.random_range(100.0..500.0), theta0: r.random_range(1.6..2.2) });
        m += 1;
    }
    topology.exclusions = vec![Vec::new(); x.len()];
    topology.exclude_bonded();
    topology.blocks = vec![MoleculeBlock { name: "MOL".into(), first_atom: 0, atom_count: x.len(), copies: 1 }];
    let mut s = Structure::new("random", atoms, x).unwrap();
    s.simbox = Some(simbox);
    (s, topology, simbox)
}
