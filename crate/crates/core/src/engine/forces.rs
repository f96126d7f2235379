use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

use super::celllist::CellList;
use super::kernels::{coulomb, harmonic_angle, harmonic_bond, LjPair};
use super::EngineError;
use crate::real::Real;
use crate::system::{Atom, SimBox, Topology, Vec3};
use crate::COULOMB_FACTOR;

/// Number of independent force buffers the cell loop is split into. Fixed so
/// that the summation order, and hence the result, does not depend on the
/// number of worker threads.
const CHUNKS: usize = 16;

/// Squared distance below which a non-excluded pair is reported as a singularity.
const SINGULAR_R2: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSearch {
    #[default]
    CellList,
    /// Every pair, O(N²). Reference path for testing.
    AllPairs,
}

/// Potential energy split by interaction type (kJ/mol).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyTerms<T = f64> {
    pub lj: T,
    pub coulomb: T,
    pub bond: T,
    pub angle: T,
}

impl<T: Real> EnergyTerms<T> {
    pub const NAMES: [&'static str; 4] = ["LJ", "Coulomb", "Bond", "Angle"];

    pub fn potential(&self) -> T {
        self.lj + self.coulomb + self.bond + self.angle
    }

    pub fn named(&self) -> Vec<(String, f64)> {
        Self::NAMES
            .iter()
            .zip([self.lj, self.coulomb, self.bond, self.angle])
            .map(|(n, v)| (n.to_string(), v.as_f64()))
            .collect()
    }

    fn add(&mut self, o: &Self) {
        self.lj += o.lj;
        self.coulomb += o.coulomb;
        self.bond += o.bond;
        self.angle += o.angle;
    }
}

/// Precomputed interaction parameters for one system.
#[derive(Debug, Clone)]
pub struct ForceField<T: Real = f64> {
    n_atoms: usize,
    type_of: Vec<u32>,
    n_types: usize,
    lj: Vec<LjPair<T>>,
    /// Charges scaled by √f so that `q_i·q_j` carries the Coulomb factor.
    charges: Vec<T>,
    rcut: T,
    bonds: Vec<(usize, usize, T, T)>,
    angles: Vec<(usize, usize, usize, T, T)>,
    exclusions: Vec<Vec<usize>>,
    search: PairSearch,
    pool: Option<Arc<ThreadPool>>,
}

pub struct ForceOutput<T = f64> {
    pub forces: Vec<Vec3<T>>,
    pub terms: EnergyTerms<T>,
}

impl<T: Real> ForceField<T> {
    /// `topology` must be in atomic (expanded) form.
    pub fn new(atoms: &[Atom], topology: &Topology, rcut: f64) -> Result<Self, EngineError> {
        if !topology.expanded {
            return Err(EngineError::Setup("topology must be expanded".into()));
        }
        if topology.exclusions.len() != atoms.len() {
            return Err(EngineError::Setup(format!(
                "topology has {} atoms, structure has {}",
                topology.exclusions.len(),
                atoms.len()
            )));
        }
        let mut kinds: Vec<(u64, u64)> = Vec::new();
        let mut type_of = Vec::with_capacity(atoms.len());
        for a in atoms {
            let key = (a.sigma.to_bits(), a.epsilon.to_bits());
            let t = match kinds.iter().position(|&k| k == key) {
                Some(t) => t,
                None => {
                    kinds.push(key);
                    kinds.len() - 1
                }
            };
            type_of.push(t as u32);
        }
        let n_types = kinds.len();
        let rc = T::lit(rcut);
        let mut lj = Vec::with_capacity(n_types * n_types);
        for &(si, ei) in &kinds {
            for &(sj, ej) in &kinds {
                let p = |b: u64| T::lit(f64::from_bits(b));
                lj.push(LjPair::mixed(p(si), p(ei), p(sj), p(ej), rc));
            }
        }
        let sqrt_f = COULOMB_FACTOR.sqrt();
        Ok(ForceField {
            n_atoms: atoms.len(),
            type_of,
            n_types,
            lj,
            charges: atoms.iter().map(|a| T::lit(a.charge * sqrt_f)).collect(),
            rcut: rc,
            bonds: topology.bonds.iter().map(|b| (b.i, b.j, T::lit(b.kb), T::lit(b.r0))).collect(),
            angles: topology
                .angles
                .iter()
                .map(|a| (a.i, a.j, a.k, T::lit(a.ka), T::lit(a.theta0)))
                .collect(),
            exclusions: topology.exclusions.clone(),
            search: PairSearch::CellList,
            pool: None,
        })
    }

    pub fn with_search(mut self, search: PairSearch) -> Self {
        self.search = search;
        self
    }

    /// Evaluates on a dedicated pool of `threads` workers (0: the global pool).
    pub fn with_threads(mut self, threads: usize) -> Result<Self, EngineError> {
        self.pool = super::thread_pool(threads)?;
        Ok(self)
    }

    pub fn rcut(&self) -> T {
        self.rcut
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Forces and energy terms at `positions`. Runs on the current rayon
    /// pool; the result is bit-identical for any pool size.
    pub fn compute(&self, positions: &[Vec3<T>], simbox: &SimBox<T>) -> Result<ForceOutput<T>, EngineError> {
        if positions.len() != self.n_atoms {
            return Err(EngineError::Setup(format!(
                "{} positions for {} atoms",
                positions.len(),
                self.n_atoms
            )));
        }
        let half = simbox.min_height() * T::lit(0.5);
        if self.rcut >= half {
            return Err(EngineError::CutoffTooLong { rcut: self.rcut.as_f64(), half_height: half.as_f64() });
        }
        let (mut forces, mut terms) = match self.search {
            PairSearch::CellList => self.nonbonded_cells(positions, simbox)?,
            PairSearch::AllPairs => self.nonbonded_all_pairs(positions, simbox)?,
        };
        self.bonded(positions, simbox, &mut forces, &mut terms);
        Ok(ForceOutput { forces, terms })
    }

    fn nonbonded_cells(
        &self,
        positions: &[Vec3<T>],
        simbox: &SimBox<T>,
    ) -> Result<(Vec<Vec3<T>>, EnergyTerms<T>), EngineError> {
        let cells = CellList::build(positions, simbox, self.rcut)?;
        let slots = Slots::gather(self, positions, cells.order());
        let n_cells = cells.n_cells();
        let chunk_ranges: Vec<std::ops::Range<usize>> =
            (0..CHUNKS).map(|k| (k * n_cells / CHUNKS)..((k + 1) * n_cells / CHUNKS)).collect();
        let run = || -> Vec<Result<(Vec<Vec3<T>>, EnergyTerms<T>), EngineError>> {
            chunk_ranges
                .into_par_iter()
                .map(|range| {
                    let mut acc = PairAccumulator::new(self, &slots, simbox);
                    cells.for_each_slot_row_in(range, |a, bs| acc.row(a, bs));
                    acc.finish()
                })
                .collect()
        };
        let parts = match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        };
        let mut sorted = vec![Vec3::zero(); positions.len()];
        let mut terms = EnergyTerms::default();
        for part in parts {
            let (f, t) = part?;
            for (a, b) in sorted.iter_mut().zip(f) {
                *a += b;
            }
            terms.add(&t);
        }
        let mut forces = vec![Vec3::zero(); positions.len()];
        for (&i, f) in slots.atom.iter().zip(sorted) {
            forces[i] = f;
        }
        Ok((forces, terms))
    }

    fn nonbonded_all_pairs(
        &self,
        positions: &[Vec3<T>],
        simbox: &SimBox<T>,
    ) -> Result<(Vec<Vec3<T>>, EnergyTerms<T>), EngineError> {
        let order: Vec<usize> = (0..positions.len()).collect();
        let slots = Slots::gather(self, positions, &order);
        let mut acc = PairAccumulator::new(self, &slots, simbox);
        for i in 0..positions.len() {
            acc.row(i, i + 1..positions.len());
        }
        acc.finish()
    }

    fn bonded(&self, x: &[Vec3<T>], simbox: &SimBox<T>, forces: &mut [Vec3<T>], terms: &mut EnergyTerms<T>) {
        for &(i, j, kb, r0) in &self.bonds {
            let d = simbox.reduce(x[i] - x[j]);
            let (e, f) = harmonic_bond(d, kb, r0);
            terms.bond += e;
            forces[i] += f;
            forces[j] -= f;
        }
        for &(i, j, k, ka, t0) in &self.angles {
            let a = simbox.reduce(x[i] - x[j]);
            let b = simbox.reduce(x[k] - x[j]);
            let (e, _, fi, fk) = harmonic_angle(a, b, ka, t0);
            terms.angle += e;
            forces[i] += fi;
            forces[k] += fk;
            forces[j] -= fi + fk;
        }
    }
}

/// Box reduction with precomputed reciprocals and branch-free rounding.
/// Produces a valid rounded reduction like [`SimBox::reduce`].
struct Reducer<T> {
    vectors: [Vec3<T>; 3],
    inv: [T; 3],
    magic: T,
}

impl<T: Real> Reducer<T> {
    fn new(simbox: &SimBox<T>) -> Self {
        let v = *simbox.vectors();
        Reducer {
            vectors: v,
            inv: [v[0].x.recip(), v[1].y.recip(), v[2].z.recip()],
            // adding and subtracting 1.5·2^p rounds to the nearest integer for |x| < 2^(p-1)
            magic: T::lit(1.5) / T::epsilon(),
        }
    }

    #[inline(always)]
    fn round(&self, x: T) -> T {
        (x + self.magic) - self.magic
    }

    #[inline(always)]
    fn reduce(&self, mut d: Vec3<T>) -> Vec3<T> {
        let [a, b, c] = self.vectors;
        d -= c * self.round(d.z * self.inv[2]);
        d -= b * self.round(d.y * self.inv[1]);
        d -= a * self.round(d.x * self.inv[0]);
        d
    }
}

/// Per-atom data copied into cell order so the pair loop reads memory
/// sequentially.
struct Slots<T> {
    x: Vec<Vec3<T>>,
    types: Vec<u32>,
    charges: Vec<T>,
    /// Atom index of each slot.
    atom: Vec<usize>,
}

impl<T: Real> Slots<T> {
    fn gather(ff: &ForceField<T>, positions: &[Vec3<T>], order: &[usize]) -> Self {
        Slots {
            x: order.iter().map(|&i| positions[i]).collect(),
            types: order.iter().map(|&i| ff.type_of[i]).collect(),
            charges: order.iter().map(|&i| ff.charges[i]).collect(),
            atom: order.to_vec(),
        }
    }
}

/// Nonbonded sums over pairs of slots; forces are kept in slot order.
struct PairAccumulator<'a, T: Real> {
    ff: &'a ForceField<T>,
    slots: &'a Slots<T>,
    reducer: Reducer<T>,
    rc2: T,
    inv_rc: T,
    forces: Vec<Vec3<T>>,
    terms: EnergyTerms<T>,
    singular: Option<(usize, usize, f64)>,
}

impl<'a, T: Real> PairAccumulator<'a, T> {
    fn new(ff: &'a ForceField<T>, slots: &'a Slots<T>, simbox: &SimBox<T>) -> Self {
        PairAccumulator {
            ff,
            slots,
            reducer: Reducer::new(simbox),
            rc2: ff.rcut * ff.rcut,
            inv_rc: ff.rcut.recip(),
            forces: vec![Vec3::zero(); slots.x.len()],
            terms: EnergyTerms::default(),
            singular: None,
        }
    }

    /// Slot `a` against every slot in `bs`.
    #[inline]
    fn row(&mut self, a: usize, bs: std::ops::Range<usize>) {
        let s = self.slots;
        let ff = self.ff;
        let xa = s.x[a];
        let qa = s.charges[a];
        let lj_row = &ff.lj[s.types[a] as usize * ff.n_types..][..ff.n_types];
        let excluded = &ff.exclusions[s.atom[a]];
        let mut fa = Vec3::zero();
        let start = bs.start;
        let xs = &s.x[bs.clone()];
        let forces = &mut self.forces[bs];
        for (k, (&xb, fb)) in xs.iter().zip(forces.iter_mut()).enumerate() {
            // the reduced vector is the shortest image whenever one lies within
            // the cutoff, because the cutoff is below half the smallest box height
            let d = self.reducer.reduce(xa - xb);
            let r2 = d.norm2();
            if r2 >= self.rc2 {
                continue;
            }
            let b = start + k;
            let j = s.atom[b];
            if !excluded.is_empty() && excluded.binary_search(&j).is_ok() {
                continue;
            }
            if r2 < T::lit(SINGULAR_R2) {
                if self.singular.is_none() {
                    let i = s.atom[a];
                    self.singular = Some((i.min(j), i.max(j), r2.as_f64().sqrt()));
                }
                continue;
            }
            let mut f_over_r = T::zero();
            let lj = &lj_row[s.types[b] as usize];
            if !lj.is_zero() {
                let (e, f) = lj.eval(r2);
                self.terms.lj += e;
                f_over_r += f;
            }
            let qq = qa * s.charges[b];
            if qq != T::zero() {
                let (e, f) = coulomb(r2, qq, self.inv_rc);
                self.terms.coulomb += e;
                f_over_r += f;
            }
            let f = d * f_over_r;
            fa += f;
            *fb -= f;
        }
        self.forces[a] += fa;
    }

    fn finish(self) -> Result<(Vec<Vec3<T>>, EnergyTerms<T>), EngineError> {
        if let Some((i, j, r)) = self.singular {
            return Err(EngineError::Singularity { i, j, r });
        }
        Ok((self.forces, self.terms))
    }
}

/// Convenience wrapper: cell-list forces in double precision.
pub fn compute_forces(
    atoms: &[Atom],
    topology: &Topology,
    positions: &[Vec3<f64>],
    simbox: &SimBox<f64>,
    rcut: f64,
) -> Result<ForceOutput<f64>, EngineError> {
    ForceField::new(atoms, topology, rcut)?.compute(positions, simbox)
}
