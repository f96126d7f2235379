use super::EngineError;
use crate::real::Real;
use crate::system::{SimBox, Vec3};

/// Cells per cutoff length along each axis.
const REACH: usize = 2;

/// Periodic cell grid over the box's fractional coordinates.
///
/// Each axis is split into `floor(2 · height / rcut)` cells, so every cell is
/// at least `rcut / 2` thick and all pairs within `rcut` lie at most two
/// cells apart along each axis.
#[derive(Debug, Clone)]
pub struct CellList {
    dims: [usize; 3],
    /// CSR layout: atoms of cell `c` are `atoms[starts[c]..starts[c + 1]]`.
    starts: Vec<usize>,
    atoms: Vec<usize>,
    /// Distinct neighbor cells (self included) with index ≥ the cell's own.
    half_neighbors: Vec<Vec<usize>>,
}

impl CellList {
    /// Bins `positions` into cells. Requires `rcut < min_height / 2`.
    pub fn build<T: Real>(positions: &[Vec3<T>], simbox: &SimBox<T>, rcut: T) -> Result<Self, EngineError> {
        let heights = simbox.heights();
        let half = simbox.min_height() * T::lit(0.5);
        if !(rcut > T::zero()) || rcut >= half {
            return Err(EngineError::CutoffTooLong { rcut: rcut.as_f64(), half_height: half.as_f64() });
        }
        let dims = heights.map(|h| ((h * T::lit(REACH as f64) / rcut).floor().to_usize().unwrap_or(1)).clamp(1, 1 << 10));
        let n_cells = dims[0] * dims[1] * dims[2];
        let mut cell_of = Vec::with_capacity(positions.len());
        let mut counts = vec![0usize; n_cells + 1];
        for (i, &p) in positions.iter().enumerate() {
            if !p.is_finite() {
                return Err(EngineError::NonFinite { what: "position", index: i });
            }
            let c = Self::cell_index(dims, simbox, p);
            cell_of.push(c);
            counts[c + 1] += 1;
        }
        for c in 0..n_cells {
            counts[c + 1] += counts[c];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut atoms = vec![0usize; positions.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            atoms[fill[c]] = i;
            fill[c] += 1;
        }
        let half_neighbors = (0..n_cells)
            .map(|c| {
                let mut nb: Vec<usize> = Self::stencil(dims, c).into_iter().filter(|&d| d >= c).collect();
                nb.sort_unstable();
                nb.dedup();
                nb
            })
            .collect();
        Ok(CellList { dims, starts, atoms, half_neighbors })
    }

    fn cell_index<T: Real>(dims: [usize; 3], simbox: &SimBox<T>, p: Vec3<T>) -> usize {
        let s = simbox.to_fractional(p);
        let mut idx = [0usize; 3];
        for a in 0..3 {
            let f = s[a] - s[a].floor();
            let k = (f * T::lit(dims[a] as f64)).floor().to_usize().unwrap_or(0);
            idx[a] = k.min(dims[a] - 1);
        }
        (idx[0] * dims[1] + idx[1]) * dims[2] + idx[2]
    }

    /// All (possibly repeated) cells in the 5×5×5 stencil around `c`.
    fn stencil(dims: [usize; 3], c: usize) -> Vec<usize> {
        let ix = c / (dims[1] * dims[2]);
        let iy = (c / dims[2]) % dims[1];
        let iz = c % dims[2];
        let wrap = |i: usize, d: isize, n: usize| ((i as isize + d).rem_euclid(n as isize)) as usize;
        let r = REACH as isize;
        let mut out = Vec::with_capacity((2 * REACH + 1).pow(3));
        for dx in -r..=r {
            for dy in -r..=r {
                for dz in -r..=r {
                    let x = wrap(ix, dx, dims[0]);
                    let y = wrap(iy, dy, dims[1]);
                    let z = wrap(iz, dz, dims[2]);
                    out.push((x * dims[1] + y) * dims[2] + z);
                }
            }
        }
        out
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn n_cells(&self) -> usize {
        self.starts.len() - 1
    }

    #[inline]
    pub fn cell_atoms(&self, c: usize) -> &[usize] {
        &self.atoms[self.starts[c]..self.starts[c + 1]]
    }

    #[inline]
    pub fn half_neighbors(&self, c: usize) -> &[usize] {
        &self.half_neighbors[c]
    }

    /// Atom indices in cell order; cell `c` occupies the slots
    /// `slots(c)`.
    pub fn order(&self) -> &[usize] {
        &self.atoms
    }

    #[inline]
    pub fn slots(&self, c: usize) -> std::ops::Range<usize> {
        self.starts[c]..self.starts[c + 1]
    }

    /// Candidate pairs as rows: `f(a, bs)` pairs slot `a` with every slot
    /// in the contiguous range `bs`. Slots index [`CellList::order`].
    pub fn for_each_slot_row_in<F: FnMut(usize, std::ops::Range<usize>)>(
        &self,
        cells: std::ops::Range<usize>,
        mut f: F,
    ) {
        for c in cells {
            let own = self.slots(c);
            for &d in self.half_neighbors(c) {
                if d == c {
                    for a in own.clone() {
                        f(a, a + 1..own.end);
                    }
                } else {
                    let other = self.slots(d);
                    if other.is_empty() {
                        continue;
                    }
                    for a in own.clone() {
                        f(a, other.clone());
                    }
                }
            }
        }
    }

    /// Calls `f(i, j)` once for every candidate pair: same-cell pairs and
    /// cross-cell pairs between neighboring cells. The candidates are a
    /// superset of the pairs within `rcut`.
    pub fn for_each_candidate_in<F: FnMut(usize, usize)>(&self, cells: std::ops::Range<usize>, mut f: F) {
        self.for_each_slot_row_in(cells, |a, bs| {
            for b in bs {
                f(self.atoms[a], self.atoms[b]);
            }
        });
    }

    pub fn for_each_candidate<F: FnMut(usize, usize)>(&self, f: F) {
        self.for_each_candidate_in(0..self.n_cells(), f)
    }

    /// Indices of atoms in the cells around an arbitrary point; a superset of
    /// the atoms within `rcut` of it.
    pub fn candidates_near<T: Real>(&self, simbox: &SimBox<T>, x: Vec3<T>) -> impl Iterator<Item = usize> + '_ {
        let c = Self::cell_index(self.dims, simbox, x);
        let mut cells = Self::stencil(self.dims, c);
        cells.sort_unstable();
        cells.dedup();
        cells.into_iter().flat_map(move |d| self.cell_atoms(d).iter().copied())
    }
}
