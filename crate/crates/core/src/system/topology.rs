use thiserror::Error;

/// Residue name used for solvent water throughout the pipeline.
pub const WATER_RESIDUE: &str = "SOL";

/// Harmonic bond `V = ½·kb·(r − r0)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    /// kJ mol⁻¹ nm⁻²
    pub kb: f64,
    /// nm
    pub r0: f64,
}

/// Harmonic angle `V = ½·ka·(θ − θ0)²` around the middle atom `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// kJ mol⁻¹ rad⁻²
    pub ka: f64,
    /// rad
    pub theta0: f64,
}

/// `copies` consecutive copies of a molecule of `atom_count` atoms starting at `first_atom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoleculeBlock {
    pub name: String,
    pub first_atom: usize,
    pub atom_count: usize,
    pub copies: usize,
}

impl MoleculeBlock {
    pub fn total_atoms(&self) -> usize {
        self.atom_count * self.copies
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("bond {index} connects atom {atom} to itself")]
    SelfBond { index: usize, atom: usize },
    #[error("{term} {index} references atom {atom}, but the system has {n_atoms} atoms")]
    IndexOutOfRange { term: &'static str, index: usize, atom: usize, n_atoms: usize },
    #[error("angle {index} repeats an atom")]
    DegenerateAngle { index: usize },
    #[error("exclusions are not symmetric: {i} excludes {j} but not vice versa")]
    AsymmetricExclusion { i: usize, j: usize },
    #[error("bonded pair {i}-{j} is missing from the exclusions")]
    MissingExclusion { i: usize, j: usize },
    #[error("exclusion table has {got} entries for {expected} atoms")]
    ExclusionLength { got: usize, expected: usize },
    #[error("molecule blocks do not tile the atom range: {0}")]
    BlockTiling(String),
}

/// Bonded terms, exclusions and molecule blocks.
///
/// In molecular form (`expanded == false`) bonded terms and exclusions are
/// listed only for the first copy of each block; [`Topology::expand`]
/// replicates them to every copy, giving the flat atomic form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Topology {
    pub bonds: Vec<Bond>,
    pub angles: Vec<Angle>,
    /// Sorted, unique excluded partners per atom.
    pub exclusions: Vec<Vec<usize>>,
    pub blocks: Vec<MoleculeBlock>,
    pub expanded: bool,
}

impl Topology {
    /// A topology with no bonded terms for `n_atoms` atoms in one block.
    pub fn empty(name: &str, n_atoms: usize) -> Self {
        let blocks = if n_atoms > 0 {
            vec![MoleculeBlock { name: name.to_string(), first_atom: 0, atom_count: n_atoms, copies: 1 }]
        } else {
            Vec::new()
        };
        Topology { bonds: Vec::new(), angles: Vec::new(), exclusions: vec![Vec::new(); n_atoms], blocks, expanded: true }
    }

    /// Total atom count covered by the molecule blocks.
    pub fn n_atoms(&self) -> usize {
        self.blocks.iter().map(MoleculeBlock::total_atoms).sum()
    }

    pub fn is_excluded(&self, i: usize, j: usize) -> bool {
        self.exclusions.get(i).is_some_and(|e| e.binary_search(&j).is_ok())
    }

    /// Adds `i ↔ j` to the exclusions (both directions).
    pub fn exclude(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let need = i.max(j) + 1;
        if self.exclusions.len() < need {
            self.exclusions.resize(need, Vec::new());
        }
        for (a, b) in [(i, j), (j, i)] {
            if let Err(pos) = self.exclusions[a].binary_search(&b) {
                self.exclusions[a].insert(pos, b);
            }
        }
    }

    /// Adds exclusions for every 1-2 and 1-3 pair implied by the bonded terms.
    pub fn exclude_bonded(&mut self) {
        let pairs: Vec<(usize, usize)> = self
            .bonds
            .iter()
            .map(|b| (b.i, b.j))
            .chain(self.angles.iter().flat_map(|a| [(a.i, a.j), (a.j, a.k), (a.i, a.k)]))
            .collect();
        for (i, j) in pairs {
            self.exclude(i, j);
        }
    }

    /// Number of water molecules (copies in blocks named after the water residue).
    pub fn water_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.name == WATER_RESIDUE).map(|b| b.copies).sum()
    }

    /// Appends `other` after the current atoms, shifting its indices.
    ///
    /// Both topologies should be in the same form; a molecular-form `other`
    /// appended to an expanded topology is expanded first.
    pub fn append(&mut self, other: &Topology) {
        let other = if self.expanded && !other.expanded { other.expand() } else { other.clone() };
        let offset = self.n_atoms();
        self.exclusions.resize(offset, Vec::new());
        self.bonds.extend(other.bonds.iter().map(|b| Bond { i: b.i + offset, j: b.j + offset, ..*b }));
        self.angles
            .extend(other.angles.iter().map(|a| Angle { i: a.i + offset, j: a.j + offset, k: a.k + offset, ..*a }));
        let mut excl = other.exclusions.clone();
        excl.resize(other.n_atoms(), Vec::new());
        self.exclusions.extend(excl.into_iter().map(|e| e.into_iter().map(|j| j + offset).collect()));
        self.blocks.extend(other.blocks.iter().map(|b| MoleculeBlock { first_atom: b.first_atom + offset, ..b.clone() }));
    }

    /// Replicates per-molecule terms to every copy of each block. A no-op on an
    /// already expanded topology.
    pub fn expand(&self) -> Topology {
        if self.expanded {
            return self.clone();
        }
        let n = self.n_atoms();
        let mut out = Topology {
            bonds: Vec::with_capacity(self.bonds.len()),
            angles: Vec::with_capacity(self.angles.len()),
            exclusions: vec![Vec::new(); n],
            blocks: self.blocks.clone(),
            expanded: true,
        };
        let block_of = |atom: usize| {
            self.blocks
                .iter()
                .find(|b| atom >= b.first_atom && atom < b.first_atom + b.atom_count)
        };
        for block in &self.blocks {
            let lo = block.first_atom;
            let hi = lo + block.atom_count;
            let in_block = |a: usize| a >= lo && a < hi;
            let bonds: Vec<&Bond> = self.bonds.iter().filter(|b| in_block(b.i)).collect();
            let angles: Vec<&Angle> = self.angles.iter().filter(|a| in_block(a.j)).collect();
            for copy in 0..block.copies {
                let off = copy * block.atom_count;
                out.bonds.extend(bonds.iter().map(|b| Bond { i: b.i + off, j: b.j + off, ..**b }));
                out.angles.extend(angles.iter().map(|a| Angle { i: a.i + off, j: a.j + off, k: a.k + off, ..**a }));
                for atom in lo..hi {
                    if let Some(ex) = self.exclusions.get(atom) {
                        out.exclusions[atom + off] = ex.iter().map(|&j| j + off).collect();
                    }
                }
            }
        }
        // terms whose anchor atom lies outside every block's first copy are kept as-is
        out.bonds.extend(self.bonds.iter().filter(|b| block_of(b.i).is_none()).copied());
        out.angles.extend(self.angles.iter().filter(|a| block_of(a.j).is_none()).copied());
        out
    }

    /// Checks index ranges, exclusion symmetry and completeness and block tiling
    /// against a system of `n_atoms` atoms.
    pub fn validate(&self, n_atoms: usize) -> Result<(), TopologyError> {
        let mut next = 0;
        for b in &self.blocks {
            if b.first_atom != next {
                return Err(TopologyError::BlockTiling(format!(
                    "block `{}` starts at atom {} but the previous block ended at {next}",
                    b.name, b.first_atom
                )));
            }
            if b.atom_count == 0 || b.copies == 0 {
                return Err(TopologyError::BlockTiling(format!("block `{}` is empty", b.name)));
            }
            next += b.total_atoms();
        }
        if next != n_atoms {
            return Err(TopologyError::BlockTiling(format!("blocks cover {next} atoms, system has {n_atoms}")));
        }
        let check = |term: &'static str, index: usize, atom: usize| {
            if atom >= n_atoms {
                Err(TopologyError::IndexOutOfRange { term, index, atom, n_atoms })
            } else {
                Ok(())
            }
        };
        for (index, b) in self.bonds.iter().enumerate() {
            check("bond", index, b.i)?;
            check("bond", index, b.j)?;
            if b.i == b.j {
                return Err(TopologyError::SelfBond { index, atom: b.i });
            }
        }
        for (index, a) in self.angles.iter().enumerate() {
            check("angle", index, a.i)?;
            check("angle", index, a.j)?;
            check("angle", index, a.k)?;
            if a.i == a.j || a.j == a.k || a.i == a.k {
                return Err(TopologyError::DegenerateAngle { index });
            }
        }
        if self.exclusions.len() != n_atoms {
            return Err(TopologyError::ExclusionLength { got: self.exclusions.len(), expected: n_atoms });
        }
        for (i, ex) in self.exclusions.iter().enumerate() {
            for &j in ex {
                check("exclusion", i, j)?;
                if !self.is_excluded(j, i) {
                    return Err(TopologyError::AsymmetricExclusion { i, j });
                }
            }
        }
        let pairs = self
            .bonds
            .iter()
            .map(|b| (b.i, b.j))
            .chain(self.angles.iter().flat_map(|a| [(a.i, a.j), (a.j, a.k), (a.i, a.k)]));
        for (i, j) in pairs {
            if !self.is_excluded(i, j) {
                return Err(TopologyError::MissingExclusion { i, j });
            }
        }
        Ok(())
    }
}
