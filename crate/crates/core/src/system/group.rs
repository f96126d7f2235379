use super::{Structure, SystemError, WATER_RESIDUE};

/// Optional size limits for groups. Off by default: analysis groups of
/// whole proteins routinely exceed a few hundred atoms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroupLimits {
    pub max_atoms: Option<usize>,
}

impl GroupLimits {
    /// The historical limit of 256 atoms per group.
    pub const LEGACY: GroupLimits = GroupLimits { max_atoms: Some(256) };
}

/// Named, sorted set of atom indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    name: String,
    indices: Vec<usize>,
}

const PROTEIN_RESIDUES: &[&str] = &[
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE", "PRO", "SER",
    "THR", "TRP", "TYR", "VAL", "HSD", "HSE", "HIE", "HID", "HIP",
];

impl Group {
    /// `indices` must be strictly increasing and below `n_atoms`.
    pub fn new(name: impl Into<String>, indices: Vec<usize>, n_atoms: usize) -> Result<Self, SystemError> {
        Self::with_limits(name, indices, n_atoms, GroupLimits::default())
    }

    pub fn with_limits(
        name: impl Into<String>,
        indices: Vec<usize>,
        n_atoms: usize,
        limits: GroupLimits,
    ) -> Result<Self, SystemError> {
        let name = name.into();
        let invalid = |reason: String| SystemError::InvalidGroup { name: name.clone(), reason };
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(invalid(format!("indices not strictly increasing at {} -> {}", w[0], w[1])));
        }
        if let Some(&last) = indices.last() {
            if last >= n_atoms {
                return Err(invalid(format!("index {last} out of range for {n_atoms} atoms")));
            }
        }
        if let Some(max) = limits.max_atoms {
            if indices.len() > max {
                return Err(invalid(format!("{} atoms exceeds the limit of {max}", indices.len())));
            }
        }
        Ok(Group { name, indices })
    }

    /// One of the standard selections: `System`, `Protein`, `Backbone`,
    /// `C-alpha`, `Water` (alias `SOL`), `non-Water`. Case-insensitive.
    pub fn select(structure: &Structure, selection: &str) -> Result<Self, SystemError> {
        let is_protein = |i: usize| PROTEIN_RESIDUES.contains(&structure.atoms[i].residue_name.as_str());
        let name_is = |i: usize, names: &[&str]| names.contains(&structure.atoms[i].name.as_str());
        let is_water = |i: usize| structure.atoms[i].residue_name == WATER_RESIDUE;
        let all = 0..structure.n_atoms();
        let (name, indices): (&str, Vec<usize>) = match selection.to_ascii_lowercase().as_str() {
            "system" => ("System", all.collect()),
            "protein" => ("Protein", all.filter(|&i| is_protein(i)).collect()),
            "backbone" => ("Backbone", all.filter(|&i| is_protein(i) && name_is(i, &["N", "CA", "C"])).collect()),
            "c-alpha" | "calpha" | "ca" => ("C-alpha", all.filter(|&i| is_protein(i) && name_is(i, &["CA"])).collect()),
            "water" | "sol" => ("Water", all.filter(|&i| is_water(i)).collect()),
            "non-water" => ("non-Water", all.filter(|&i| !is_water(i)).collect()),
            _ => return Err(SystemError::UnknownGroup(selection.to_string())),
        };
        Group::new(name, indices, structure.n_atoms())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}
