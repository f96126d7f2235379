use super::{SimBox, SystemError, Vec3};

/// One atom: identity fields from the input file plus force-field parameters.
///
/// Parameters are zero until force-field assignment has run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Atom {
    pub name: String,
    pub element: String,
    pub residue_name: String,
    pub residue_seq: i32,
    /// amu
    pub mass: f64,
    /// elementary charges
    pub charge: f64,
    /// nm
    pub sigma: f64,
    /// kJ/mol
    pub epsilon: f64,
    /// nm
    pub vdw_radius: f64,
}

impl Atom {
    pub fn new(name: &str, element: &str, residue_name: &str, residue_seq: i32) -> Self {
        Atom {
            name: name.to_string(),
            element: element.to_string(),
            residue_name: residue_name.to_string(),
            residue_seq,
            ..Default::default()
        }
    }

    /// Guess a chemical symbol from an atom name: the first alphabetic character.
    pub fn element_from_name(name: &str) -> String {
        name.chars()
            .find(|c| c.is_ascii_alphabetic())
            .map(|c| c.to_ascii_uppercase().to_string())
            .unwrap_or_default()
    }
}

/// Atoms, coordinates (nm), optional velocities (nm/ps) and an optional box.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Structure {
    pub title: String,
    pub atoms: Vec<Atom>,
    pub positions: Vec<Vec3<f64>>,
    pub velocities: Option<Vec<Vec3<f64>>>,
    pub simbox: Option<SimBox<f64>>,
}

impl Structure {
    pub fn new(title: impl Into<String>, atoms: Vec<Atom>, positions: Vec<Vec3<f64>>) -> Result<Self, SystemError> {
        let s = Structure {
            title: title.into(),
            atoms,
            positions,
            velocities: None,
            simbox: None,
        };
        s.check_lengths()?;
        Ok(s)
    }

    #[inline]
    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn check_lengths(&self) -> Result<(), SystemError> {
        let atoms = self.atoms.len();
        if self.positions.len() != atoms {
            return Err(SystemError::LengthMismatch { atoms, what: "positions", len: self.positions.len() });
        }
        if let Some(v) = &self.velocities {
            if v.len() != atoms {
                return Err(SystemError::LengthMismatch { atoms, what: "velocities", len: v.len() });
            }
        }
        Ok(())
    }

    /// Unweighted centroid of the coordinates; zero for an empty structure.
    pub fn centroid(&self) -> Vec3<f64> {
        if self.positions.is_empty() {
            return Vec3::zero();
        }
        self.positions.iter().copied().sum::<Vec3<f64>>() / self.positions.len() as f64
    }

    pub fn translate(&mut self, shift: Vec3<f64>) {
        for p in &mut self.positions {
            *p += shift;
        }
    }

    /// Axis-aligned bounding box `(min, max)`; `None` when empty.
    pub fn bounds(&self) -> Option<(Vec3<f64>, Vec3<f64>)> {
        let first = *self.positions.first()?;
        Some(self.positions.iter().fold((first, first), |(lo, hi), &p| (lo.component_min(p), hi.component_max(p))))
    }

    /// Appends atoms of `other` (positions and, if both carry them, velocities).
    pub fn extend_from(&mut self, other: &Structure) {
        self.atoms.extend(other.atoms.iter().cloned());
        self.positions.extend_from_slice(&other.positions);
        self.velocities = match (self.velocities.take(), &other.velocities) {
            (Some(mut a), Some(b)) => {
                a.extend_from_slice(b);
                Some(a)
            }
            _ => None,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_guess() {
        assert_eq!(Atom::element_from_name(" CA "), "C");
        assert_eq!(Atom::element_from_name("1HB"), "H");
        assert_eq!(Atom::element_from_name("ow"), "O");
        assert_eq!(Atom::element_from_name("123"), "");
    }

    #[test]
    fn length_mismatch_detected() {
        let err = Structure::new("x", vec![Atom::new("C", "C", "ALA", 1)], vec![]).unwrap_err();
        assert!(matches!(err, SystemError::LengthMismatch { what: "positions", .. }));
    }
}
