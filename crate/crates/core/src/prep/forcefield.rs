use std::collections::BTreeMap;

use super::PrepError;
use crate::system::{Atom, Vec3, WATER_RESIDUE};

const DEFAULT_TABLE: &str = include_str!("../../data/forcefield.dat");

/// Per-element parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementParams {
    pub symbol: String,
    pub mass: f64,
    pub sigma: f64,
    pub epsilon: f64,
    pub vdw_radius: f64,
    pub covalent_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargeRule {
    /// `None` matches every residue.
    pub residue: Option<String>,
    pub atom: String,
    pub charge: f64,
}

/// One site of the rigid-geometry water template.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterSite {
    pub atom: Atom,
    /// Offset from the oxygen (nm).
    pub offset: Vec3<f64>,
}

/// Three-site water: oxygen first, then the two hydrogens.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterModel {
    pub sites: [WaterSite; 3],
    /// nm
    pub bond_length: f64,
    pub bond_k: f64,
    /// rad
    pub angle: f64,
    pub angle_k: f64,
}

impl WaterModel {
    /// Site positions with the oxygen at `oxygen`. Unflipped, the hydrogens
    /// lie in the xy plane pointing roughly along +x and +y; `flip` turns the
    /// molecule 180° about z so they point along −x and −y.
    pub fn place(&self, oxygen: Vec3<f64>, flip: bool) -> [Vec3<f64>; 3] {
        let s = if flip { -1.0 } else { 1.0 };
        self.sites.clone().map(|site| {
            let o = site.offset;
            oxygen + Vec3::new(s * o.x, s * o.y, o.z)
        })
    }
}

/// Element parameters, residue-specific charges and the water model.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceFieldTable {
    elements: BTreeMap<String, ElementParams>,
    charges: Vec<ChargeRule>,
    water: Option<WaterModel>,
}

fn number(line: usize, field: Option<&str>, what: &str) -> Result<f64, PrepError> {
    let raw = field.ok_or_else(|| PrepError::ForceField(format!("line {line}: missing {what}")))?;
    let v: f64 = raw
        .parse()
        .map_err(|_| PrepError::ForceField(format!("line {line}: `{raw}` is not a valid {what}")))?;
    if !v.is_finite() {
        return Err(PrepError::ForceField(format!("line {line}: {what} is not finite")));
    }
    Ok(v)
}

impl ForceFieldTable {
    /// The built-in table.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_TABLE).expect("built-in force-field table parses")
    }

    /// Parses a table with `[ elements ]`, `[ charges ]` and `[ water ]`
    /// sections; `;` starts a comment.
    pub fn parse(text: &str) -> Result<Self, PrepError> {
        let mut elements = BTreeMap::new();
        let mut charges = Vec::new();
        let mut water_sites: Vec<(String, String, f64, f64, f64)> = Vec::new();
        let mut bond = None;
        let mut angle = None;
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                section = line.trim_matches(|c| c == '[' || c == ']').trim().to_ascii_lowercase();
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            match section.as_str() {
                "elements" => {
                    if f.len() != 6 {
                        return Err(PrepError::ForceField(format!("line {line_no}: expected 6 fields")));
                    }
                    let e = ElementParams {
                        symbol: f[0].to_ascii_uppercase(),
                        mass: number(line_no, Some(f[1]), "mass")?,
                        sigma: number(line_no, Some(f[2]), "sigma")?,
                        epsilon: number(line_no, Some(f[3]), "epsilon")?,
                        vdw_radius: number(line_no, Some(f[4]), "vdW radius")?,
                        covalent_radius: number(line_no, Some(f[5]), "covalent radius")?,
                    };
                    if e.mass <= 0.0 || e.sigma <= 0.0 || e.epsilon < 0.0 || e.vdw_radius <= 0.0 || e.covalent_radius <= 0.0
                    {
                        return Err(PrepError::ForceField(format!(
                            "line {line_no}: element {} has a non-positive parameter",
                            e.symbol
                        )));
                    }
                    elements.insert(e.symbol.clone(), e);
                }
                "charges" => {
                    if f.len() != 3 {
                        return Err(PrepError::ForceField(format!("line {line_no}: expected residue, atom, charge")));
                    }
                    charges.push(ChargeRule {
                        residue: (f[0] != "*").then(|| f[0].to_string()),
                        atom: f[1].to_string(),
                        charge: number(line_no, Some(f[2]), "charge")?,
                    });
                }
                "water" => match f[0] {
                    "bond" => bond = Some((number(line_no, f.get(1).copied(), "bond length")?, number(line_no, f.get(2).copied(), "force constant")?)),
                    "angle" => angle = Some((number(line_no, f.get(1).copied(), "angle")?, number(line_no, f.get(2).copied(), "force constant")?)),
                    _ => {
                        if f.len() != 5 {
                            return Err(PrepError::ForceField(format!(
                                "line {line_no}: expected site, element, charge, sigma, epsilon"
                            )));
                        }
                        water_sites.push((
                            f[0].to_string(),
                            f[1].to_string(),
                            number(line_no, Some(f[2]), "charge")?,
                            number(line_no, Some(f[3]), "sigma")?,
                            number(line_no, Some(f[4]), "epsilon")?,
                        ));
                    }
                },
                "" => return Err(PrepError::ForceField(format!("line {line_no}: data before any section"))),
                other => return Err(PrepError::ForceField(format!("line {line_no}: unknown section `{other}`"))),
            }
        }
        let mut table = ForceFieldTable { elements, charges, water: None };
        if !water_sites.is_empty() || bond.is_some() || angle.is_some() {
            let (Some((r0, kb)), Some((theta_deg, ka))) = (bond, angle) else {
                return Err(PrepError::ForceField("water section needs `bond` and `angle` lines".into()));
            };
            if water_sites.len() != 3 {
                return Err(PrepError::ForceField(format!("water model needs 3 sites, found {}", water_sites.len())));
            }
            table.water = Some(table.build_water(&water_sites, r0, kb, theta_deg.to_radians(), ka)?);
        }
        Ok(table)
    }

    fn build_water(
        &self,
        sites: &[(String, String, f64, f64, f64)],
        r0: f64,
        kb: f64,
        theta: f64,
        ka: f64,
    ) -> Result<WaterModel, PrepError> {
        // bisector along (1, 1, 0)
        let quarter = std::f64::consts::FRAC_PI_4;
        let half = theta / 2.0;
        let raw = [
            Vec3::zero(),
            Vec3::new((quarter - half).cos(), (quarter - half).sin(), 0.0) * r0,
            Vec3::new((quarter + half).cos(), (quarter + half).sin(), 0.0) * r0,
        ];
        let mut out = Vec::with_capacity(3);
        for (k, (name, element, charge, sigma, epsilon)) in sites.iter().enumerate() {
            let e = self.element(element)?;
            let mut atom = Atom::new(name, element, WATER_RESIDUE, 1);
            atom.mass = e.mass;
            atom.charge = *charge;
            atom.sigma = *sigma;
            atom.epsilon = *epsilon;
            atom.vdw_radius = e.vdw_radius;
            out.push(WaterSite { atom, offset: raw[k] });
        }
        let sites: [WaterSite; 3] = out.try_into().expect("three sites");
        Ok(WaterModel { sites, bond_length: r0, bond_k: kb, angle: theta, angle_k: ka })
    }

    pub fn element(&self, symbol: &str) -> Result<&ElementParams, PrepError> {
        self.elements
            .get(&symbol.to_ascii_uppercase())
            .ok_or_else(|| PrepError::UnknownElement(symbol.to_string()))
    }

    pub fn water(&self) -> Result<&WaterModel, PrepError> {
        self.water.as_ref().ok_or_else(|| PrepError::ForceField("no water model in the force-field table".into()))
    }

    /// Charge for an atom: a residue-specific rule wins over a wildcard; zero
    /// when nothing matches.
    pub fn charge(&self, residue: &str, atom: &str) -> f64 {
        let specific = self.charges.iter().find(|r| r.residue.as_deref() == Some(residue) && r.atom == atom);
        let any = || self.charges.iter().find(|r| r.residue.is_none() && r.atom == atom);
        specific.or_else(any).map_or(0.0, |r| r.charge)
    }

    /// Fills mass, charge, Lennard-Jones and radius fields of `atom`. Water
    /// residues whose atom names match the model's sites take the model's
    /// parameters.
    pub fn assign(&self, atom: &mut Atom) -> Result<(), PrepError> {
        if atom.residue_name == WATER_RESIDUE {
            if let Some(site) = self.water.as_ref().and_then(|w| w.sites.iter().find(|s| s.atom.name == atom.name)) {
                atom.mass = site.atom.mass;
                atom.charge = site.atom.charge;
                atom.sigma = site.atom.sigma;
                atom.epsilon = site.atom.epsilon;
                atom.vdw_radius = site.atom.vdw_radius;
                return Ok(());
            }
        }
        let e = self.element(&atom.element)?;
        atom.mass = e.mass;
        atom.sigma = e.sigma;
        atom.epsilon = e.epsilon;
        atom.vdw_radius = e.vdw_radius;
        atom.charge = self.charge(&atom.residue_name, &atom.name);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_water_geometry() {
        let ff = ForceFieldTable::builtin();
        let w = ff.water().unwrap();
        let x = w.place(Vec3::new(1.0, 2.0, 3.0), false);
        assert_eq!(x[0], Vec3::new(1.0, 2.0, 3.0));
        let y = w.place(Vec3::new(1.0, 2.0, 3.0), true);
        assert!(((x[1] - x[0]) + (y[1] - y[0])).norm() < 1e-12);
        assert!((x[1] - x[0]).x > 0.09 && (x[2] - x[0]).y > 0.09);
        for h in [x[1], x[2]] {
            assert!(((h - x[0]).norm() - 0.1).abs() < 1e-12);
        }
        let cos = (x[1] - x[0]).dot(x[2] - x[0]) / 0.01;
        assert!((cos.acos().to_degrees() - 109.47).abs() < 1e-9);
        let q: f64 = w.sites.iter().map(|s| s.atom.charge).sum();
        assert!(q.abs() < 1e-12);
        assert_eq!(w.sites[0].atom.sigma, 0.3166);
        assert_eq!(w.sites[1].atom.epsilon, 0.0);
    }

    #[test]
    fn charge_rules() {
        let ff = ForceFieldTable::builtin();
        assert_eq!(ff.charge("LYS", "NZ"), 1.0);
        assert_eq!(ff.charge("ALA", "N"), -0.28);
        assert_eq!(ff.charge("ALA", "CB"), 0.0);
    }

    #[test]
    fn unknown_element_and_bad_tables() {
        let ff = ForceFieldTable::builtin();
        assert!(matches!(ff.element("Xx"), Err(PrepError::UnknownElement(_))));
        assert!(ff.element("cl").is_ok());
        assert!(ForceFieldTable::parse("[ elements ]\nC 12 0.3 0.4 0.17\n").is_err());
        assert!(ForceFieldTable::parse("[ bogus ]\nx\n").is_err());
        assert!(ForceFieldTable::parse("[ elements ]\nC -1 0.3 0.4 0.17 0.07\n").is_err());
        let no_water = ForceFieldTable::parse("[ elements ]\nC 12 0.3 0.4 0.17 0.07\n").unwrap();
        assert!(no_water.water().is_err());
    }
}
