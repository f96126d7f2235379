use std::fmt;
use std::str::FromStr;

use super::{parse_err, FormatError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Steepest-descent energy minimization.
    Steep,
    /// Leapfrog molecular dynamics.
    Md,
}

impl Integrator {
    pub fn as_str(self) -> &'static str {
        match self {
            Integrator::Steep => "steep",
            Integrator::Md => "md",
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Integrator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "steep" => Ok(Integrator::Steep),
            "md" => Ok(Integrator::Md),
            other => Err(format!("unknown integrator `{other}` (expected steep or md)")),
        }
    }
}

/// Run-control parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpParams {
    pub integrator: Integrator,
    pub nsteps: u64,
    /// ps
    pub dt: f64,
    /// kJ mol⁻¹ nm⁻¹
    pub emtol: f64,
    /// nm
    pub emstep: f64,
    /// Cutoff for both Lennard-Jones and Coulomb (nm).
    pub rcut: f64,
    pub nstxout: u64,
    pub nstenergy: u64,
    pub gen_vel: bool,
    /// K
    pub gen_temp: f64,
    pub gen_seed: u64,
}

impl Default for MdpParams {
    fn default() -> Self {
        MdpParams {
            integrator: Integrator::Md,
            nsteps: 0,
            dt: 0.001,
            emtol: 100.0,
            emstep: 0.01,
            rcut: 1.0,
            nstxout: 10,
            nstenergy: 1,
            gen_vel: false,
            gen_temp: 300.0,
            gen_seed: 1993,
        }
    }
}

impl MdpParams {
    /// Parameter-range problems, if any.
    pub fn check(&self) -> Result<(), String> {
        if self.integrator == Integrator::Md && !(self.dt > 0.0) {
            return Err(format!("dt must be positive for md, got {}", self.dt));
        }
        if self.integrator == Integrator::Steep {
            if !(self.emtol > 0.0) {
                return Err(format!("emtol must be positive, got {}", self.emtol));
            }
            if !(self.emstep > 0.0) {
                return Err(format!("emstep must be positive, got {}", self.emstep));
            }
        }
        if !(self.rcut > 0.0) {
            return Err(format!("rcut must be positive, got {}", self.rcut));
        }
        if self.nstxout == 0 || self.nstenergy == 0 {
            return Err("nstxout and nstenergy must be at least 1".into());
        }
        if self.gen_vel && !(self.gen_temp >= 0.0) {
            return Err(format!("gen_temp must be non-negative, got {}", self.gen_temp));
        }
        Ok(())
    }

    /// mdp text reproducing these parameters.
    pub fn to_mdp(&self) -> String {
        format!(
            "integrator = {}\nnsteps = {}\ndt = {}\nemtol = {}\nemstep = {}\nrcut = {}\nnstxout = {}\nnstenergy = {}\ngen_vel = {}\ngen_temp = {}\ngen_seed = {}\n",
            self.integrator,
            self.nsteps,
            self.dt,
            self.emtol,
            self.emstep,
            self.rcut,
            self.nstxout,
            self.nstenergy,
            if self.gen_vel { "yes" } else { "no" },
            self.gen_temp,
            self.gen_seed
        )
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "yes" | "true" | "on" | "1" => Some(true),
        "no" | "false" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// Parses `key = value` lines. Unknown keys are returned as warnings.
///
/// Keys are case-insensitive and `-`/`_` are interchangeable. `rvdw`,
/// `rcoulomb` and `rlist` are accepted as aliases of `rcut`.
pub fn parse_mdp(text: &str) -> Result<(MdpParams, Vec<String>), FormatError> {
    let mut p = MdpParams::default();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            warnings.push(format!("line {lineno}: ignoring `{line}` (no `=`)"));
            continue;
        };
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        let bad = |what: &str| parse_err(lineno, format!("invalid value `{value}` for {key}: expected {what}"));
        let float = || value.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("a number"));
        let int = || value.parse::<u64>().map_err(|_| bad("a non-negative integer"));
        match key.as_str() {
            "integrator" => p.integrator = value.parse().map_err(|e: String| parse_err(lineno, e))?,
            "nsteps" => p.nsteps = int()?,
            "dt" => p.dt = float()?,
            "emtol" => p.emtol = float()?,
            "emstep" => p.emstep = float()?,
            "rcut" | "rvdw" | "rcoulomb" | "rlist" => p.rcut = float()?,
            "nstxout" => p.nstxout = int()?,
            "nstenergy" => p.nstenergy = int()?,
            "gen_vel" => p.gen_vel = parse_bool(value).ok_or_else(|| bad("yes or no"))?,
            "gen_temp" => p.gen_temp = float()?,
            "gen_seed" => p.gen_seed = int()?,
            _ => warnings.push(format!("line {lineno}: unknown parameter `{key}` ignored")),
        }
    }
    Ok((p, warnings))
}
