use std::time::Instant;

use crate::engine::{minimize, run_md, MemorySink};
use crate::formats::XvgData;
use crate::prep::RunInput;
use crate::system::{Topology, WATER_RESIDUE};

/// One benchmark system: a minimization input and a dynamics input for the
/// same atoms. Dynamics starts from the minimized coordinates.
#[derive(Debug, Clone)]
pub struct BenchmarkInput {
    pub label: String,
    pub minimize: RunInput,
    pub dynamics: RunInput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub label: String,
    pub atom_count: usize,
    pub water_count: usize,
    pub chain_count: usize,
    /// Median seconds over the repeats.
    pub em_wall: f64,
    pub md_wall: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    pub repeats: usize,
}

/// Connected components of the bond graph among non-water atoms.
pub fn chain_count(topology: &Topology, residue_names: &[&str]) -> usize {
    let t = topology.expand();
    let n = residue_names.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for b in &t.bonds {
        if b.i < n && b.j < n {
            let (ri, rj) = (find(&mut parent, b.i), find(&mut parent, b.j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    (0..n).filter(|&i| residue_names[i] != WATER_RESIDUE && find(&mut parent, i) == i).count()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn time_one(input: &BenchmarkInput, threads: usize) -> Result<(f64, f64), String> {
    let mut sink = MemorySink { skip_frames: true, ..Default::default() };
    let t0 = Instant::now();
    let em = minimize(&input.minimize, &mut sink, threads).map_err(|e| format!("minimization: {e}"))?;
    let em_wall = t0.elapsed().as_secs_f64();
    let mut start = em.structure;
    start.velocities = input.dynamics.structure().velocities.clone();
    let md_input = input.dynamics.with_structure(start).map_err(|e| format!("dynamics input: {e}"))?;
    let t1 = Instant::now();
    run_md(&md_input, &mut sink, threads).map_err(|e| format!("dynamics: {e}"))?;
    Ok((em_wall, t1.elapsed().as_secs_f64()))
}

/// Runs minimization then dynamics for every input `repeats` times, one
/// system at a time, and reports median wall times. A failing system gets a
/// row with its error; the others still run.
pub fn run_benchmark(inputs: &[BenchmarkInput], repeats: usize, threads: usize) -> BenchmarkReport {
    let repeats = repeats.max(1);
    let rows = inputs
        .iter()
        .map(|input| {
            let s = input.dynamics.structure();
            let names: Vec<&str> = s.atoms.iter().map(|a| a.residue_name.as_str()).collect();
            let mut row = BenchmarkRow {
                label: input.label.clone(),
                atom_count: s.n_atoms(),
                water_count: input.dynamics.topology().water_count(),
                chain_count: chain_count(input.dynamics.topology(), &names),
                em_wall: 0.0,
                md_wall: 0.0,
                error: None,
            };
            let mut em = Vec::with_capacity(repeats);
            let mut md = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                match time_one(input, threads) {
                    Ok((e, m)) => {
                        em.push(e);
                        md.push(m);
                    }
                    Err(e) => {
                        row.error = Some(e);
                        break;
                    }
                }
            }
            if row.error.is_none() {
                row.em_wall = median(em);
                row.md_wall = median(md);
            }
            row
        })
        .collect();
    BenchmarkReport { rows, repeats }
}

impl BenchmarkReport {
    /// Aligned plain-text table, one line per system.
    pub fn table(&self) -> String {
        let header = ["System", "Atoms", "Waters", "Chains", "EM time (s)", "MD time (s)"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                let (em, md) = match &r.error {
                    Some(_) => ("failed".to_string(), "failed".to_string()),
                    None => (format!("{:.3}", r.em_wall), format!("{:.3}", r.md_wall)),
                };
                [
                    r.label.clone(),
                    r.atom_count.to_string(),
                    r.water_count.to_string(),
                    r.chain_count.to_string(),
                    em,
                    md,
                ]
            })
            .collect();
        let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
        for row in &body {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { format!("{c:<w$}", w = width[k]) } else { format!("{c:>w$}", w = width[k]) })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(header.to_vec(), &mut out);
        let total: usize = width.iter().sum::<usize>() + 2 * (width.len() - 1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &body {
            line(row.iter().map(String::as_str).collect(), &mut out);
        }
        for r in self.rows.iter().filter(|r| r.error.is_some()) {
            out.push_str(&format!("{}: {}\n", r.label, r.error.as_deref().unwrap_or_default()));
        }
        out.push_str(&format!("median of {} repeat(s)\n", self.repeats));
        out
    }

    /// Wall times against atom count, sorted by atom count; failed rows are left out.
    pub fn xvg(&self) -> XvgData {
        let mut ok: Vec<&BenchmarkRow> = self.rows.iter().filter(|r| r.error.is_none()).collect();
        ok.sort_by_key(|r| r.atom_count);
        XvgData::new("Simulation time", "Atoms", "Time (s)")
            .with_x(ok.iter().map(|r| r.atom_count as f64).collect())
            .column("MD", ok.iter().map(|r| r.md_wall).collect())
            .column("EM", ok.iter().map(|r| r.em_wall).collect())
    }
}
