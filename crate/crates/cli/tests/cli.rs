use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minimd::formats::{
    parse_gro, parse_mdp, parse_topology, read_energy, read_runinput, read_trajectory, write_gro, write_topology,
    TopologyFile, XvgData,
};
use minimd::prep::{preprocess, water_box, ForceFieldTable};
use minimd::{BoxKind, SimBox};
use tempfile::TempDir;

fn minimd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minimd"))
        .args(args)
        .current_dir(dir)
        .env_remove("MINIMD_FF")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[track_caller]
fn ok(dir: &Path, args: &[&str]) -> String {
    let out = minimd(dir, args);
    assert_eq!(code(&out), 0, "{args:?}\n{}", stderr(&out));
    stdout(&out)
}

/// A water box as gro + topology files.
fn water_files(dir: &Path, waters: usize) -> (PathBuf, PathBuf) {
    let ff = ForceFieldTable::builtin();
    let (s, t) = water_box(waters, ff.water().unwrap()).unwrap();
    let gro = dir.join("water.gro");
    let top = dir.join("water.top");
    fs::write(&gro, write_gro(&s).unwrap()).unwrap();
    fs::write(&top, write_topology(&TopologyFile::from_structure(&s, &t))).unwrap();
    (gro, top)
}

fn mdp(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn protein_pdb(dir: &Path) -> PathBuf {
    let p = dir.join("protein.pdb");
    fs::write(&p, minimd::SAMPLE_PROTEIN_PDB).unwrap();
    p
}

#[test]
fn help_exits_zero_everywhere() {
    let dir = TempDir::new().unwrap();
    for sub in ["", "convert", "editconf", "solvate", "grompp", "mdrun", "energy", "rms", "bench"] {
        let args: Vec<&str> = if sub.is_empty() { vec!["--help"] } else { vec![sub, "--help"] };
        let out = minimd(dir.path(), &args);
        assert_eq!(code(&out), 0, "{sub}");
        assert!(stdout(&out).contains("Usage"), "{sub}");
    }
    assert_eq!(code(&minimd(dir.path(), &["--version"])), 0);
}

#[test]
fn bad_flags_exit_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&minimd(dir.path(), &[])), 1);
    assert_eq!(code(&minimd(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&minimd(dir.path(), &["convert", "--bogus"])), 1);
    assert_eq!(code(&minimd(dir.path(), &["editconf", "-f", "a.gro", "-o", "b.gro", "--box-type", "sphere"])), 1);
}

#[test]
fn convert_writes_matching_structure() {
    let dir = TempDir::new().unwrap();
    let pdb = protein_pdb(dir.path());
    ok(dir.path(), &["convert", "-f", pdb.to_str().unwrap(), "-o", "p.gro", "-p", "p.top"]);
    let records = minimd::SAMPLE_PROTEIN_PDB
        .lines()
        .filter(|l| l.starts_with("ATOM  ") || l.starts_with("HETATM"))
        .count();
    let gro = parse_gro(&fs::read_to_string(dir.path().join("p.gro")).unwrap()).unwrap();
    assert_eq!(gro.n_atoms(), records);
    let top = parse_topology(&fs::read_to_string(dir.path().join("p.top")).unwrap()).unwrap();
    assert_eq!(top.topology.n_atoms(), records);
    assert!(!top.topology.bonds.is_empty());
}

#[test]
fn missing_input_exits_two_and_names_path() {
    let dir = TempDir::new().unwrap();
    let out = minimd(dir.path(), &["convert", "-f", "nowhere.pdb", "-o", "p.gro", "-p", "p.top"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nowhere.pdb"));
}

#[test]
fn unreadable_forcefield_exits_two() {
    let dir = TempDir::new().unwrap();
    let pdb = protein_pdb(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_minimd"))
        .args(["convert", "-f", pdb.to_str().unwrap(), "-o", "p.gro", "-p", "p.top"])
        .current_dir(dir.path())
        .env("MINIMD_FF", "missing.ff")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("missing.ff"));
}

#[test]
fn editconf_box_matches_requested_geometry() {
    let dir = TempDir::new().unwrap();
    let pdb = protein_pdb(dir.path());
    ok(dir.path(), &["convert", "-f", pdb.to_str().unwrap(), "-o", "p.gro", "-p", "p.top"]);
    let input = parse_gro(&fs::read_to_string(dir.path().join("p.gro")).unwrap()).unwrap();
    let (lo, hi) = input.bounds().unwrap();
    let side = (hi - lo).max_abs() + 2.0 * 1.2;
    ok(dir.path(), &["editconf", "-f", "p.gro", "-o", "box.gro", "--box-type", "cubic", "-d", "1.2"]);
    let boxed = parse_gro(&fs::read_to_string(dir.path().join("box.gro")).unwrap()).unwrap();
    let v = *boxed.simbox.unwrap().vectors();
    let det = v[0].cross(v[1]).dot(v[2]);
    let want = SimBox::from_type(BoxKind::Cubic, side).unwrap().volume();
    assert!((det - want).abs() <= 1e-4 * want, "{det} vs {want}");

    ok(dir.path(), &["editconf", "-f", "p.gro", "-o", "oct.gro", "--box-type", "octahedron", "-d", "1.0"]);
    let oct = parse_gro(&fs::read_to_string(dir.path().join("oct.gro")).unwrap()).unwrap();
    assert_eq!(oct.simbox.unwrap().kind(), BoxKind::Octahedron);

    for d in ["0", "-0.5"] {
        let out = minimd(dir.path(), &["editconf", "-f", "p.gro", "-o", "bad.gro", "-d", d]);
        assert_eq!(code(&out), 1, "d = {d}");
    }
}

#[test]
fn solvate_reports_and_respects_radii() {
    let dir = TempDir::new().unwrap();
    let pdb = protein_pdb(dir.path());
    ok(dir.path(), &["convert", "-f", pdb.to_str().unwrap(), "-o", "p.gro", "-p", "p.top"]);
    ok(dir.path(), &["editconf", "-f", "p.gro", "-o", "box.gro", "-d", "0.6"]);
    let text = ok(dir.path(), &["solvate", "-f", "box.gro", "-p", "p.top", "-o", "solv.gro", "--top-out", "solv.top"]);
    let added: usize = text.split_whitespace().nth(1).unwrap().parse().unwrap();

    let file = parse_topology(&fs::read_to_string(dir.path().join("solv.top")).unwrap()).unwrap();
    assert_eq!(file.topology.water_count(), added);
    let mut s = parse_gro(&fs::read_to_string(dir.path().join("solv.gro")).unwrap()).unwrap();
    file.apply_to(&mut s).unwrap();
    let b = s.simbox.unwrap();
    let (solute, water): (Vec<usize>, Vec<usize>) = (0..s.n_atoms()).partition(|&i| s.atoms[i].residue_name != "SOL");
    assert_eq!(water.len(), 3 * added);
    let mut violations = 0;
    for &w in &water {
        for &p in &solute {
            let r = s.atoms[w].vdw_radius + s.atoms[p].vdw_radius;
            // gro keeps three decimals
            if b.minimum_image(s.positions[w] - s.positions[p]).norm() < r - 2e-3 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);

    let out = minimd(dir.path(), &["solvate", "-f", pdb.to_str().unwrap(), "-p", "p.top", "-o", "x.gro"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stderr(&out).contains("no box"));
}

#[test]
fn grompp_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let (gro, top) = water_files(dir.path(), 64);
    let text = "integrator = md\nnsteps = 20\nrcut = 0.6\ngen_vel = yes\ngen_seed = 5\n";
    let m = mdp(dir.path(), "md.mdp", text);
    let args = ["grompp", "-f", m.to_str().unwrap(), "-c", gro.to_str().unwrap(), "-p", top.to_str().unwrap()];
    ok(dir.path(), &[&args[..], &["-o", "md.mrun"]].concat());
    let run = read_runinput(&fs::read(dir.path().join("md.mrun")).unwrap()).unwrap();

    let mut s = parse_gro(&fs::read_to_string(&gro).unwrap()).unwrap();
    let file = parse_topology(&fs::read_to_string(&top).unwrap()).unwrap();
    file.apply_to(&mut s).unwrap();
    let expected = preprocess(&s, &file.topology, &parse_mdp(text).unwrap().0).unwrap();
    assert_eq!(run.structure(), expected.structure());
    assert_eq!(run.topology(), expected.topology());
    assert_eq!(run.params(), expected.params());

    // --seed replaces gen_seed and is reproducible
    ok(dir.path(), &[&args[..], &["-o", "a.mrun", "--seed", "9"]].concat());
    ok(dir.path(), &[&args[..], &["-o", "b.mrun", "--seed", "9"]].concat());
    let a = fs::read(dir.path().join("a.mrun")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.mrun")).unwrap());
    assert_ne!(a, fs::read(dir.path().join("md.mrun")).unwrap());

    let long = mdp(dir.path(), "long.mdp", "integrator = md\nrcut = 2.0\n");
    let out = minimd(
        dir.path(),
        &["grompp", "-f", long.to_str().unwrap(), "-c", gro.to_str().unwrap(), "-p", top.to_str().unwrap(), "-o", "x.mrun"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("cutoff exceeds half box height"));
}

fn grompp(dir: &Path, gro: &Path, top: &Path, mdp_text: &str, out: &str) {
    let m = mdp(dir, &format!("{out}.mdp"), mdp_text);
    ok(dir, &["grompp", "-f", m.to_str().unwrap(), "-c", gro.to_str().unwrap(), "-p", top.to_str().unwrap(), "-o", out]);
}

#[test]
fn mdrun_emits_expected_counts() {
    let dir = TempDir::new().unwrap();
    let (gro, top) = water_files(dir.path(), 27);
    grompp(dir.path(), &gro, &top, "integrator = steep\nnsteps = 20\nrcut = 0.4\n", "em.mrun");
    let text = ok(dir.path(), &["mdrun", "-s", "em.mrun", "-e", "em.ene", "-c", "em.gro"]);
    assert!(text.contains("steepest descent"));
    let em = read_energy(&fs::read(dir.path().join("em.ene")).unwrap()).unwrap();
    for w in em.windows(2) {
        assert!(w[1].potential < w[0].potential);
    }

    let em_gro = dir.path().join("em.gro");
    grompp(
        dir.path(),
        &em_gro,
        &top,
        "integrator = md\nnsteps = 500\nrcut = 0.4\nnstxout = 100\nnstenergy = 10\ngen_vel = yes\n",
        "md.mrun",
    );
    ok(dir.path(), &["mdrun", "-s", "md.mrun", "-o", "md.trj", "-e", "md.ene", "-c", "md.gro"]);
    let frames = read_trajectory(&fs::read(dir.path().join("md.trj")).unwrap()).unwrap();
    let records = read_energy(&fs::read(dir.path().join("md.ene")).unwrap()).unwrap();
    assert_eq!(frames.len(), 500 / 100 + 1);
    assert_eq!(records.len(), 500 / 10 + 1);
    assert_eq!(records.last().unwrap().step, 500);

    // --minimize overrides an md input
    let text = ok(dir.path(), &["mdrun", "-s", "md.mrun", "--minimize"]);
    assert!(text.contains("steepest descent"));
}

#[test]
fn blow_up_exits_three_with_readable_output() {
    let dir = TempDir::new().unwrap();
    let (gro, top) = water_files(dir.path(), 27);
    grompp(
        dir.path(),
        &gro,
        &top,
        "integrator = md\nnsteps = 200\ndt = 0.5\nrcut = 0.4\nnstxout = 1\nnstenergy = 1\ngen_vel = yes\n",
        "bad.mrun",
    );
    let out = minimd(dir.path(), &["mdrun", "-s", "bad.mrun", "-o", "bad.trj", "-e", "bad.ene"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let frames = read_trajectory(&fs::read(dir.path().join("bad.trj")).unwrap()).unwrap();
    let records = read_energy(&fs::read(dir.path().join("bad.ene")).unwrap()).unwrap();
    assert!(!frames.is_empty());
    assert!(!records.is_empty());
    assert!(frames.len() < 201);
}

#[test]
fn energy_and_rms_outputs_match_series() {
    let dir = TempDir::new().unwrap();
    let (gro, top) = water_files(dir.path(), 27);
    grompp(
        dir.path(),
        &gro,
        &top,
        "integrator = md\nnsteps = 40\nrcut = 0.4\nnstxout = 10\nnstenergy = 4\ngen_vel = yes\n",
        "md.mrun",
    );
    ok(dir.path(), &["mdrun", "-s", "md.mrun", "-o", "md.trj", "-e", "md.ene"]);

    ok(dir.path(), &["energy", "-f", "md.ene", "--terms", "LJ,Coulomb,Total", "-o", "e.xvg"]);
    let rows = XvgData::parse_rows(&fs::read_to_string(dir.path().join("e.xvg")).unwrap()).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.len() == 4));
    let out = minimd(dir.path(), &["energy", "-f", "md.ene", "--terms", "Entropy"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("Entropy"));

    ok(dir.path(), &["rms", "-f", "md.trj", "-s", "md.mrun", "--group", "Water", "--fit", "-o", "r.xvg"]);
    let rows = XvgData::parse_rows(&fs::read_to_string(dir.path().join("r.xvg")).unwrap()).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[0][1].abs() < 1e-6);
    ok(dir.path(), &["rms", "-f", "md.trj", "-s", gro.to_str().unwrap(), "-p", top.to_str().unwrap(), "--group", "System"]);
    let out = minimd(dir.path(), &["rms", "-f", "md.trj", "-s", "md.mrun", "--group", "Lipids"]);
    assert_eq!(code(&out), 1);
    let out = minimd(dir.path(), &["rms", "-f", "md.trj", "-s", "md.mrun", "--group", "Protein"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn single_thread_runs_are_bit_identical() {
    let dir = TempDir::new().unwrap();
    let (gro, top) = water_files(dir.path(), 64);
    grompp(
        dir.path(),
        &gro,
        &top,
        "integrator = md\nnsteps = 30\nrcut = 0.6\nnstxout = 10\nnstenergy = 1\ngen_vel = yes\n",
        "md.mrun",
    );
    ok(dir.path(), &["mdrun", "--threads", "1", "-s", "md.mrun", "-o", "a.trj", "-e", "a.ene"]);
    ok(dir.path(), &["mdrun", "--threads", "1", "-s", "md.mrun", "-o", "b.trj", "-e", "b.ene"]);
    ok(dir.path(), &["mdrun", "--threads", "3", "-s", "md.mrun", "-o", "c.trj", "-e", "c.ene"]);
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.trj"), read("b.trj"));
    assert_eq!(read("a.ene"), read("b.ene"));
    assert_eq!(read("a.ene"), read("c.ene"));
}

#[test]
fn bench_writes_table_and_graph() {
    let dir = TempDir::new().unwrap();
    let text = ok(
        dir.path(),
        &[
            "bench", "--systems", "water:27,water:64", "--repeats", "1", "--em-steps", "5", "--md-steps", "5",
            "--rcut", "0.4", "--table", "t.txt", "--xvg", "b.xvg", "--seed", "3",
        ],
    );
    assert!(text.contains("water:27") && text.contains("water:64"));
    assert_eq!(fs::read_to_string(dir.path().join("t.txt")).unwrap(), text);
    let rows = XvgData::parse_rows(&fs::read_to_string(dir.path().join("b.xvg")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 81.0);

    let out = minimd(dir.path(), &["bench", "--systems", "ice:4"]);
    assert_eq!(code(&out), 1);
    let out = minimd(dir.path(), &["bench", "--systems", "water:8", "--rcut", "1.0"]);
    assert_eq!(code(&out), 1);
}
