mod common;

use common::*;
use minimd::engine::{leapfrog_step, minimize, run_md, ForceField, MemorySink, SimState};
use minimd::formats::MdpParams;
use minimd::prep::preprocess;
use minimd::system::{Atom, Bond, SimBox, Structure, Topology, Vec3};
use minimd::BoxKind;

fn two_atoms(sep: f64, lj: bool, bond: Option<(f64, f64)>) -> (Structure, Topology) {
    let mut atoms = Vec::new();
    for k in 0..2 {
        let mut a = Atom::new(if k == 0 { "A" } else { "B" }, "Ar", "AR", k + 1);
        a.mass = 39.948;
        a.sigma = 0.34;
        a.epsilon = if lj { 0.99 } else { 0.0 };
        a.vdw_radius = 0.188;
        atoms.push(a);
    }
    let c = 2.0;
    let mut s = Structure::new("pair", atoms, vec![Vec3::new(c - sep / 2.0, c, c), Vec3::new(c + sep / 2.0, c, c)]).unwrap();
    s.simbox = Some(SimBox::from_type(BoxKind::Cubic, 4.0).unwrap());
    let mut t = Topology::empty("pair", 2);
    if let Some((kb, r0)) = bond {
        t.bonds.push(Bond { i: 0, j: 1, kb, r0 });
        t.exclude_bonded();
    }
    (s, t)
}

#[test]
fn lj_dimer_minimizes_to_potential_minimum() {
    let (s, t) = two_atoms(0.45, true, None);
    let params = MdpParams { rcut: 1.5, emtol: 1e-3, nsteps: 5000, ..em_params(5000) };
    let input = preprocess(&s, &t, &params).unwrap();
    let mut sink = MemorySink::default();
    let res = minimize(&input, &mut sink, 1).unwrap();
    assert!(res.converged);
    let r = (res.structure.positions[1] - res.structure.positions[0]).norm();
    let want = 2f64.powf(1.0 / 6.0) * 0.34;
    assert!((r - want).abs() < 1e-3, "separation {r}, expected {want}");
    for w in res.energies.windows(2) {
        assert!(w[1].potential < w[0].potential);
    }
    assert_eq!(sink.energies.len(), res.energies.len());
}

#[test]
fn minimize_on_converged_input_takes_no_steps() {
    let (s, t) = two_atoms(2f64.powf(1.0 / 6.0) * 0.34, true, None);
    let params = MdpParams { rcut: 1.5, emtol: 10.0, ..em_params(100) };
    let input = preprocess(&s, &t, &params).unwrap();
    let res = minimize(&input, &mut MemorySink::default(), 1).unwrap();
    assert!(res.converged);
    assert_eq!(res.energies.len(), 1);
    assert_eq!(res.iterations, 0);
}

#[test]
fn parabola_minimum_is_found() {
    // bond-only pair: V = ½ k (r − r0)²
    let (s, t) = two_atoms(0.3, false, Some((1000.0, 0.2)));
    let params = MdpParams { rcut: 1.5, emtol: 1e-4, ..em_params(2000) };
    let input = preprocess(&s, &t, &params).unwrap();
    let res = minimize(&input, &mut MemorySink::default(), 1).unwrap();
    let r = (res.structure.positions[1] - res.structure.positions[0]).norm();
    assert!((r - 0.2).abs() < 1e-6, "r = {r}");
    assert!(res.energies.last().unwrap().potential < 1e-8);
}

#[test]
fn minimization_is_monotone_on_random_systems() {
    for seed in 0..5 {
        let (s, t, _) = random_molecules(seed, 10, 0.2);
        let params = MdpParams { rcut: 0.9, ..em_params(100) };
        let input = preprocess(&s, &t, &params).unwrap();
        let res = minimize(&input, &mut MemorySink::default(), 1).unwrap();
        assert!(res.energies.len() <= 101);
        for w in res.energies.windows(2) {
            assert!(w[1].potential < w[0].potential, "seed {seed}");
        }
    }
}

#[test]
fn minimizer_rejects_md_input() {
    let input = water_input(8, &MdpParams { rcut: 0.3, ..md_params(10) });
    assert!(minimize(&input, &mut MemorySink::default(), 1).is_err());
    let em = water_input(8, &MdpParams { rcut: 0.3, ..em_params(10) });
    assert!(run_md(&em, &mut MemorySink::default(), 1).is_err());
}

#[test]
fn harmonic_oscillator_period() {
    // reduced mass μ = m/2; ω = sqrt(k/μ)
    let (kb, r0) = (1000.0, 0.2);
    let (s, t) = two_atoms(0.21, false, Some((kb, r0)));
    let mu = 39.948 / 2.0;
    let period = 2.0 * std::f64::consts::PI * (mu / kb).sqrt();
    let dt = period / 2000.0;
    let params = MdpParams { dt, rcut: 1.5, nstenergy: 1, nstxout: 1, ..md_params(4000) };
    let input = preprocess(&s, &t, &MdpParams { gen_vel: false, ..params }).unwrap();
    let mut sink = MemorySink::default();
    run_md(&input, &mut sink, 1).unwrap();
    let sep: Vec<f64> = sink.frames.iter().map(|f| (f.positions[1] - f.positions[0]).norm() - r0).collect();
    // upward zero crossings of the displacement
    let crossings: Vec<f64> = sep
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < 0.0 && w[1] >= 0.0)
        .map(|(k, w)| (k as f64 + w[0] / (w[0] - w[1])) * dt)
        .collect();
    assert!(crossings.len() >= 2);
    let measured = crossings[1] - crossings[0];
    assert!((measured - period).abs() / period < 1e-3, "period {measured} vs {period}");
}

#[test]
fn leapfrog_is_time_reversible() {
    let input = water_input(27, &MdpParams { rcut: 0.4, ..md_params(0) });
    let ff = ForceField::new(&input.structure().atoms, input.topology(), 0.4).unwrap();
    let masses: Vec<f64> = input.structure().atoms.iter().map(|a| a.mass).collect();
    let dt = 0.001;
    let mut state = SimState::new(input.structure(), &ff).unwrap();
    let x0 = state.positions.clone();
    for _ in 0..50 {
        leapfrog_step(&mut state, &ff, &masses, dt).unwrap();
    }
    // reverse: v(t+dt/2) → −v, then undo drift and kick in reverse order
    for v in &mut state.velocities {
        *v = -*v;
    }
    for _ in 0..50 {
        for i in 0..masses.len() {
            state.positions[i] += state.velocities[i] * dt;
        }
        let out = ff.compute(&state.positions, &state.simbox).unwrap();
        for i in 0..masses.len() {
            state.velocities[i] += out.forces[i] * (dt / masses[i]);
        }
    }
    let err = state.positions.iter().zip(&x0).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9, "returned {err} nm from the start");
}

#[test]
fn md_output_counts() {
    let params = MdpParams { nstxout: 100, nstenergy: 10, ..md_params(500) };
    let input = water_input(64, &MdpParams { rcut: 0.5, ..params });
    let mut sink = MemorySink::default();
    let summary = run_md(&input, &mut sink, 1).unwrap();
    assert_eq!(sink.frames.len(), 6);
    assert_eq!(sink.energies.len(), 51);
    assert_eq!(sink.energies.last().unwrap().step, 500);
    assert_eq!(summary.steps, 500);
    let e = &sink.energies[3];
    let sum: f64 = e.terms.iter().map(|(_, v)| v).sum();
    assert!((sum - e.potential).abs() < 1e-9 * e.potential.abs().max(1.0));
}

#[test]
fn nve_water_conserves_energy() {
    let em = minimize(&water_input(216, &em_params(200)), &mut MemorySink::default(), 0).unwrap();
    let warm = MdpParams { nstenergy: 100, nstxout: 1000, gen_vel: true, ..md_params(1000) };
    let base = water_input(216, &warm);
    let topology = base.topology().clone();
    let input = preprocess(&em.structure, &topology, &warm).unwrap();
    let warmed = run_md(&input, &mut MemorySink::default(), 0).unwrap();

    let params = MdpParams { nstenergy: 1, nstxout: 1000, gen_vel: false, ..md_params(500) };
    let input = preprocess(&warmed.final_structure, &topology, &params).unwrap();
    let mut sink = MemorySink::default();
    run_md(&input, &mut sink, 0).unwrap();
    let e0 = sink.energies[0].total;
    let worst = sink.energies.iter().map(|e| (e.total - e0).abs()).fold(0.0, f64::max);
    eprintln!("E0 = {e0:.3}, worst drift {worst:.4} ({:.4}%)", 100.0 * worst / e0.abs());
    assert!(worst < 0.01 * e0.abs());
}

#[test]
fn blow_up_is_reported() {
    let input = water_input(27, &MdpParams { dt: 0.5, rcut: 0.4, ..md_params(200) });
    let mut sink = MemorySink::default();
    let err = run_md(&input, &mut sink, 1).unwrap_err();
    assert!(
        matches!(err, minimd::engine::EngineError::BlowUp { .. } | minimd::engine::EngineError::Singularity { .. }),
        "{err}"
    );
}

#[test]
fn velocities_generated_at_exact_temperature() {
    let input = water_input(64, &MdpParams { gen_vel: true, gen_temp: 300.0, rcut: 0.6, ..md_params(0) });
    let s = input.structure();
    let v = s.velocities.as_ref().unwrap();
    let masses: Vec<f64> = s.atoms.iter().map(|a| a.mass).collect();
    let ke = minimd::engine::kinetic_energy(&masses, v);
    let t = minimd::engine::temperature(ke, masses.len());
    assert!((t - 300.0).abs() < 1e-9);
    let p: Vec3<f64> = masses.iter().zip(v).map(|(&m, &vi)| vi * m).sum();
    assert!(p.norm() < 1e-9);
}
