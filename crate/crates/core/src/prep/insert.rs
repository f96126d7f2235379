use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::PrepError;
use crate::system::{Structure, Vec3};

/// Placement attempts allowed per requested copy.
const ATTEMPTS_PER_COPY: usize = 100;
/// Radius used for atoms without an assigned van der Waals radius.
const FALLBACK_RADIUS: f64 = 0.15;

fn radius(r: f64) -> f64 {
    if r > 0.0 {
        r
    } else {
        FALLBACK_RADIUS
    }
}

/// Uniformly random rotation matrix from a normalized quaternion.
fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let mut q: [f64; 4] = [0.0; 4];
    loop {
        for v in &mut q {
            *v = rng.sample(StandardNormal);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-6 {
            q.iter_mut().for_each(|v| *v /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Adds `count` randomly placed and oriented copies of `molecule` to the box of
/// `structure`, rejecting placements where any two atoms come closer than their
/// summed van der Waals radii. Gives up after `100 × count` attempts.
pub fn insert_random(structure: &Structure, molecule: &Structure, count: usize, seed: u64) -> Result<Structure, PrepError> {
    let simbox = structure.simbox.ok_or(PrepError::NoBox)?;
    if molecule.is_empty() {
        return Err(PrepError::Empty("molecule to insert is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centroid = molecule.centroid();
    let local: Vec<Vec3<f64>> = molecule.positions.iter().map(|&p| p - centroid).collect();
    let mut out = structure.clone();
    let mut resseq = out.atoms.last().map_or(0, |a| a.residue_seq);
    let budget = ATTEMPTS_PER_COPY * count;
    let mut placed = 0;
    let mut attempts = 0;
    while placed < count {
        if attempts == budget {
            return Err(PrepError::InsertFailed { placed, requested: count, attempts });
        }
        attempts += 1;
        let r = random_rotation(&mut rng);
        let s = Vec3::new(rng.random::<f64>(), rng.random(), rng.random());
        let center = simbox.to_cartesian(s);
        let trial: Vec<Vec3<f64>> = local
            .iter()
            .map(|p| {
                let rot = Vec3::new(
                    r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z,
                    r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z,
                    r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z,
                );
                simbox.wrap_position(center + rot)
            })
            .collect();
        let clash = trial.iter().zip(&molecule.atoms).any(|(&p, a)| {
            out.positions
                .iter()
                .zip(&out.atoms)
                .any(|(&q, b)| simbox.minimum_image(p - q).norm() < radius(a.vdw_radius) + radius(b.vdw_radius))
        });
        if clash {
            continue;
        }
        resseq += 1;
        for (a, p) in molecule.atoms.iter().zip(trial) {
            let mut atom = a.clone();
            atom.residue_seq = resseq;
            out.atoms.push(atom);
            out.positions.push(p);
        }
        if let Some(v) = &mut out.velocities {
            v.resize(out.positions.len(), Vec3::zero());
        }
        placed += 1;
    }
    Ok(out)
}
