use nalgebra::{Matrix3, SymmetricEigen};

use super::AnalysisError;
use crate::formats::{Frame, XvgData};
use crate::system::{Group, Structure, Vec3};

/// Rigid transform `x' = rotation · x + translation` superposing a mobile
/// set onto a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KabschFit {
    pub rotation: [[f64; 3]; 3],
    pub translation: Vec3<f64>,
    /// Weighted RMSD after the fit (nm).
    pub rmsd: f64,
}

impl KabschFit {
    pub fn apply(&self, x: Vec3<f64>) -> Vec3<f64> {
        let r = &self.rotation;
        Vec3::new(
            r[0][0] * x.x + r[0][1] * x.y + r[0][2] * x.z,
            r[1][0] * x.x + r[1][1] * x.y + r[1][2] * x.z,
            r[2][0] * x.x + r[2][1] * x.y + r[2][2] * x.z,
        ) + self.translation
    }
}

fn weighted_center(x: &[Vec3<f64>], w: &[f64], total: f64) -> Vec3<f64> {
    x.iter().zip(w).map(|(&p, &wi)| p * wi).sum::<Vec3<f64>>() / total
}

fn outer(a: Vec3<f64>, b: Vec3<f64>) -> Matrix3<f64> {
    Matrix3::new(a.x * b.x, a.x * b.y, a.x * b.z, a.y * b.x, a.y * b.y, a.y * b.z, a.z * b.x, a.z * b.y, a.z * b.z)
}

/// Errors when the centered points span less than a plane.
fn check_spread(x: &[Vec3<f64>], w: &[f64], c: Vec3<f64>, which: &str) -> Result<(), AnalysisError> {
    let cov = x.iter().zip(w).fold(Matrix3::zeros(), |acc, (&p, &wi)| acc + outer(p - c, p - c) * wi);
    let mut ev: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    if ev[0] <= 0.0 {
        return Err(AnalysisError::Degenerate(format!("{which} points are coincident")));
    }
    if ev[1] <= 1e-12 * ev[0] {
        return Err(AnalysisError::Degenerate(format!("{which} points are collinear")));
    }
    Ok(())
}

/// Weighted RMSD without any fitting.
pub fn rmsd(a: &[Vec3<f64>], b: &[Vec3<f64>], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let s: f64 = a.iter().zip(b).zip(weights).map(|((&p, &q), &w)| w * (p - q).norm2()).sum();
    (s / total).sqrt()
}

/// Proper rotation and translation minimizing the weighted squared deviation
/// of `mobile` from `reference`, with the reflection case corrected.
pub fn kabsch_fit(mobile: &[Vec3<f64>], reference: &[Vec3<f64>], weights: &[f64]) -> Result<KabschFit, AnalysisError> {
    if mobile.len() != reference.len() || weights.len() != reference.len() {
        return Err(AnalysisError::AtomCount {
            what: "mobile set".into(),
            expected: reference.len(),
            found: mobile.len().min(weights.len()),
        });
    }
    if reference.len() < 3 {
        return Err(AnalysisError::Degenerate(format!("{} points; at least 3 are needed", reference.len())));
    }
    if weights.iter().any(|&w| !(w >= 0.0)) {
        return Err(AnalysisError::Degenerate("negative or non-finite weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(AnalysisError::Degenerate("weights sum to zero".into()));
    }
    let cm = weighted_center(mobile, weights, total);
    let cr = weighted_center(reference, weights, total);
    check_spread(reference, weights, cr, "reference")?;
    check_spread(mobile, weights, cm, "mobile")?;
    // covariance H = Σ w (m − cm)(r − cr)ᵀ; R = V·diag(1, 1, d)·Uᵀ
    let h = mobile
        .iter()
        .zip(reference)
        .zip(weights)
        .fold(Matrix3::zeros(), |acc, ((&m, &r), &w)| acc + outer(m - cm, r - cr) * w);
    let svd = h.svd(true, true);
    let u = svd.u.expect("U requested");
    let v_t = svd.v_t.expect("Vᵀ requested");
    let v = v_t.transpose();
    let d = (v * u.transpose()).determinant().signum();
    let r = v * Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, d)) * u.transpose();
    let rotation = [
        [r[(0, 0)], r[(0, 1)], r[(0, 2)]],
        [r[(1, 0)], r[(1, 1)], r[(1, 2)]],
        [r[(2, 0)], r[(2, 1)], r[(2, 2)]],
    ];
    let mut fit = KabschFit { rotation, translation: Vec3::zero(), rmsd: 0.0 };
    fit.translation = cr - fit.apply(cm);
    let moved: Vec<Vec3<f64>> = mobile.iter().map(|&p| fit.apply(p)).collect();
    fit.rmsd = rmsd(&moved, reference, weights);
    Ok(fit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmsdSeries {
    /// ps
    pub times: Vec<f64>,
    /// nm
    pub values: Vec<f64>,
    pub reference: String,
    pub group: String,
    pub fit: bool,
    pub mass_weighted: bool,
}

impl RmsdSeries {
    pub fn to_xvg(&self) -> XvgData {
        let title = format!("RMSD {} vs {}{}", self.group, self.reference, if self.fit { " after fit" } else { "" });
        XvgData::new(&title, "Time (ps)", "RMSD (nm)")
            .with_x(self.times.clone())
            .column(self.group.as_str(), self.values.clone())
    }
}

/// RMSD of `group` in every frame against `reference`, optionally after a
/// least-squares fit of the same group. Weights are the reference masses
/// when `mass_weighted` and all of them are positive, else uniform.
pub fn rmsd_series(
    frames: &[Frame],
    reference: &Structure,
    group: &Group,
    fit: bool,
    mass_weighted: bool,
) -> Result<RmsdSeries, AnalysisError> {
    let n = reference.n_atoms();
    if let Some(&bad) = group.indices().iter().find(|&&i| i >= n) {
        return Err(AnalysisError::AtomCount { what: format!("group index {bad} vs reference"), expected: n, found: bad });
    }
    if group.is_empty() {
        return Err(AnalysisError::Empty("atoms in the group"));
    }
    let idx = group.indices();
    let masses: Vec<f64> = idx.iter().map(|&i| reference.atoms[i].mass).collect();
    let use_mass = mass_weighted && masses.iter().all(|&m| m > 0.0);
    let weights = if use_mass { masses } else { vec![1.0; idx.len()] };
    let ref_x: Vec<Vec3<f64>> = idx.iter().map(|&i| reference.positions[i]).collect();
    let mut times = Vec::with_capacity(frames.len());
    let mut values = Vec::with_capacity(frames.len());
    for (k, frame) in frames.iter().enumerate() {
        if frame.positions.len() != n {
            return Err(AnalysisError::AtomCount {
                what: format!("frame {k} (step {})", frame.step),
                expected: n,
                found: frame.positions.len(),
            });
        }
        let x: Vec<Vec3<f64>> = idx.iter().map(|&i| frame.positions[i]).collect();
        let value = if fit { kabsch_fit(&x, &ref_x, &weights)?.rmsd } else { rmsd(&x, &ref_x, &weights) };
        times.push(frame.time);
        values.push(value);
    }
    Ok(RmsdSeries {
        times,
        values,
        reference: reference.title.clone(),
        group: group.name().to_string(),
        fit,
        mass_weighted: use_mass,
    })
}
