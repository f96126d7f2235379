use super::PrepError;
use crate::system::{BoxKind, SimBox, Structure, Vec3};

/// Builds a box of `kind` around the solute with at least `d_edge` nm between
/// every atom and every face, and moves the solute's geometric center (the
/// middle of its bounding box) to the box center.
///
/// Cubic boxes use the largest extent on all three axes; triclinic requests
/// give a rectangular box sized per axis; octahedra are sized from the
/// bounding sphere so any orientation fits.
pub fn define_box(structure: &Structure, kind: BoxKind, d_edge: f64) -> Result<Structure, PrepError> {
    if !(d_edge > 0.0) || !d_edge.is_finite() {
        return Err(PrepError::Parameters(format!("edge distance must be positive, got {d_edge}")));
    }
    let (lo, hi) = structure.bounds().ok_or(PrepError::Empty("structure is empty"))?;
    let mid = (lo + hi) * 0.5;
    let extent = hi - lo;
    let simbox = match kind {
        BoxKind::Cubic => {
            let side = extent.max_abs() + 2.0 * d_edge;
            SimBox::from_type(BoxKind::Cubic, side)?
        }
        BoxKind::Triclinic => {
            let s = extent + Vec3::splat(2.0 * d_edge);
            SimBox::rectangular(s.x, s.y, s.z)?
        }
        BoxKind::Octahedron => {
            let radius = structure.positions.iter().map(|&p| (p - mid).norm()).fold(0.0, f64::max);
            SimBox::from_type(BoxKind::Octahedron, 2.0 * (radius + d_edge))?
        }
    };
    let mut out = structure.clone();
    out.translate(simbox.center() - mid);
    out.simbox = Some(simbox);
    Ok(out)
}
