use std::fmt;
use std::str::FromStr;

use super::{SystemError, Vec3};
use crate::real::Real;

/// Shape family of a periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoxKind {
    Triclinic,
    Cubic,
    Octahedron,
}

impl BoxKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoxKind::Triclinic => "triclinic",
            BoxKind::Cubic => "cubic",
            BoxKind::Octahedron => "octahedron",
        }
    }

    pub(crate) fn code(self) -> u32 {
        match self {
            BoxKind::Triclinic => 0,
            BoxKind::Cubic => 1,
            BoxKind::Octahedron => 2,
        }
    }

    pub(crate) fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(BoxKind::Triclinic),
            1 => Some(BoxKind::Cubic),
            2 => Some(BoxKind::Octahedron),
            _ => None,
        }
    }
}

impl fmt::Display for BoxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoxKind {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "triclinic" => Ok(BoxKind::Triclinic),
            "cubic" => Ok(BoxKind::Cubic),
            "octahedron" | "octahedral" => Ok(BoxKind::Octahedron),
            other => Err(SystemError::UnknownBoxKind(other.to_string())),
        }
    }
}

/// Periodic simulation box.
///
/// The three box vectors are stored row-wise in lower-triangular normal form:
/// `a = (ax, 0, 0)`, `b = (bx, by, 0)`, `c = (cx, cy, cz)` with a positive
/// diagonal. Every constructor normalizes to this form, so two boxes describing
/// the same lattice in the same orientation compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimBox<T> {
    kind: BoxKind,
    vectors: [Vec3<T>; 3],
}

impl<T: Real> SimBox<T> {
    /// Box of the given kind with characteristic size `d` (nm).
    ///
    /// Cubic and triclinic give `diag(d, d, d)`; octahedron gives the
    /// truncated-octahedron lattice whose shortest lattice vectors have length `d`.
    pub fn from_type(kind: BoxKind, d: T) -> Result<Self, SystemError> {
        if !(d > T::zero()) || !d.is_finite() {
            return Err(SystemError::NonPositiveSize(d.as_f64()));
        }
        let zero = T::zero();
        let vectors = match kind {
            BoxKind::Cubic | BoxKind::Triclinic => [
                Vec3::new(d, zero, zero),
                Vec3::new(zero, d, zero),
                Vec3::new(zero, zero, d),
            ],
            BoxKind::Octahedron => {
                let three = T::lit(3.0);
                let sqrt2 = T::lit(2.0).sqrt();
                let sqrt6 = T::lit(6.0).sqrt();
                [
                    Vec3::new(d, zero, zero),
                    Vec3::new(d / three, T::lit(2.0) * sqrt2 / three * d, zero),
                    Vec3::new(-d / three, sqrt2 / three * d, sqrt6 / three * d),
                ]
            }
        };
        Self::from_vectors(kind, vectors)
    }

    /// Rectangular box with edge lengths `lx`, `ly`, `lz`. Equal edges give a cubic box.
    pub fn rectangular(lx: T, ly: T, lz: T) -> Result<Self, SystemError> {
        let zero = T::zero();
        let kind = if lx == ly && ly == lz {
            BoxKind::Cubic
        } else {
            BoxKind::Triclinic
        };
        Self::from_vectors(
            kind,
            [
                Vec3::new(lx, zero, zero),
                Vec3::new(zero, ly, zero),
                Vec3::new(zero, zero, lz),
            ],
        )
    }

    /// Builds a box from three arbitrary right-handed vectors, rotating them
    /// into lower-triangular normal form.
    pub fn from_vectors(kind: BoxKind, v: [Vec3<T>; 3]) -> Result<Self, SystemError> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(SystemError::DegenerateBox("non-finite box vector".into()));
        }
        let det = v[0].cross(v[1]).dot(v[2]);
        let scale = v[0].norm() * v[1].norm() * v[2].norm();
        if !(det > T::lit(1e-12) * scale) || scale == T::zero() {
            return Err(SystemError::DegenerateBox(format!(
                "box volume {} is not positive",
                det.as_f64()
            )));
        }
        let zero = T::zero();
        let ax = v[0].norm();
        let ea = v[0] / ax;
        let bx = v[1].dot(ea);
        let by = (v[1].norm2() - bx * bx).max(zero).sqrt();
        let cx = v[2].dot(ea);
        let cy = (v[2].dot(v[1]) - cx * bx) / by;
        let cz = (v[2].norm2() - cx * cx - cy * cy).max(zero).sqrt();
        // lengths and angles are preserved, so already-normal input comes back bit-identical
        let (bx, by, cx, cy, cz) = if v[0].y == zero
            && v[0].z == zero
            && v[1].z == zero
            && v[0].x > zero
            && v[1].y > zero
            && v[2].z > zero
        {
            (v[1].x, v[1].y, v[2].x, v[2].y, v[2].z)
        } else {
            (bx, by, cx, cy, cz)
        };
        if !(by > zero && cz > zero) {
            return Err(SystemError::DegenerateBox("coplanar box vectors".into()));
        }
        let vectors = [
            Vec3::new(ax, zero, zero),
            Vec3::new(bx, by, zero),
            Vec3::new(cx, cy, cz),
        ];
        if kind == BoxKind::Cubic && !(bx == zero && cx == zero && cy == zero && ax == by && by == cz) {
            return Err(SystemError::NotCubic);
        }
        Ok(SimBox { kind, vectors })
    }

    /// Box vectors from a raw lower-triangular matrix, guessing the kind from its shape.
    pub fn infer_kind(vectors: [Vec3<T>; 3], rel_tol: T) -> Result<Self, SystemError> {
        let zero = T::zero();
        let [a, b, c] = vectors;
        let close = |x: T, y: T| (x - y).abs() <= rel_tol * a.x.abs();
        let kind = if b.x == zero && c.x == zero && c.y == zero && a.x == b.y && b.y == c.z {
            BoxKind::Cubic
        } else {
            let oct = Self::from_type(BoxKind::Octahedron, a.x)?;
            let o = oct.vectors;
            let matches = [(b.x, o[1].x), (b.y, o[1].y), (c.x, o[2].x), (c.y, o[2].y), (c.z, o[2].z)]
                .iter()
                .all(|&(p, q)| close(p, q));
            if matches {
                BoxKind::Octahedron
            } else {
                BoxKind::Triclinic
            }
        };
        Self::from_vectors(kind, vectors)
    }

    #[inline]
    pub fn kind(&self) -> BoxKind {
        self.kind
    }

    #[inline]
    pub fn vectors(&self) -> &[Vec3<T>; 3] {
        &self.vectors
    }

    /// True when the off-diagonal elements are all zero.
    pub fn is_rectangular(&self) -> bool {
        let zero = T::zero();
        self.vectors[1].x == zero && self.vectors[2].x == zero && self.vectors[2].y == zero
    }

    /// Determinant of the vector matrix (nm³).
    #[inline]
    pub fn volume(&self) -> T {
        self.vectors[0].x * self.vectors[1].y * self.vectors[2].z
    }

    /// Perpendicular distances between opposite faces of the unit cell.
    pub fn heights(&self) -> [T; 3] {
        let [a, b, c] = self.vectors;
        let v = self.volume();
        [v / b.cross(c).norm(), v / c.cross(a).norm(), v / a.cross(b).norm()]
    }

    pub fn min_height(&self) -> T {
        let h = self.heights();
        h[0].min(h[1]).min(h[2])
    }

    /// Geometric center of the unit cell, `(a + b + c) / 2`.
    pub fn center(&self) -> Vec3<T> {
        (self.vectors[0] + self.vectors[1] + self.vectors[2]) * T::lit(0.5)
    }

    /// Fractional coordinates `s` with `x = s0·a + s1·b + s2·c`.
    #[inline]
    pub fn to_fractional(&self, x: Vec3<T>) -> Vec3<T> {
        let [a, b, c] = self.vectors;
        let sc = x.z / c.z;
        let sb = (x.y - sc * c.y) / b.y;
        let sa = (x.x - sb * b.x - sc * c.x) / a.x;
        Vec3::new(sa, sb, sc)
    }

    #[inline]
    pub fn to_cartesian(&self, s: Vec3<T>) -> Vec3<T> {
        let [a, b, c] = self.vectors;
        a * s.x + b * s.y + c * s.z
    }

    /// Lattice translation `n0·a + n1·b + n2·c`.
    #[inline]
    pub fn lattice(&self, n: [T; 3]) -> Vec3<T> {
        self.to_cartesian(Vec3::new(n[0], n[1], n[2]))
    }

    /// Rounded fractional reduction along c, b, a in that order.
    ///
    /// Returns the unique image shorter than half the minimum box height when
    /// one exists; for longer displacements in skewed boxes the result may not
    /// be the shortest image. Use [`SimBox::minimum_image`] when that matters.
    #[inline]
    pub fn reduce(&self, mut dr: Vec3<T>) -> Vec3<T> {
        let [a, b, c] = self.vectors;
        let s = (dr.z / c.z).round();
        if s != T::zero() {
            dr -= c * s;
        }
        let s = (dr.y / b.y).round();
        if s != T::zero() {
            dr -= b * s;
        }
        let s = (dr.x / a.x).round();
        if s != T::zero() {
            dr -= a * s;
        }
        dr
    }

    /// Displacement to the nearest periodic image of `dr`.
    pub fn minimum_image(&self, dr: Vec3<T>) -> Vec3<T> {
        let reduced = self.reduce(dr);
        if self.is_rectangular() {
            return reduced;
        }
        let mut best = reduced;
        let mut best_n2 = reduced.norm2();
        for i in -1i32..=1 {
            for j in -1i32..=1 {
                for k in -1i32..=1 {
                    if i == 0 && j == 0 && k == 0 {
                        continue;
                    }
                    let cand = reduced + self.lattice([T::lit(i as f64), T::lit(j as f64), T::lit(k as f64)]);
                    let n2 = cand.norm2();
                    if n2 < best_n2 {
                        best = cand;
                        best_n2 = n2;
                    }
                }
            }
        }
        best
    }

    /// Shifts `x` by lattice vectors so that every fractional coordinate is in `[0, 1)`.
    pub fn wrap_position(&self, x: Vec3<T>) -> Vec3<T> {
        let s = self.to_fractional(x);
        let shift = [s.x.floor(), s.y.floor(), s.z.floor()];
        let mut out = x - self.lattice(shift);
        // one correction pass for values that rounded onto a face
        let s = self.to_fractional(out);
        let mut fix = [T::zero(); 3];
        for (axis, f) in fix.iter_mut().enumerate() {
            if s[axis] < T::zero() {
                *f = -T::one();
            } else if s[axis] >= T::one() {
                *f = T::one();
            }
        }
        if fix.iter().any(|&f| f != T::zero()) {
            out -= self.lattice(fix);
        }
        out
    }

    /// Maps `x` to the image closest to the box center. For an octahedral box
    /// this is the compact truncated-octahedron cell rather than the unit
    /// parallelepiped.
    pub fn wrap_compact(&self, x: Vec3<T>) -> Vec3<T> {
        let c = self.center();
        c + self.minimum_image(x - c)
    }

    /// Whether `x` lies inside the box's primary cell: the unit parallelepiped
    /// for cubic and triclinic boxes, the compact cell around the center for
    /// octahedra.
    pub fn contains(&self, x: Vec3<T>) -> bool {
        match self.kind {
            BoxKind::Octahedron => {
                let d = x - self.center();
                let m = self.minimum_image(d);
                (d - m).norm2() <= T::lit(1e-18) * self.vectors[0].x * self.vectors[0].x
            }
            _ => {
                let s = self.to_fractional(x);
                (0..3).all(|i| s[i] >= T::zero() && s[i] < T::one())
            }
        }
    }

    /// Same box at a different precision.
    pub fn cast<U: Real>(&self) -> SimBox<U> {
        SimBox {
            kind: self.kind,
            vectors: [self.vectors[0].cast(), self.vectors[1].cast(), self.vectors[2].cast()],
        }
    }
}
