//! Pair and bonded interaction kernels, generic over the scalar type.
//!
//! Pair kernels return `(energy, f_over_r)` where the force on atom `i` from
//! atom `j` is `f_over_r · (r_i − r_j)`.

use crate::real::Real;
use crate::system::Vec3;

/// Lennard-Jones 12-6 with Lorentz–Berthelot mixing, precomputed per pair type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LjPair<T> {
    pub c6: T,
    pub c12: T,
    /// `V(rcut)`, subtracted so the potential vanishes at the cutoff.
    pub shift: T,
}

impl<T: Real> LjPair<T> {
    pub fn mixed(sigma_i: T, eps_i: T, sigma_j: T, eps_j: T, rcut: T) -> Self {
        let eps = (eps_i * eps_j).sqrt();
        if eps == T::zero() {
            return LjPair { c6: T::zero(), c12: T::zero(), shift: T::zero() };
        }
        let sigma = (sigma_i + sigma_j) * T::lit(0.5);
        let s6 = sigma.powi(6);
        let four = T::lit(4.0);
        let c6 = four * eps * s6;
        let c12 = four * eps * s6 * s6;
        let rc6 = rcut.powi(6).recip();
        LjPair { c6, c12, shift: c12 * rc6 * rc6 - c6 * rc6 }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c6 == T::zero() && self.c12 == T::zero()
    }

    #[inline]
    pub fn eval(&self, r2: T) -> (T, T) {
        let ir2 = r2.recip();
        let ir6 = ir2 * ir2 * ir2;
        let rep = self.c12 * ir6 * ir6;
        let disp = self.c6 * ir6;
        let energy = rep - disp - self.shift;
        let f_over_r = (T::lit(12.0) * rep - T::lit(6.0) * disp) * ir2;
        (energy, f_over_r)
    }
}

/// Shifted Coulomb `qq·(1/r − 1/rcut)`, with `qq` already including the
/// conversion factor.
#[inline]
pub fn coulomb<T: Real>(r2: T, qq: T, inv_rcut: T) -> (T, T) {
    let ir = r2.sqrt().recip();
    let e = qq * (ir - inv_rcut);
    (e, qq * ir * ir * ir)
}

/// Harmonic bond on displacement `d = r_i − r_j`. Returns energy and the force on `i`.
#[inline]
pub fn harmonic_bond<T: Real>(d: Vec3<T>, kb: T, r0: T) -> (T, Vec3<T>) {
    let r = d.norm();
    let dr = r - r0;
    let energy = T::lit(0.5) * kb * dr * dr;
    let f = d * (-kb * dr / r);
    (energy, f)
}

/// Harmonic angle with arms `a = r_i − r_j`, `b = r_k − r_j`.
/// Returns energy, the angle, and the forces on `i` and `k` (the force on `j`
/// balances them).
#[inline]
pub fn harmonic_angle<T: Real>(a: Vec3<T>, b: Vec3<T>, ka: T, theta0: T) -> (T, T, Vec3<T>, Vec3<T>) {
    let la2 = a.norm2();
    let lb2 = b.norm2();
    let inv_ab = (la2 * lb2).sqrt().recip();
    let cos = (a.dot(b) * inv_ab).max(-T::one()).min(T::one());
    let theta = cos.acos();
    let dtheta = theta - theta0;
    let energy = T::lit(0.5) * ka * dtheta * dtheta;
    let sin = (T::one() - cos * cos).sqrt().max(T::lit(1e-8));
    // dV/dcos = ka·dθ · dθ/dcos = −ka·dθ / sinθ
    let dv_dcos = -ka * dtheta / sin;
    let dcos_da = b * inv_ab - a * (cos / la2);
    let dcos_db = a * inv_ab - b * (cos / lb2);
    let fi = dcos_da * (-dv_dcos);
    let fk = dcos_db * (-dv_dcos);
    (energy, theta, fi, fk)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lj_zero_crossing_and_minimum() {
        let sigma: f64 = 0.34;
        let eps = 0.99;
        // huge cutoff: shift ~ 0
        let p = LjPair::mixed(sigma, eps, sigma, eps, 1e3);
        let (e, f) = p.eval(sigma * sigma);
        assert!(e.abs() < 1e-12);
        assert!(f > 0.0, "repulsive at sigma");
        let rmin: f64 = 2f64.powf(1.0 / 6.0) * sigma;
        let (e, f) = p.eval(rmin * rmin);
        assert!((e + eps).abs() < 1e-12);
        assert!(f.abs() < 1e-9);
    }

    #[test]
    fn lj_shift_vanishes_at_cutoff() {
        let p = LjPair::<f64>::mixed(0.3, 0.5, 0.35, 0.8, 0.9);
        assert!(p.eval(0.81).0.abs() < 1e-15);
        let (e, _) = coulomb::<f64>(0.81, 100.0, 1.0 / 0.9);
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn mixing_rules() {
        let p = LjPair::mixed(0.3, 0.4, 0.5, 0.9, 2.0);
        let sigma: f64 = 0.4;
        let eps = (0.4f64 * 0.9).sqrt();
        assert!((p.c6 - 4.0 * eps * sigma.powi(6)).abs() < 1e-15);
        assert!(LjPair::mixed(0.3, 0.0, 0.5, 0.9, 2.0).is_zero());
    }

    #[test]
    fn angle_gradient_matches_finite_difference() {
        let a = Vec3::<f64>::new(0.1, 0.02, -0.03);
        let b = Vec3::new(-0.02, 0.09, 0.04);
        let (ka, t0) = (400.0, 1.8);
        let (_, _, fi, fk) = harmonic_angle(a, b, ka, t0);
        let h = 1e-7;
        for axis in 0..3 {
            let mut ap = a;
            let mut am = a;
            ap[axis] += h;
            am[axis] -= h;
            let fd = -(harmonic_angle(ap, b, ka, t0).0 - harmonic_angle(am, b, ka, t0).0) / (2.0 * h);
            assert!((fd - fi[axis]).abs() < 1e-5 * fi.norm().max(1.0));
            let mut bp = b;
            let mut bm = b;
            bp[axis] += h;
            bm[axis] -= h;
            let fd = -(harmonic_angle(a, bp, ka, t0).0 - harmonic_angle(a, bm, ka, t0).0) / (2.0 * h);
            assert!((fd - fk[axis]).abs() < 1e-5 * fk.norm().max(1.0));
        }
    }

    #[test]
    fn kernels_in_single_precision() {
        let p: LjPair<f32> = LjPair::mixed(0.34, 1.0, 0.34, 1.0, 100.0);
        let rmin = 2f32.powf(1.0 / 6.0) * 0.34;
        assert!((p.eval(rmin * rmin).0 + 1.0).abs() < 1e-5);
        let (e, f) = harmonic_bond(Vec3::<f32>::new(0.12, 0.0, 0.0), 1000.0, 0.1);
        assert!((e - 0.2).abs() < 1e-5);
        assert!(f.x < 0.0);
    }
}
