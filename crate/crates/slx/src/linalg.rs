//! Closed-form 2x2 complex linear algebra.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Vec2 = Vector2<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn mat(a: C64, b: C64, cc: C64, d: C64) -> Mat2 {
    Mat2::new(a, b, cc, d)
}

pub fn real_mat(a: f64, b: f64, cc: f64, d: f64) -> Mat2 {
    Mat2::new(r(a), r(b), r(cc), r(d))
}

pub fn det(m: &Mat2) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

pub fn adjugate(m: &Mat2) -> Mat2 {
    Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

pub fn fro(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inverse by the adjugate formula with the estimate |det|^-1 * ||m||^2.
pub fn inverse(m: &Mat2) -> Option<(Mat2, f64)> {
    let d = det(m);
    let n = fro(m);
    if d.norm() == 0.0 || !d.is_finite() || d.norm() <= 1e-300 * n * n {
        return None;
    }
    Some((adjugate(m) / d, n * n / d.norm()))
}

/// Largest and smallest singular values; the smallest is taken as |det|/s_max.
pub fn singular_values(m: &Mat2) -> (f64, f64) {
    let f2 = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let d = det(m).norm();
    let disc = (f2 * f2 - 4.0 * d * d).max(0.0).sqrt();
    let smax = ((f2 + disc) / 2.0).sqrt();
    let smin = if smax > 0.0 { d / smax } else { 0.0 };
    (smax, smin)
}

/// Numerical kernel dimension: singular values below rel*(s_max + 1) count as zero.
pub fn nullity(m: &Mat2, rel: f64) -> usize {
    let (smax, smin) = singular_values(m);
    let cut = rel * (smax + 1.0);
    if smax < cut {
        2
    } else if smin < cut {
        1
    } else {
        0
    }
}

pub fn hermitian_part(m: &Mat2) -> Mat2 {
    (m + m.adjoint()) * r(0.5)
}

pub fn hermitian_defect(m: &Mat2) -> f64 {
    fro(&(m - m.adjoint()))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn eigh(m: &Mat2) -> ([f64; 2], [Vec2; 2]) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = (half * half + b.norm_sqr()).sqrt();
    let (l0, l1) = (mean - rad, mean + rad);
    if b.norm() <= 1e-300 {
        let e0 = Vec2::new(r(1.0), r(0.0));
        let e1 = Vec2::new(r(0.0), r(1.0));
        return if a <= d { ([a, d], [e0, e1]) } else { ([d, a], [e1, e0]) };
    }
    // (m - l) x = 0 with x = (b, l - a) or (l - d, conj b), whichever is larger.
    let vec_for = |l: f64| {
        let x1 = Vec2::new(b, r(l - a));
        let x2 = Vec2::new(r(l - d), b.conj());
        let x = if x1.norm() >= x2.norm() { x1 } else { x2 };
        x / r(x.norm())
    };
    ([l0, l1], [vec_for(l0), vec_for(l1)])
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn inv_sqrt_hpd(m: &Mat2) -> Mat2 {
    let (vals, vecs) = eigh(m);
    let mut out = Mat2::zeros();
    for k in 0..2 {
        let s = 1.0 / vals[k].sqrt();
        out += vecs[k] * vecs[k].adjoint() * r(s);
    }
    out
}

/// A unit vector spanning the (approximate) kernel of a rank-deficient matrix.
pub fn kernel_vector(m: &Mat2) -> Vec2 {
    let r0 = Vec2::new(-m[(0, 1)], m[(0, 0)]);
    let r1 = Vec2::new(-m[(1, 1)], m[(1, 0)]);
    let x = if r0.norm() >= r1.norm() { r0 } else { r1 };
    if x.norm() == 0.0 {
        Vec2::new(r(1.0), r(0.0))
    } else {
        x / r(x.norm())
    }
}

/// Unit vector orthogonal to `e`.
pub fn orthogonal(e: &Vec2) -> Vec2 {
    let x = Vec2::new(-e[1].conj(), e[0].conj());
    x / r(x.norm())
}

pub fn cols(e0: &Vec2, e1: &Vec2) -> Mat2 {
    Mat2::new(e0[0], e1[0], e0[1], e1[1])
}

/// Angle between the complex lines spanned by two nonzero vectors.
pub fn line_angle(x: &Vec2, y: &Vec2) -> f64 {
    let cosv = x.dotc(y).norm();
    let sinv = (x[0] * y[1] - x[1] * y[0]).norm();
    sinv.atan2(cosv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_matches_identity() {
        let m = mat(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(3.0, -1.0));
        let (inv, _) = inverse(&m).unwrap();
        assert!(fro(&(m * inv - Mat2::identity())) < 1e-14);
    }

    #[test]
    fn eigh_reconstructs() {
        let m = mat(r(2.0), c(1.0, 1.0), c(1.0, -1.0), r(-1.0));
        let (vals, vecs) = eigh(&m);
        for k in 0..2 {
            let res = m * vecs[k] - vecs[k] * r(vals[k]);
            assert!(res.norm() < 1e-13);
        }
        assert!(vals[0] < vals[1]);
    }

    #[test]
    fn nullity_counts() {
        assert_eq!(nullity(&Mat2::zeros(), 1e-7), 2);
        assert_eq!(nullity(&real_mat(1.0, 2.0, 2.0, 4.0), 1e-7), 1);
        assert_eq!(nullity(&Mat2::identity(), 1e-7), 0);
    }

    #[test]
    fn inv_sqrt_squares_to_inverse() {
        let m = mat(r(3.0), c(1.0, 0.5), c(1.0, -0.5), r(2.0));
        let s = inv_sqrt_hpd(&m);
        assert!(fro(&(s * m * s - Mat2::identity())) < 1e-13);
    }
}
