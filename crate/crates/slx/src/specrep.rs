//! Matrix-valued point masses of the spectral measures and eigenvectors in the spectral representation.

use serde::Serialize;

use crate::context::Context;
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, Vec2, adjugate, c, det, eigh, fro, hermitian_part, inverse, nullity, r};
use crate::odecore::BoundaryData;
use crate::weyl::{n_matrix, ninf_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassMethod {
    DerivativeResidue,
    EpsilonExtrapolation,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PointMass {
    pub lambda: f64,
    #[serde(serialize_with = "crate::report::ser_mat")]
    pub weight: Mat2,
    pub rank: usize,
    pub trace: f64,
    pub method: MassMethod,
    pub error_estimate: f64,
    /// Distance to the weight from the other method, when both ran.
    pub cross_check: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvectorRep {
    pub lambda: f64,
    /// One vector for a simple eigenvalue, the standard basis for a double one.
    #[serde(serialize_with = "ser_vecs")]
    pub coefficients: Vec<Vec2>,
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec2], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&[[x[0].re, x[0].im], [x[1].re, x[1].im]])?;
    }
    seq.end()
}

/// Relative accuracy assumed for boundary data when estimating rounding noise.
const DATA_NOISE: f64 = 1e-12;
const EPSILONS: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Eigenvalues of a weight below this fraction of its trace count as zero.
pub const RANK_REL: f64 = 1e-6;

fn rank_of(w: &Mat2) -> usize {
    let (ev, _) = eigh(w);
    let tr = (ev[0] + ev[1]).abs();
    ev.iter().filter(|&&x| x > RANK_REL * tr).count()
}

fn finish(lambda: f64, weight: Mat2, method: MassMethod, error_estimate: f64, cross_check: Option<f64>) -> PointMass {
    let weight = hermitian_part(&weight);
    PointMass { lambda, weight, rank: rank_of(&weight), trace: (weight[(0, 0)] + weight[(1, 1)]).re, method, error_estimate, cross_check }
}

/// `Herm(-i eps M(lambda + i eps))`, Richardson-extrapolated in `eps^2`.
///
/// Returns the weight and the spread between the two extrapolants.
fn epsilon_weight<F>(lambda: f64, m: F) -> Result<(Mat2, f64)>
where
    F: Fn(C64) -> Result<Mat2>,
{
    let w = |eps: f64| -> Result<Mat2> { Ok(hermitian_part(&(m(c(lambda, eps))? * c(0.0, -eps)))) };
    let ws = [w(EPSILONS[0])?, w(EPSILONS[1])?, w(EPSILONS[2])?];
    let rich = |a: &Mat2, b: &Mat2| (b * r(100.0) - a) / r(99.0);
    let e1 = rich(&ws[0], &ws[1]);
    let e2 = rich(&ws[1], &ws[2]);
    Ok((e2, fro(&(e2 - e1))))
}

/// Central difference with one Richardson step; returns `(value, error estimate)`.
fn derivative<F>(lambda: f64, f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = 1e-5f64.max(1e-5 * lambda.abs());
    let d = |h: f64| -> Result<f64> { Ok((f(lambda + h)? - f(lambda - h)?) / (2.0 * h)) };
    let (d1, d2) = (d(h)?, d(h / 2.0)?);
    let rich = (4.0 * d2 - d1) / 3.0;
    Ok((rich, (rich - d2).abs()))
}

/// Point mass of the spectral measure of `M0` (the extension `L0`).
pub fn point_mass_l0(ctx: &Context, lambda: f64) -> Result<PointMass> {
    let bd = ctx.boundary_real(lambda)?;
    let (du, derr) = derivative(lambda, |l| Ok(ctx.boundary_real(l)?.u20.re))?;
    check_root(lambda, bd.u20.re, du)?;
    let n = n_matrix(&bd).map(|z| r(z.re));
    let deriv = -n / r(du);
    let deriv_err = fro(&deriv) * (derr + DATA_NOISE * bd.scale() / 1e-5) / du.abs();

    let (eps, spread) = epsilon_weight(lambda, |z| {
        let b = ctx.boundary(z)?;
        Ok(n_matrix(&b) / b.u20)
    })?;
    let eps_err = spread + fro(&eps) * noise_floor(&bd, du);
    compare(lambda, deriv, deriv_err, eps, eps_err)
}

/// Point mass of `(vartheta - Minf)^-1` at an eigenvalue of the extension `vartheta` (second triple).
pub fn point_mass_theta(ctx: &Context, vartheta: &Mat2, lambda: f64) -> Result<PointMass> {
    let bd = ctx.boundary_real(lambda)?;
    if ctx.vanishes(bd.u11, &bd) {
        return Err(SlxError::OutsideResolventUnion { lambda });
    }
    let y = |b: &BoundaryData| vartheta * b.u11 - ninf_matrix(b);
    let yl = y(&bd);
    let mt = |z: C64| -> Result<Mat2> {
        let b = ctx.boundary(z)?;
        let (inv, _) = inverse(&y(&b)).ok_or(SlxError::AtPole { lambda: z.re, nullity: 1 })?;
        Ok(inv * b.u11)
    };
    let null = nullity(&(yl / r(bd.scale())), ctx.tol.nullity_rel);
    if null == 0 {
        return Err(SlxError::NotAnEigenvalue { lambda });
    }
    let (eps, spread) = epsilon_weight(lambda, mt)?;
    if null == 2 {
        let err = spread + fro(&eps) * DATA_NOISE * bd.scale() / EPSILONS[2];
        return Ok(finish(lambda, eps, MassMethod::EpsilonExtrapolation, err, None));
    }
    let (dd, derr) = derivative(lambda, |l| Ok(det(&y(&ctx.boundary_real(l)?)).re))?;
    check_root(lambda, det(&yl).re, dd)?;
    let deriv = -adjugate(&yl) * bd.u11 / r(dd);
    let deriv_err = fro(&deriv) * (derr + DATA_NOISE * bd.scale().powi(2) / 1e-5) / dd.abs();
    let eps_err = spread + fro(&eps) * noise_floor(&bd, dd / bd.u11.re);
    compare(lambda, deriv, deriv_err, eps, eps_err)
}

fn noise_floor(bd: &BoundaryData, slope: f64) -> f64 {
    10.0 * DATA_NOISE * bd.scale() / (EPSILONS[2] * slope.abs())
}

fn check_root(lambda: f64, value: f64, slope: f64) -> Result<()> {
    // Newton step to the nearest zero.
    if !(value / slope).is_finite() || (value / slope).abs() > 1e-7 * lambda.abs().max(1.0) {
        return Err(SlxError::NotAnEigenvalue { lambda });
    }
    Ok(())
}

fn compare(lambda: f64, deriv: Mat2, deriv_err: f64, eps: Mat2, eps_err: f64) -> Result<PointMass> {
    let gap = fro(&(deriv - eps));
    let allowed = deriv_err + eps_err;
    if gap > allowed {
        return Err(SlxError::ResidueMismatch { gap, allowed });
    }
    Ok(finish(lambda, deriv, MassMethod::DerivativeResidue, deriv_err, Some(gap)))
}

/// Coefficients of the eigenvector in the spectral representation of the extension `vartheta`.
///
/// The kernel of `u11 vartheta - [[u21, 1], [1, u10]]`; for `vartheta = 0` this is `(1, -u21)`.
pub fn eigenvector_rep(ctx: &Context, vartheta: &Mat2, lambda: f64) -> Result<EigenvectorRep> {
    let bd = ctx.boundary_real(lambda)?;
    let y = vartheta * bd.u11 - ninf_matrix(&bd);
    let scaled = y / r(bd.scale());
    let one = r(1.0);
    let lambda_rep = |coefficients| Ok(EigenvectorRep { lambda, coefficients });
    match nullity(&scaled, ctx.tol.nullity_rel) {
        0 => Err(SlxError::NotAnEigenvalue { lambda }),
        2 => lambda_rep(vec![Vec2::new(one, r(0.0)), Vec2::new(r(0.0), one)]),
        _ => {
            let first = Vec2::new(one - bd.u11 * vartheta[(0, 1)], bd.u11 * vartheta[(0, 0)] - bd.u21);
            let second = Vec2::new(bd.u11 * vartheta[(1, 1)] - bd.u10, one - bd.u11 * vartheta[(1, 0)]);
            let v = if first.norm() >= second.norm() { first } else { second };
            lambda_rep(vec![v])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{line_angle, real_mat};
    use crate::problem::catalog;
    use std::f64::consts::PI;

    fn free() -> Context {
        Context::new(catalog::free())
    }

    #[test]
    fn free_l0_weights() {
        let ctx = free();
        for n in 1..=4 {
            let lam = (n * n) as f64;
            let pm = point_mass_l0(&ctx, lam).unwrap();
            let s = if n % 2 == 0 { -1.0 } else { 1.0 };
            let expect = real_mat(1.0, s, s, 1.0) * r(2.0 / PI);
            assert!(fro(&(pm.weight - expect)) < 1e-6, "n = {n}: {:?}", pm.weight);
            assert_eq!(pm.rank, 1);
        }
        let pm = point_mass_l0(&ctx, 0.0).unwrap();
        assert!((pm.trace - 2.0 / PI).abs() < 1e-6);
        assert_eq!(pm.rank, 1);
        assert!(matches!(point_mass_l0(&ctx, 2.0), Err(SlxError::NotAnEigenvalue { .. })));
    }

    #[test]
    fn eigenvector_matches_weight_direction() {
        let ctx = free();
        for n in 1..=3 {
            let lam = (n * n) as f64;
            let v = eigenvector_rep(&ctx, &Mat2::zeros(), lam).unwrap().coefficients[0];
            let s = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!(line_angle(&v, &Vec2::new(r(1.0), r(s))) < 1e-8);
            let (_, vecs) = eigh(&point_mass_l0(&ctx, lam).unwrap().weight);
            assert!(line_angle(&v, &vecs[1]) < 1e-6);
        }
    }

    #[test]
    fn theta_zero_agrees_with_l0() {
        let ctx = free();
        // 0.0 lies in the resolvent set of Linf for the free problem.
        let a = point_mass_theta(&ctx, &Mat2::zeros(), 0.0).unwrap();
        let b = point_mass_l0(&ctx, 0.0).unwrap();
        assert!(fro(&(a.weight - b.weight)) < 1e-6);
    }

    #[test]
    fn degenerate_weight_has_rank_two() {
        let ctx = free();
        let vt = real_mat(0.0, -0.5, -0.5, 0.0);
        let pm = point_mass_theta(&ctx, &vt, 0.25).unwrap();
        assert_eq!(pm.method, MassMethod::EpsilonExtrapolation);
        assert_eq!(pm.rank, 2);
        assert_eq!(eigenvector_rep(&ctx, &vt, 0.25).unwrap().coefficients.len(), 2);
    }
}
