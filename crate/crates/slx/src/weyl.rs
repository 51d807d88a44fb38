//! Weyl functions of the two distinguished extensions and of general parameters.

use serde::Serialize;

use crate::context::Context;
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, fro, inverse, mat, nullity, r, singular_values};
use crate::odecore::{BoundaryData, ser_c};
use crate::spectra::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylKind {
    M0,
    Minf,
    Mtheta,
    Mrelation,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WeylValue {
    #[serde(serialize_with = "ser_c")]
    pub lambda: C64,
    #[serde(serialize_with = "crate::report::ser_mat")]
    pub matrix: Mat2,
    pub kind: WeylKind,
    pub condition_estimate: f64,
}

/// `N = [[-u10, 1], [1, -u21]]`, so that `M0 = N / u20`.
pub fn n_matrix(bd: &BoundaryData) -> Mat2 {
    mat(-bd.u10, r(1.0), r(1.0), -bd.u21)
}

/// `[[u21, 1], [1, u10]]`, so that `Minf = . / u11`.
pub fn ninf_matrix(bd: &BoundaryData) -> Mat2 {
    mat(bd.u21, r(1.0), r(1.0), bd.u10)
}

pub fn m0_from(ctx: &Context, bd: &BoundaryData) -> Result<WeylValue> {
    if ctx.vanishes(bd.u20, bd) {
        return Err(SlxError::AtPole { lambda: bd.lambda.re, nullity: 1 });
    }
    Ok(WeylValue { lambda: bd.lambda, matrix: n_matrix(bd) / bd.u20, kind: WeylKind::M0, condition_estimate: 1.0 / bd.u20.norm() })
}

pub fn m_inf_from(ctx: &Context, bd: &BoundaryData) -> Result<WeylValue> {
    if ctx.vanishes(bd.u11, bd) {
        return Err(SlxError::AtPole { lambda: bd.lambda.re, nullity: 1 });
    }
    Ok(WeylValue { lambda: bd.lambda, matrix: ninf_matrix(bd) / bd.u11, kind: WeylKind::Minf, condition_estimate: 1.0 / bd.u11.norm() })
}

/// `M0(lambda)`.
pub fn m0(ctx: &Context, lambda: C64) -> Result<WeylValue> {
    m0_from(ctx, &ctx.boundary(lambda)?)
}

/// `Minf(lambda)`.
pub fn m_inf(ctx: &Context, lambda: C64) -> Result<WeylValue> {
    m_inf_from(ctx, &ctx.boundary(lambda)?)
}

fn invert(ctx: &Context, m: &Mat2, lambda: C64) -> Result<(Mat2, f64)> {
    let (smax, smin) = singular_values(m);
    if smin <= ctx.tol.pole_guard * (smax + 1.0) {
        return Err(SlxError::AtPole { lambda: lambda.re, nullity: nullity(m, ctx.tol.nullity_rel).max(1) });
    }
    inverse(m).ok_or(SlxError::AtPole { lambda: lambda.re, nullity: 2 })
}

/// `(theta - M0(lambda))^-1` for Hermitian `theta`.
pub fn m_theta(ctx: &Context, theta: &Mat2, lambda: C64) -> Result<WeylValue> {
    let m = m0(ctx, lambda)?;
    let (inv, cond) = invert(ctx, &(theta - m.matrix), lambda)?;
    Ok(WeylValue { lambda, matrix: inv, kind: WeylKind::Mtheta, condition_estimate: cond })
}

/// `(A* + B* M0)(B* - A* M0)^-1`: the Weyl function of the triple transformed by `(A, B)`.
///
/// Its poles are the eigenvalues of the extension. For the graph of a matrix
/// `theta` (`A = C`, `B = theta C`, `C = (1 + theta^2)^(-1/2)`) it equals
/// `C^-1 (theta - M0)^-1 C^-1 - theta`.
pub fn m_relation(ctx: &Context, rel: &Relation, lambda: C64) -> Result<WeylValue> {
    rel.check_admissible(1e-10)?;
    let m = m0(ctx, lambda)?;
    let (a, b) = (rel.a.adjoint(), rel.b.adjoint());
    let (inv, cond) = invert(ctx, &(b - a * m.matrix), lambda)?;
    Ok(WeylValue { lambda, matrix: (a + b * m.matrix) * inv, kind: WeylKind::Mrelation, condition_estimate: cond })
}

/// Relative deviation `|Minf M0 + I| / (|Minf| |M0|)`.
pub fn inverse_identity_defect(m0: &Mat2, minf: &Mat2) -> f64 {
    fro(&(minf * m0 + Mat2::identity())) / (fro(minf) * fro(m0)).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eigh, hermitian_part, real_mat};
    use crate::problem::catalog;

    fn free() -> Context {
        Context::new(catalog::free())
    }

    #[test]
    fn free_values_at_quarter() {
        let ctx = free();
        let m = m0(&ctx, r(0.25)).unwrap().matrix;
        assert!(fro(&(m - real_mat(0.0, 2.0, 2.0, 0.0))) < 1e-10);
        let mi = m_inf(&ctx, r(0.25)).unwrap().matrix;
        assert!(fro(&(mi - real_mat(0.0, -0.5, -0.5, 0.0))) < 1e-10);
    }

    #[test]
    fn poles() {
        let ctx = free();
        assert!(matches!(m0(&ctx, r(1.0)), Err(SlxError::AtPole { .. })));
        assert!(matches!(m_inf(&ctx, r(4.0)), Err(SlxError::AtPole { .. })));
    }

    #[test]
    fn theta_zero_is_minf() {
        let ctx = free();
        let mt = m_theta(&ctx, &Mat2::zeros(), r(0.25)).unwrap().matrix;
        let mi = m_inf(&ctx, r(0.25)).unwrap().matrix;
        assert!(fro(&(mt - mi)) < 1e-10);
    }

    #[test]
    fn theta_singular_cases() {
        let ctx = free();
        match m_theta(&ctx, &real_mat(2.0, 0.0, 0.0, 2.0), r(0.25)) {
            Err(SlxError::AtPole { nullity, .. }) => assert_eq!(nullity, 1),
            other => panic!("{other:?}"),
        }
        match m_theta(&ctx, &real_mat(0.0, 2.0, 2.0, 0.0), r(0.25)) {
            Err(SlxError::AtPole { nullity, .. }) => assert_eq!(nullity, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn herglotz_in_upper_half_plane() {
        let ctx = free();
        for re in [-3.0, 0.3, 2.2, 7.9] {
            for im in [1e-2, 1e-1, 1.0] {
                let m = m0(&ctx, c(re, im)).unwrap().matrix;
                let im_part = (m - m.adjoint()) / c(0.0, 2.0);
                let (ev, _) = eigh(&hermitian_part(&im_part));
                assert!(ev[0] >= -1e-10, "lambda = {re}+{im}i: {ev:?}");
            }
        }
    }

    #[test]
    fn relation_special_cases() {
        let ctx = free();
        let lam = c(2.3, 0.4);
        let m = m0(&ctx, lam).unwrap().matrix;
        let l0 = Relation::new(Mat2::zeros(), Mat2::identity()).unwrap();
        assert!(fro(&(m_relation(&ctx, &l0, lam).unwrap().matrix - m)) < 1e-10);
        let theta = mat(r(0.7), c(0.2, -0.5), c(0.2, 0.5), r(-1.1));
        let g = Relation::graph(&theta);
        let ci = crate::linalg::inv_sqrt_hpd(&(Mat2::identity() + theta * theta)).try_inverse().unwrap();
        let expect = ci * m_theta(&ctx, &theta, lam).unwrap().matrix * ci - theta;
        assert!(fro(&(m_relation(&ctx, &g, lam).unwrap().matrix - expect)) < 1e-9);
    }

    #[test]
    fn inadmissible_pair_rejected() {
        let ctx = free();
        let bad = Relation { a: Mat2::identity(), b: Mat2::identity() * r(2.0), mul_dim: 0, theta_op: None, op_direction: None };
        assert!(matches!(m_relation(&ctx, &bad, c(1.0, 1.0)), Err(SlxError::InadmissiblePair { .. })));
    }
}
