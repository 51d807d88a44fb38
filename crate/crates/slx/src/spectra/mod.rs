//! Eigenvalues and multiplicities of self-adjoint extensions.

mod param;
pub(crate) mod scan;

pub use param::{BoundaryParameter, CoupledBC, Distinguished, Relation};

use serde::Serialize;

use crate::context::Context;
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, cols, fro, hermitian_part, inverse, mat, nullity, orthogonal, r};
use crate::odecore::BoundaryData;
use crate::weyl::{n_matrix, ninf_matrix};
use scan::{Root, scan};

/// Which description of the extension certified a multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Via {
    #[serde(rename = "gamma0-triple")]
    Gamma0,
    #[serde(rename = "gamma0'-triple")]
    Gamma0Prime,
    /// Neither Weyl function exists; nullity of the boundary matrix on the fundamental system.
    #[serde(rename = "direct")]
    Direct,
}

impl Via {
    pub fn label(self) -> &'static str {
        match self {
            Via::Gamma0 => "gamma0-triple",
            Via::Gamma0Prime => "gamma0'-triple",
            Via::Direct => "direct",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenvalueRecord {
    pub lambda: f64,
    pub multiplicity: usize,
    pub degenerate: bool,
    /// Characteristic function at `lambda`, relative to its term scale.
    pub residual: f64,
    pub via: Via,
    /// `|u10 u21 - 1|` at points of the two distinguished spectra.
    pub certificate: Option<f64>,
}

fn certificate(bd: &BoundaryData) -> f64 {
    (bd.u10 * bd.u21 - r(1.0)).norm()
}

fn distinguished_records(ctx: &Context, roots: &[Root], which: Distinguished) -> Result<Vec<EigenvalueRecord>> {
    roots
        .iter()
        .map(|root| {
            let bd = ctx.boundary_real(root.lambda)?;
            let (value, other) = match which {
                Distinguished::L0 => (bd.u20, bd.u11),
                Distinguished::Linf => (bd.u11, bd.u20),
            };
            let via = if ctx.vanishes(other, &bd) {
                Via::Direct
            } else if which == Distinguished::L0 {
                Via::Gamma0Prime
            } else {
                Via::Gamma0
            };
            Ok(EigenvalueRecord {
                lambda: root.lambda,
                multiplicity: 1,
                degenerate: false,
                residual: value.norm() / bd.scale(),
                via,
                certificate: Some(certificate(&bd)),
            })
        })
        .collect()
}

/// Zeros of `u20(b, lambda)`.
pub fn eigenvalues_l0(ctx: &Context, lo: f64, hi: f64) -> Result<Vec<EigenvalueRecord>> {
    let roots = scan(ctx, lo, hi, |bd| (bd.u20.re, bd.scale()))?;
    distinguished_records(ctx, &roots, Distinguished::L0)
}

/// Zeros of `u11(b, lambda)`.
pub fn eigenvalues_linf(ctx: &Context, lo: f64, hi: f64) -> Result<Vec<EigenvalueRecord>> {
    let roots = scan(ctx, lo, hi, |bd| (bd.u11.re, bd.scale()))?;
    distinguished_records(ctx, &roots, Distinguished::Linf)
}

/// All eigenvalues of the extension in `[lo, hi]`.
///
/// Points where both Weyl functions have a pole are listed with `via = Direct`,
/// the nullity of the boundary matrix on the fundamental system and the certificate.
pub fn eigenvalues(ctx: &Context, param: &BoundaryParameter, lo: f64, hi: f64) -> Result<Vec<EigenvalueRecord>> {
    match param.distinguished() {
        Some(Distinguished::L0) => return eigenvalues_l0(ctx, lo, hi),
        Some(Distinguished::Linf) => return eigenvalues_linf(ctx, lo, hi),
        None => {}
    }
    let roots = scan(ctx, lo, hi, |bd| param.characteristic(bd))?;
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let bd = ctx.boundary_real(root.lambda)?;
        let (value, scale) = param.characteristic(&bd);
        let residual = value.abs() / scale.max(f64::MIN_POSITIVE);
        let record = match multiplicity_at(ctx, param, &bd) {
            Ok((m, via)) => {
                let multiplicity = if m == 0 { root.order } else { m };
                EigenvalueRecord { lambda: root.lambda, multiplicity, degenerate: multiplicity == 2, residual, via, certificate: None }
            }
            Err(SlxError::UncoveredPoint { certificate, direct_nullity, .. }) => EigenvalueRecord {
                lambda: root.lambda,
                multiplicity: direct_nullity.max(1),
                degenerate: false,
                residual,
                via: Via::Direct,
                certificate: Some(certificate),
            },
            Err(e) => return Err(e),
        };
        out.push(record);
    }
    Ok(out)
}

/// `dim ker(L - lambda)` for real `lambda`.
pub fn multiplicity(ctx: &Context, param: &BoundaryParameter, lambda: f64) -> Result<usize> {
    Ok(multiplicity_detail(ctx, param, lambda)?.0)
}

/// Multiplicity together with the description used.
pub fn multiplicity_detail(ctx: &Context, param: &BoundaryParameter, lambda: f64) -> Result<(usize, Via)> {
    multiplicity_at(ctx, param, &ctx.boundary_real(lambda)?)
}

fn multiplicity_at(ctx: &Context, param: &BoundaryParameter, bd: &BoundaryData) -> Result<(usize, Via)> {
    let zero0 = ctx.vanishes(bd.u20, bd);
    let zero1 = ctx.vanishes(bd.u11, bd);
    match param.distinguished() {
        Some(Distinguished::L0) => return Ok((zero0 as usize, if zero1 { Via::Direct } else { Via::Gamma0Prime })),
        Some(Distinguished::Linf) => return Ok((zero1 as usize, if zero0 { Via::Direct } else { Via::Gamma0 })),
        None => {}
    }
    let tol = ctx.tol.nullity_rel;
    if !zero0 && bd.u20.norm() >= bd.u11.norm() {
        let m0 = n_matrix(bd) / bd.u20;
        Ok((nullity(&param.kernel_gamma0(&m0), tol), Via::Gamma0))
    } else if !zero1 {
        let minf = ninf_matrix(bd) / bd.u11;
        Ok((nullity(&param.kernel_gamma0_prime(&minf), tol), Via::Gamma0Prime))
    } else if !zero0 {
        let m0 = n_matrix(bd) / bd.u20;
        Ok((nullity(&param.kernel_gamma0(&m0), tol), Via::Gamma0))
    } else {
        Err(SlxError::UncoveredPoint {
            lambda: bd.lambda.re,
            certificate: certificate(bd),
            direct_nullity: nullity(&param.direct_matrix(bd), tol),
        })
    }
}

/// The parameter for which `lambda` is a double eigenvalue.
#[derive(Clone, Debug)]
pub struct DegenerateParameter {
    pub lambda: f64,
    /// `M0(lambda)`, absent when `lambda` is an eigenvalue of `L0`.
    pub theta: Option<Mat2>,
    /// `Minf(lambda)`, absent when `lambda` is an eigenvalue of `Linf`.
    pub vartheta: Option<Mat2>,
}

pub fn degenerate_parameter(ctx: &Context, lambda: f64) -> Result<DegenerateParameter> {
    let k = ctx.problem.lower_bound;
    if lambda < k - ctx.tol.root_tol(k) {
        return Err(SlxError::HypothesisViolated(vec![format!("lambda = {lambda} lies below the lower bound {k}")]));
    }
    let bd = ctx.boundary_real(lambda)?;
    let real = |m: Mat2| hermitian_part(&m.map(|z| r(z.re)));
    let theta = (!ctx.vanishes(bd.u20, &bd)).then(|| real(n_matrix(&bd) / bd.u20));
    let vartheta = (!ctx.vanishes(bd.u11, &bd)).then(|| real(ninf_matrix(&bd) / bd.u11));
    if theta.is_none() && vartheta.is_none() {
        return Err(SlxError::UncoveredPoint { lambda, certificate: certificate(&bd), direct_nullity: 0 });
    }
    Ok(DegenerateParameter { lambda, theta, vartheta })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionCase {
    /// Off-diagonal part of `M` vanishes in the adapted basis.
    K1K4,
    /// Off-diagonal part nonzero.
    K1K3,
    /// The relation already was a matrix.
    Matrix,
    /// `{0} x C^2`, i.e. `L0`.
    L0,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub parameter: BoundaryParameter,
    pub case: ReductionCase,
    /// `Gamma0Prime` when the matrix is a `vartheta` of the second triple.
    pub via: Via,
}

/// A matrix parameter sharing the eigenvalue `lambda` with a relation.
pub fn relation_to_matrix(ctx: &Context, rel: &Relation, lambda: f64) -> Result<Reduction> {
    match rel.mul_dim {
        2 => return Ok(Reduction { parameter: BoundaryParameter::l0(), case: ReductionCase::L0, via: Via::Gamma0 }),
        0 => return Ok(Reduction { parameter: BoundaryParameter::relation(rel.clone()), case: ReductionCase::Matrix, via: Via::Gamma0 }),
        _ => {}
    }
    let bd = ctx.boundary_real(lambda)?;
    if !ctx.vanishes(bd.u20, &bd) {
        let m0 = n_matrix(&bd) / bd.u20;
        let (t, case) = reduce(rel, &m0, lambda)?;
        return Ok(Reduction { parameter: BoundaryParameter::Matrix(t), case, via: Via::Gamma0 });
    }
    if !ctx.vanishes(bd.u11, &bd) {
        let minf = ninf_matrix(&bd) / bd.u11;
        let dual = rel.dual();
        return match dual.mul_dim {
            0 => {
                let (binv, _) = inverse(&rel.b).ok_or(SlxError::NotAnEigenvalue { lambda })?;
                Ok(Reduction { parameter: BoundaryParameter::vartheta(hermitian_part(&(-rel.a * binv)))?, case: ReductionCase::Matrix, via: Via::Gamma0Prime })
            }
            1 => {
                let (t, case) = reduce(&dual, &minf, lambda)?;
                Ok(Reduction { parameter: BoundaryParameter::vartheta(t)?, case, via: Via::Gamma0Prime })
            }
            _ => Ok(Reduction { parameter: BoundaryParameter::linf(), case: ReductionCase::Matrix, via: Via::Gamma0Prime }),
        };
    }
    Err(SlxError::UncoveredPoint { lambda, certificate: certificate(&bd), direct_nullity: nullity(&BoundaryParameter::Relation(rel.clone()).direct_matrix(&bd), ctx.tol.nullity_rel) })
}

fn reduce(rel: &Relation, m: &Mat2, lambda: f64) -> Result<(Mat2, ReductionCase)> {
    let e = rel.op_direction.ok_or(SlxError::NotAnEigenvalue { lambda })?;
    let top = rel.theta_op.unwrap_or(0.0);
    let u = cols(&e, &orthogonal(&e));
    let mp = u.adjoint() * m * u;
    let size = 1.0 + fro(&mp);
    if (mp[(0, 0)] - top).norm() > 1e-6 * size {
        return Err(SlxError::NotAnEigenvalue { lambda });
    }
    let (inner, case) = if mp[(0, 1)].norm() <= 1e-9 * size {
        (mat(r(top), r(0.0), r(0.0), r(0.0)), ReductionCase::K1K4)
    } else {
        (mat(r(top), mp[(0, 1)], mp[(1, 0)], mp[(1, 1)] + r(1.0)), ReductionCase::K1K3)
    };
    Ok((hermitian_part(&(u * inner * u.adjoint())), case))
}

/// `D(R, lambda) = r11 u21 + r22 u10 - r21 u20 - r12 u11`; equals `2 cos(pi sqrt(lambda))` for `R = I` on the free problem.
pub fn discriminant(ctx: &Context, rr: &[[f64; 2]; 2], lambda: f64) -> Result<f64> {
    let bd = ctx.boundary_real(lambda)?;
    Ok(discriminant_from(rr, &bd))
}

pub fn discriminant_from(rr: &[[f64; 2]; 2], bd: &BoundaryData) -> f64 {
    let [[r11, r12], [r21, r22]] = *rr;
    r11 * bd.u21.re + r22 * bd.u10.re - r21 * bd.u20.re - r12 * bd.u11.re
}

/// Whether `lambda` is an eigenvalue of the coupled condition, by the discriminant.
pub fn coupled_eigentest(ctx: &Context, bc: &CoupledBC, lambda: f64, tol: f64) -> Result<bool> {
    let d = discriminant(ctx, &bc.r, lambda)?;
    Ok((d - 2.0 * bc.alpha.cos()).abs() < tol)
}

/// Deviations of `(u10, u11, u20, u21)` from `e^{i alpha} (r11, r21, r12, r22)`;
/// all four vanish exactly when `lambda` is a double eigenvalue.
pub fn coupled_double_conditions(ctx: &Context, bc: &CoupledBC, lambda: f64) -> Result<[C64; 4]> {
    let bd = ctx.boundary_real(lambda)?;
    let v = bc.transfer();
    Ok([bd.u10 - v[(0, 0)], bd.u11 - v[(1, 0)], bd.u20 - v[(0, 1)], bd.u21 - v[(1, 1)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_mat;
    use crate::problem::catalog;

    fn free() -> Context {
        Context::new(catalog::free())
    }

    fn lambdas(v: &[EigenvalueRecord]) -> Vec<f64> {
        v.iter().map(|e| e.lambda).collect()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn free_distinguished_spectra() {
        let ctx = free();
        let n = eigenvalues_l0(&ctx, -1.0, 20.0).unwrap();
        assert!(close(&lambdas(&n), &[0.0, 1.0, 4.0, 9.0, 16.0], 1e-8), "{:?}", lambdas(&n));
        let d = eigenvalues_linf(&ctx, 0.0, 20.0).unwrap();
        assert!(close(&lambdas(&d), &[1.0, 4.0, 9.0, 16.0], 1e-8), "{:?}", lambdas(&d));
        for e in d.iter().chain(&n[1..]) {
            assert_eq!(e.via, Via::Direct);
            assert!(e.certificate.unwrap() < 1e-8);
        }
    }

    #[test]
    fn free_multiplicities() {
        let ctx = free();
        let deg = BoundaryParameter::matrix(real_mat(0.0, 2.0, 2.0, 0.0)).unwrap();
        assert_eq!(multiplicity(&ctx, &deg, 0.25).unwrap(), 2);
        let diag = BoundaryParameter::matrix(real_mat(2.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(multiplicity(&ctx, &diag, 0.25).unwrap(), 1);
        assert_eq!(multiplicity(&ctx, &BoundaryParameter::linf(), 0.25).unwrap(), 0);
        assert!(matches!(multiplicity(&ctx, &diag, 1.0), Err(SlxError::UncoveredPoint { .. })));
        assert_eq!(multiplicity(&ctx, &BoundaryParameter::l0(), 1.0).unwrap(), 1);
    }

    #[test]
    fn degenerate_root_is_found_as_double() {
        let ctx = free();
        let deg = BoundaryParameter::matrix(real_mat(0.0, 2.0, 2.0, 0.0)).unwrap();
        let ev = eigenvalues(&ctx, &deg, 0.0, 0.6).unwrap();
        let hit = ev.iter().find(|e| (e.lambda - 0.25).abs() < 1e-7).expect("1/4 missing");
        assert_eq!(hit.multiplicity, 2);
        assert!(hit.degenerate);
    }

    #[test]
    fn periodic() {
        let ctx = free();
        let bc = CoupledBC::new(0.0, [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let p = BoundaryParameter::coupled(&bc).unwrap();
        let ev = eigenvalues(&ctx, &p, -1.0, 20.0).unwrap();
        assert!(close(&lambdas(&ev), &[0.0, 4.0, 16.0], 1e-7), "{ev:?}");
        assert_eq!(ev[0].multiplicity, 1);
        for e in &ev[1..] {
            assert_eq!(e.via, Via::Direct);
            assert_eq!(e.multiplicity, 2);
        }
        for l in [0.0, 4.0, 16.0] {
            assert!(coupled_eigentest(&ctx, &bc, l, 1e-8).unwrap());
        }
        for l in [0.3, 2.0, 7.7] {
            let d = discriminant(&ctx, &bc.r, l).unwrap();
            assert!((d - 2.0 * (std::f64::consts::PI * l.sqrt()).cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn antiperiodic_double_on_lattice_point() {
        // 25 sits exactly on the scan lattice, where rounding splits the touching zero.
        let ctx = free();
        let bc = CoupledBC::new(std::f64::consts::PI, [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let ev = eigenvalues(&ctx, &BoundaryParameter::coupled(&bc).unwrap(), -1.0, 30.0).unwrap();
        assert!(close(&lambdas(&ev), &[1.0, 9.0, 25.0], 1e-6), "{ev:?}");
        assert!(ev.iter().all(|e| e.multiplicity == 2), "{ev:?}");
    }

    #[test]
    fn degenerate_parameter_free() {
        let ctx = free();
        let d = degenerate_parameter(&ctx, 0.25).unwrap();
        assert!(fro(&(d.theta.unwrap() - real_mat(0.0, 2.0, 2.0, 0.0))) < 1e-10);
        assert!(fro(&(d.vartheta.unwrap() - real_mat(0.0, -0.5, -0.5, 0.0))) < 1e-10);
        assert!(matches!(degenerate_parameter(&ctx, 1.0), Err(SlxError::UncoveredPoint { .. })));
        let bc = CoupledBC::from_theta(&d.theta.unwrap()).unwrap();
        for z in coupled_double_conditions(&ctx, &bc, 0.25).unwrap() {
            assert!(z.norm() < 1e-10);
        }
    }

    #[test]
    fn relation_reduction_reproduces_eigenvalue() {
        let ctx = free();
        let e1 = crate::linalg::Vec2::new(r(1.0), r(0.0));
        let rel = Relation::mul_one(e1, 0.0);
        let p = BoundaryParameter::Relation(rel.clone());
        let ev = eigenvalues(&ctx, &p, -0.5, 10.0).unwrap();
        assert!(!ev.is_empty());
        for e in ev.iter().filter(|e| e.via != Via::Direct) {
            let red = relation_to_matrix(&ctx, &rel, e.lambda).unwrap();
            assert!(multiplicity(&ctx, &red.parameter, e.lambda).unwrap() >= 1);
        }
        let l0 = relation_to_matrix(&ctx, &Relation::l0(), 0.3).unwrap();
        assert_eq!(l0.case, ReductionCase::L0);
    }
}
