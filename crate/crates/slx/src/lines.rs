//! One-parameter families `vartheta~ + t vartheta` in the second triple.

use serde::Serialize;

use crate::context::Context;
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, det, fro, hermitian_defect, r, real_mat};
use crate::odecore::BoundaryData;
use crate::roots::quadratic_roots;
use crate::spectra::{BoundaryParameter, eigenvalues};

#[derive(Clone, Copy, Debug)]
pub struct LineFamily {
    pub theta_tilde: Mat2,
    pub theta: Mat2,
}

impl LineFamily {
    pub fn new(theta_tilde: Mat2, theta: Mat2) -> Result<Self> {
        for (name, m) in [("theta_tilde", &theta_tilde), ("theta", &theta)] {
            if hermitian_defect(m) > 1e-10 * (1.0 + fro(m)) {
                return Err(SlxError::HypothesisViolated(vec![format!("{name} is not Hermitian")]));
            }
        }
        Ok(Self { theta_tilde, theta })
    }

    pub fn at(&self, t: f64) -> Mat2 {
        self.theta_tilde + self.theta * r(t)
    }

    /// The member at `t` as a boundary parameter.
    pub fn parameter(&self, t: f64) -> Result<BoundaryParameter> {
        BoundaryParameter::vartheta(self.at(t))
    }

    pub fn det_theta(&self) -> C64 {
        det(&self.theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TCase {
    Quadratic,
    /// `det vartheta = 0`, `c != 0`.
    Linear,
    /// `det vartheta = 0`, `c = 0`: every `t` or none.
    AllOrNone,
}

#[derive(Clone, Debug, Serialize)]
pub struct TSolution {
    pub lambda: f64,
    pub roots: Vec<f64>,
    /// Set when every `t` makes `lambda` an eigenvalue.
    pub all_t: bool,
    pub case: TCase,
    /// `u11 det(vartheta~ + t vartheta - Minf) = a t^2 + c t + d`.
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub double_t: Option<f64>,
}

/// Coefficients `(a, c, d)` and the sum of term magnitudes.
fn coefficients(f: &LineFamily, bd: &BoundaryData) -> (f64, f64, f64, f64) {
    let (a, b) = (&f.theta_tilde, &f.theta);
    let (u10, u11, u20, u21) = (bd.u10, bd.u11, bd.u20, bd.u21);
    let qa = u11 * det(b);
    let cross = a[(0, 0)] * b[(1, 1)] + a[(1, 1)] * b[(0, 0)] - a[(0, 1)] * b[(1, 0)] - a[(1, 0)] * b[(0, 1)];
    let qc = u11 * cross - b[(0, 0)] * u10 - b[(1, 1)] * u21 + b[(0, 1)] + b[(1, 0)];
    let qd = u11 * det(a) - a[(0, 0)] * u10 - a[(1, 1)] * u21 + a[(0, 1)] + a[(1, 0)] + u20;
    let scale = (u11.norm() + u10.norm() + u21.norm() + u20.norm() + 1.0) * (1.0 + fro(a) + fro(b)).powi(2);
    (qa.re, qc.re, qd.re, scale)
}

fn require_minf(ctx: &Context, bd: &BoundaryData) -> Result<()> {
    if ctx.vanishes(bd.u11, bd) {
        return Err(SlxError::AtPole { lambda: bd.lambda.re, nullity: 1 });
    }
    Ok(())
}

/// Values of `t` for which `lambda` is an eigenvalue of the family member.
pub fn t_roots(ctx: &Context, family: &LineFamily, lambda: f64) -> Result<TSolution> {
    let bd = ctx.boundary_real(lambda)?;
    require_minf(ctx, &bd)?;
    let (a, c, d, scale) = coefficients(family, &bd);
    let singular = det(&family.theta).norm() <= ctx.tol.tol_det * fro(&family.theta).powi(2);
    let small = 1e-10 * scale;
    let (roots, all_t, case) = if !singular {
        (quadratic_roots(a, c, d), false, TCase::Quadratic)
    } else if c.abs() > small {
        (vec![-d / c], false, TCase::Linear)
    } else {
        (vec![], d.abs() <= small, TCase::AllOrNone)
    };
    let double_t = match t_double(ctx, family, lambda) {
        Ok(check) => check.t,
        Err(_) => None,
    };
    Ok(TSolution { lambda, roots, all_t, case, a, c, d, double_t })
}

/// Closed-form roots for `vartheta~ = 0`, `vartheta = diag(zeta, eta)`.
pub fn t_diag(ctx: &Context, zeta: f64, eta: f64, lambda: f64) -> Result<Vec<f64>> {
    if zeta == 0.0 || eta == 0.0 {
        return Err(SlxError::ZeroParameter);
    }
    let bd = ctx.boundary_real(lambda)?;
    require_minf(ctx, &bd)?;
    let (u10, u11, u21) = (bd.u10.re, bd.u11.re, bd.u21.re);
    let disc = 4.0 * eta * zeta + (eta * u21 - zeta * u10).powi(2);
    if disc < 0.0 {
        return Ok(vec![]);
    }
    let s = disc.sqrt();
    let den = 2.0 * zeta * eta * u11;
    let mut out = vec![(eta * u21 + zeta * u10 - s) / den, (eta * u21 + zeta * u10 + s) / den];
    out.sort_by(f64::total_cmp);
    if disc == 0.0 {
        out.truncate(1);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleCheck {
    pub lambda: f64,
    /// Common value of the four expressions, when they agree.
    pub t: Option<f64>,
    pub candidates: [f64; 4],
    pub spread: f64,
    /// A further scalar combination of the data, reported for comparison only.
    pub leftover: f64,
}

/// The `t` (if any) at which `lambda` is a double eigenvalue.
///
/// A double eigenvalue means `vartheta~ + t vartheta = Minf(lambda)` entrywise,
/// which gives four expressions for `t`.
pub fn t_double(ctx: &Context, family: &LineFamily, lambda: f64) -> Result<DoubleCheck> {
    let (a, b) = (&family.theta_tilde, &family.theta);
    let nb = fro(b);
    let mut failed = Vec::new();
    for (name, z) in [("vartheta11", b[(0, 0)]), ("vartheta12", b[(0, 1)]), ("vartheta22", b[(1, 1)])] {
        if z.norm() <= 1e-14 * nb.max(f64::MIN_POSITIVE) {
            failed.push(format!("{name} = 0"));
        }
    }
    if det(b).norm() <= ctx.tol.tol_det * nb * nb {
        failed.push("det vartheta = 0".to_string());
    }
    if !failed.is_empty() {
        return Err(SlxError::HypothesisViolated(failed));
    }
    let bd = ctx.boundary_real(lambda)?;
    require_minf(ctx, &bd)?;
    let (u10, u11, u21) = (bd.u10, bd.u11, bd.u21);
    let one = r(1.0);
    let exprs = [
        (u21 - a[(0, 0)] * u11) / (b[(0, 0)] * u11),
        (one - a[(0, 1)] * u11) / (b[(0, 1)] * u11),
        (one - a[(1, 0)] * u11) / (b[(1, 0)] * u11),
        (u10 - a[(1, 1)] * u11) / (b[(1, 1)] * u11),
    ];
    let mut spread = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            spread = spread.max((exprs[i] - exprs[j]).norm());
        }
        spread = spread.max(exprs[i].im.abs());
    }
    let mean = exprs.iter().map(|z| z.re).sum::<f64>() / 4.0;
    let leftover = ((u11 - one) * (a[(0, 1)] + a[(1, 0)] + u21 * u10 - a[(1, 1)] * u21 - a[(0, 0)] * u10) + u11 * (r(2.0) * det(b) + one)).norm();
    let t = (spread <= 1e-8 * mean.abs().max(1.0)).then_some(mean);
    Ok(DoubleCheck { lambda, t, candidates: exprs.map(|z| z.re), spread, leftover })
}

#[derive(Clone, Debug)]
pub struct DisjointPair {
    pub t: f64,
    /// `t I` in the second triple.
    pub parameter: BoundaryParameter,
    pub spectrum: Vec<f64>,
    pub separation: f64,
    pub tried: Vec<f64>,
}

/// Minimum gap accepted between the two spectra, relative to `max(1, |lambda|)`.
pub const DISJOINT_GAP: f64 = 1e-6;

/// Walks `t I` (second triple) until the spectrum on `[lo, hi]` avoids that of `theta0`.
pub fn disjoint_pair(ctx: &Context, theta0: &BoundaryParameter, lo: f64, hi: f64) -> Result<DisjointPair> {
    let base: Vec<f64> = eigenvalues(ctx, theta0, lo, hi)?.iter().map(|e| e.lambda).collect();
    let family = LineFamily::new(Mat2::zeros(), real_mat(1.0, 0.0, 0.0, 1.0))?;
    let mut tried = Vec::new();
    let steps = [1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0, 3.0, 0.75, 1.5, 6.0, 0.375];
    for t in steps.iter().flat_map(|&s| [s, -s]) {
        tried.push(t);
        let parameter = family.parameter(t)?;
        let spectrum: Vec<f64> = eigenvalues(ctx, &parameter, lo, hi)?.iter().map(|e| e.lambda).collect();
        let mut separation = f64::INFINITY;
        let mut ok = true;
        for x in &spectrum {
            for y in &base {
                let gap = (x - y).abs();
                separation = separation.min(gap);
                if gap <= DISJOINT_GAP * x.abs().max(1.0) {
                    ok = false;
                }
            }
        }
        if ok {
            return Ok(DisjointPair { t, parameter, spectrum, separation, tried });
        }
    }
    Err(SlxError::SearchExhausted(tried))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::catalog;
    use crate::spectra::multiplicity;

    fn free() -> Context {
        Context::new(catalog::free())
    }

    #[test]
    fn identity_family_at_quarter() {
        let ctx = free();
        let f = LineFamily::new(Mat2::zeros(), Mat2::identity()).unwrap();
        let s = t_roots(&ctx, &f, 0.25).unwrap();
        assert_eq!(s.case, TCase::Quadratic);
        assert_eq!(s.roots.len(), 2);
        assert!((s.roots[0] + 0.5).abs() < 1e-10 && (s.roots[1] - 0.5).abs() < 1e-10);
        let d = t_diag(&ctx, 1.0, 1.0, 0.25).unwrap();
        assert!((d[0] + 0.5).abs() < 1e-10 && (d[1] - 0.5).abs() < 1e-10);
        assert!(t_diag(&ctx, 1.0, -1.0, 0.25).unwrap().is_empty());
        assert!(matches!(t_diag(&ctx, 0.0, 1.0, 0.25), Err(SlxError::ZeroParameter)));
        assert!(matches!(t_double(&ctx, &f, 0.25), Err(SlxError::HypothesisViolated(_))));
    }

    #[test]
    fn linear_case_against_direct_solve() {
        let ctx = free();
        let f = LineFamily::new(real_mat(0.3, 0.1, 0.1, -0.2), real_mat(1.0, 0.0, 0.0, 0.0)).unwrap();
        let s = t_roots(&ctx, &f, 0.25).unwrap();
        assert_eq!(s.case, TCase::Linear);
        let t = s.roots[0];
        let minf = crate::weyl::m_inf(&ctx, r(0.25)).unwrap().matrix;
        assert!(det(&(f.at(t) - minf)).norm() < 1e-10);
        assert!(multiplicity(&ctx, &f.parameter(t).unwrap(), 0.25).unwrap() >= 1);
    }

    #[test]
    fn double_from_degenerate_parameter() {
        let ctx = free();
        let lam = 2.3;
        let star = crate::spectra::degenerate_parameter(&ctx, lam).unwrap().vartheta.unwrap();
        let dir = real_mat(1.0, 0.4, 0.4, 2.0);
        let f = LineFamily::new(star - dir, dir).unwrap();
        let check = t_double(&ctx, &f, lam).unwrap();
        assert!((check.t.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(multiplicity(&ctx, &f.parameter(1.0).unwrap(), lam).unwrap(), 2);
    }

    #[test]
    fn disjoint_from_dirichlet() {
        let ctx = free();
        let pair = disjoint_pair(&ctx, &BoundaryParameter::linf(), 0.0, 20.0).unwrap();
        for x in &pair.spectrum {
            for y in [1.0, 4.0, 9.0, 16.0] {
                assert!((x - y).abs() > 2.0 * ctx.tol.root_tol(y));
            }
        }
    }
}
