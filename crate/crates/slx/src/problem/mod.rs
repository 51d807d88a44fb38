//! Sturm-Liouville problems, endpoint frames and their validation.
//!
//! The expression is `ly = -(1/w)((p y')' + q y)` on `(a, b)`. Each endpoint
//! carries a frame `(u, v)` of real solutions of `(l - lambda0) y = 0` with
//! `u` principal and `[u, v] = 1`, where `[f, g] = p (f g' - f' g)`.

pub mod catalog;
pub mod classify;
pub mod file;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, SlxError};

pub use classify::{ClassifyConfig, EndpointClass, classify_endpoint};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn func<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> RealFn {
    Arc::new(f)
}

#[derive(Clone)]
pub struct Coefficients {
    pub p: RealFn,
    pub q: RealFn,
    pub w: RealFn,
}

/// A real function together with its quasi-derivative `p f'`, when known.
#[derive(Clone)]
pub struct SolutionFn {
    pub value: RealFn,
    pub quasi: Option<RealFn>,
}

impl SolutionFn {
    pub fn new(value: RealFn, quasi: RealFn) -> Self {
        Self { value, quasi: Some(quasi) }
    }

    pub fn value_only(value: RealFn) -> Self {
        Self { value, quasi: None }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    /// `p f'` at `x`; central differences when no closed form was supplied.
    pub fn quasi_at(&self, p: &RealFn, x: f64) -> Result<f64> {
        if let Some(q) = &self.quasi {
            let v = q(x);
            return if v.is_finite() { Ok(v) } else { Err(SlxError::DerivativeUnavailable { x }) };
        }
        let h = 1e-6 * x.abs().max(1e-3);
        let d = ((self.value)(x + h) - (self.value)(x - h)) / (2.0 * h);
        let v = p(x) * d;
        if v.is_finite() { Ok(v) } else { Err(SlxError::DerivativeUnavailable { x }) }
    }
}

/// Which end of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    A,
    B,
}

#[derive(Clone)]
pub struct EndpointFrame {
    pub location: f64,
    pub anchor: f64,
    pub u: SolutionFn,
    pub v: SolutionFn,
    pub classification: Option<EndpointClass>,
}

#[derive(Clone)]
pub struct SLProblem {
    pub name: String,
    pub a: f64,
    pub b: f64,
    pub coefficients: Coefficients,
    pub frame_a: EndpointFrame,
    pub frame_b: EndpointFrame,
    pub lower_bound: f64,
}

impl SLProblem {
    pub fn lambda0(&self) -> f64 {
        self.frame_a.anchor
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn frame(&self, end: Endpoint) -> &EndpointFrame {
        match end {
            Endpoint::A => &self.frame_a,
            Endpoint::B => &self.frame_b,
        }
    }

    /// `(u, p u', v, p v')` of the frame at `end`, evaluated at `x`.
    pub fn frame_values(&self, end: Endpoint, x: f64) -> Result<[f64; 4]> {
        let fr = self.frame(end);
        let p = &self.coefficients.p;
        let out = [fr.u.eval(x), fr.u.quasi_at(p, x)?, fr.v.eval(x), fr.v.quasi_at(p, x)?];
        if out.iter().all(|z| z.is_finite()) {
            Ok(out)
        } else {
            Err(SlxError::IntegrationDiverged(format!("frame not finite at x = {x}")))
        }
    }

    /// Default endpoint offset: as close as double precision allows.
    ///
    /// At a nonzero endpoint the offset is a power of two at least 256 ulps,
    /// so that `e + k*delta` is exact for `k` in {1, 2, 4}.
    pub fn default_delta(&self, end: Endpoint) -> f64 {
        let e = match end {
            Endpoint::A => self.a,
            Endpoint::B => self.b,
        };
        if e == 0.0 {
            1e-200 * self.length()
        } else {
            let ulp = f64::EPSILON * e.abs();
            (256.0 * ulp).log2().ceil().exp2()
        }
    }
}

/// Outcome of a single validation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub residual: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub class_a: Option<EndpointClass>,
    pub class_b: Option<EndpointClass>,
    /// Deficiency indices, `(2, 2)` once both endpoints are limit-circle or regular.
    pub deficiency_indices: Option<(u8, u8)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| format!("{}: {} (residual {:.3e})", c.name, c.detail, c.residual))
            .collect()
    }
}

fn check(name: &str, status: CheckStatus, residual: f64, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), status, residual, detail: detail.into() }
}

/// Offsets `d` toward an endpoint at which frame invariants are sampled.
fn sample_offsets(problem: &SLProblem, end: Endpoint) -> Vec<f64> {
    let floor = problem.default_delta(end);
    let mut d = 0.05 * problem.length();
    let mut out = vec![];
    while d >= floor && out.len() < 40 {
        out.push(d);
        d /= 16.0;
    }
    out
}

fn at(problem: &SLProblem, end: Endpoint, d: f64) -> f64 {
    match end {
        Endpoint::A => problem.a + d,
        Endpoint::B => problem.b - d,
    }
}

/// Bracket `[f, g] = p (f g' - f' g)` from values and quasi-derivatives.
pub fn bracket_values(f: f64, pf: f64, g: f64, pg: f64) -> f64 {
    f * pg - pf * g
}

/// Checks every invariant of the problem and its frames.
pub fn validate_problem(problem: &SLProblem, cfg: &ClassifyConfig) -> Result<ValidationReport> {
    let report = validation_report(problem, cfg);
    if report.passed() {
        Ok(report)
    } else {
        Err(SlxError::InvalidProblem(report.failures()))
    }
}

/// Like [`validate_problem`] but always returns the report.
pub fn validation_report(problem: &SLProblem, cfg: &ClassifyConfig) -> ValidationReport {
    let mut checks = vec![];
    let (a, b) = (problem.a, problem.b);
    let coeffs = &problem.coefficients;

    if !(a < b) {
        checks.push(check("interval", CheckStatus::Fail, 0.0, "a < b required"));
    }
    if !(a.is_finite() && b.is_finite()) {
        checks.push(check(
            "finite interval",
            CheckStatus::Fail,
            0.0,
            "infinite endpoints need a compactifying change of variable",
        ));
    }

    // Coefficient positivity and finiteness.
    let mut worst = 0.0f64;
    let mut bad = None;
    if a.is_finite() && b.is_finite() {
        for k in 1..128 {
            let x = a + (b - a) * k as f64 / 128.0;
            let (p, q, w) = ((coeffs.p)(x), (coeffs.q)(x), (coeffs.w)(x));
            if !(p > 0.0 && w > 0.0 && q.is_finite() && p.is_finite() && w.is_finite()) {
                bad = Some(x);
                worst = worst.max(1.0);
            }
        }
    }
    checks.push(match bad {
        None => check("coefficients", CheckStatus::Pass, 0.0, "p > 0, w > 0, all finite"),
        Some(x) => check("coefficients", CheckStatus::Fail, worst, format!("violated at x = {x}")),
    });

    if (problem.frame_a.anchor - problem.frame_b.anchor).abs() > 1e-14 {
        checks.push(check(
            "anchor",
            CheckStatus::Fail,
            (problem.frame_a.anchor - problem.frame_b.anchor).abs(),
            "frames use different lambda0",
        ));
    }

    let mut classes = [None, None];
    for (i, end) in [Endpoint::A, Endpoint::B].into_iter().enumerate() {
        let tag = if i == 0 { "a" } else { "b" };
        if a.is_finite() && b.is_finite() {
            checks.extend(frame_checks(problem, end, tag));
        }
        match classify_endpoint(coeffs, a, b, end, problem.lambda0(), cfg) {
            Ok(cls) => {
                classes[i] = Some(cls);
                let status = if cls == EndpointClass::LimitPoint { CheckStatus::Fail } else { CheckStatus::Pass };
                checks.push(check(&format!("classification {tag}"), status, 0.0, format!("{cls:?}")));
            }
            Err(e) => checks.push(check(&format!("classification {tag}"), CheckStatus::Inconclusive, 0.0, e.to_string())),
        }
    }
    let lc = |c: Option<EndpointClass>| matches!(c, Some(EndpointClass::Regular | EndpointClass::LimitCircleNonoscillatory));
    let deficiency_indices = if lc(classes[0]) && lc(classes[1]) { Some((2, 2)) } else { None };
    ValidationReport { checks, class_a: classes[0], class_b: classes[1], deficiency_indices }
}

fn frame_checks(problem: &SLProblem, end: Endpoint, tag: &str) -> Vec<Check> {
    let mut out = vec![];
    let offsets = sample_offsets(problem, end);
    let p = &problem.coefficients.p;

    // Normalization [u, v] = 1, sampled toward the endpoint.
    let mut worst = 0.0f64;
    let mut failed = None;
    for &d in &offsets {
        let x = at(problem, end, d);
        match problem.frame_values(end, x) {
            Ok([u, pu, v, pv]) => {
                let br = bracket_values(u, pu, v, pv);
                worst = worst.max((br - 1.0).abs());
            }
            Err(e) => failed = Some(e.to_string()),
        }
    }
    out.push(if let Some(msg) = failed {
        check(&format!("bracket {tag}"), CheckStatus::Fail, f64::NAN, msg)
    } else if worst < 1e-8 {
        check(&format!("bracket {tag}"), CheckStatus::Pass, worst, "[u, v] = 1")
    } else {
        check(&format!("bracket {tag}"), CheckStatus::Fail, worst, "[u, v] != 1")
    });

    // Principal ratio |u/v| must decrease toward the endpoint.
    let fr = problem.frame(end);
    let ratios: Vec<f64> = offsets
        .iter()
        .map(|&d| {
            let x = at(problem, end, d);
            (fr.u.eval(x) / fr.v.eval(x)).abs()
        })
        .collect();
    if ratios.len() >= 3 && ratios.iter().all(|r| r.is_finite()) {
        let tail = &ratios[ratios.len() / 2..];
        let decreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        let last = *ratios.last().unwrap();
        let first = ratios[0].max(1e-300);
        let status = if decreasing && last < 0.5 * first {
            CheckStatus::Pass
        } else if last > 2.0 * first {
            CheckStatus::Fail
        } else {
            CheckStatus::Inconclusive
        };
        out.push(check(&format!("principal ratio {tag}"), status, last, "|u/v| toward the endpoint"));
    } else {
        out.push(check(&format!("principal ratio {tag}"), CheckStatus::Inconclusive, f64::NAN, "ratio not finite"));
    }

    // 1/(p u^2) non-integrable, 1/(p v^2) integrable.
    let uf = fr.u.value.clone();
    let vf = fr.v.value.clone();
    let pp = p.clone();
    let inv_pu2 = move |x: f64| 1.0 / (pp(x) * uf(x) * uf(x));
    let pp = p.clone();
    let inv_pv2 = move |x: f64| 1.0 / (pp(x) * vf(x) * vf(x));
    let verdict_u = classify::panel_verdict_fn(problem, end, &inv_pu2);
    let verdict_v = classify::panel_verdict_fn(problem, end, &inv_pv2);
    use classify::Verdict;
    let st_u = match verdict_u {
        Verdict::Diverges => CheckStatus::Pass,
        Verdict::Converges => CheckStatus::Fail,
        Verdict::Inconclusive => CheckStatus::Inconclusive,
    };
    let st_v = match verdict_v {
        Verdict::Converges => CheckStatus::Pass,
        Verdict::Diverges => CheckStatus::Fail,
        Verdict::Inconclusive => CheckStatus::Inconclusive,
    };
    out.push(check(&format!("1/(p u^2) non-integrable {tag}"), st_u, 0.0, format!("{verdict_u:?}")));
    out.push(check(&format!("1/(p v^2) integrable {tag}"), st_v, 0.0, format!("{verdict_v:?}")));

    // Frames solve (l - lambda0) y = 0: ((p y')' + (q + lambda0 w) y) = 0.
    let mut worst = 0.0f64;
    let lam0 = problem.lambda0();
    for &d in offsets.iter().take(4) {
        let x = at(problem, end, d);
        let h = 1e-4 * d;
        for sol in [&fr.u, &fr.v] {
            let (Ok(qp), Ok(qm)) = (sol.quasi_at(p, x + h), sol.quasi_at(p, x - h)) else {
                continue;
            };
            let dq = (qp - qm) / (2.0 * h);
            let c = &problem.coefficients;
            let rest = ((c.q)(x) + lam0 * (c.w)(x)) * sol.eval(x);
            let scale = dq.abs() + rest.abs() + 1e-300;
            worst = worst.max((dq + rest).abs() / scale.max(1.0));
        }
    }
    let status = if worst < 1e-5 {
        CheckStatus::Pass
    } else if worst < 1e-2 {
        CheckStatus::Inconclusive
    } else {
        CheckStatus::Fail
    };
    out.push(check(&format!("frame residual {tag}"), status, worst, "frames solve the anchor equation"));
    out
}

/// Non-principal partner `v = -u (beta + int_x^alpha ds / (p u^2))` of `u`.
///
/// `endpoint` is the endpoint the construction is anchored at; `u` must not
/// vanish between it and `alpha`.
pub fn make_nonprincipal(u: &SolutionFn, p: &RealFn, endpoint: f64, alpha: f64, beta: f64) -> Result<SolutionFn> {
    let span = alpha - endpoint;
    let mut last_sign = 0.0;
    for k in 0..=400 {
        // Geometric sampling toward the endpoint plus a uniform sweep.
        let x = if k <= 200 {
            endpoint + span * (k as f64 / 200.0)
        } else {
            endpoint + span * 2f64.powi(-((k - 200) as i32) / 4)
        };
        if x == endpoint {
            continue;
        }
        let val = u.eval(x);
        if val == 0.0 || !val.is_finite() {
            return Err(SlxError::PrincipalVanishes { x });
        }
        if last_sign != 0.0 && val.signum() != last_sign {
            return Err(SlxError::PrincipalVanishes { x });
        }
        last_sign = val.signum();
    }
    let uf = u.value.clone();
    let pf = p.clone();
    let integrand: RealFn = Arc::new(move |s: f64| 1.0 / (pf(s) * uf(s) * uf(s)));
    let quad = {
        let integrand = integrand.clone();
        move |lo: f64, hi: f64| quadrature::double_exponential::integrate(|s| integrand(s), lo, hi, 1e-15 * (hi - lo).abs()).integral
    };
    // Cumulative integrals from the dyadic nodes endpoint + span 2^-k to alpha.
    let mut nodes = vec![(alpha, 0.0)];
    let mut d = span;
    while nodes.len() < 1100 {
        let (prev, acc) = *nodes.last().unwrap();
        d *= 0.5;
        let x = endpoint + d;
        if x == endpoint || d.abs() < 1e-300 {
            break;
        }
        let total = acc + quad(x, prev);
        if !total.is_finite() {
            break;
        }
        nodes.push((x, total));
    }
    let tail = move |x: f64| -> f64 {
        if x == alpha {
            return 0.0;
        }
        if !x.is_finite() || x == endpoint {
            return f64::NAN;
        }
        if (x - endpoint) * (alpha - x) < 0.0 {
            return quad(x, alpha);
        }
        let k = ((span / (x - endpoint)).log2().floor().max(0.0) as usize).min(nodes.len() - 1);
        let (xk, ck) = nodes[k];
        ck + quad(x, xk)
    };
    let tail: RealFn = Arc::new(tail);
    let uv = u.value.clone();
    let t1 = tail.clone();
    let value = func(move |x| -uv(x) * (beta + t1(x)));
    let uv = u.value.clone();
    let uq = u.clone();
    let pp = p.clone();
    let t2 = tail;
    let quasi = func(move |x| {
        let pu = uq.quasi_at(&pp, x).unwrap_or(f64::NAN);
        -pu * (beta + t2(x)) + 1.0 / uv(x)
    });
    Ok(SolutionFn::new(value, quasi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_problem_validates() {
        let pr = catalog::free();
        let rep = validate_problem(&pr, &ClassifyConfig::default()).unwrap();
        assert_eq!(rep.deficiency_indices, Some((2, 2)));
    }

    #[test]
    fn legendre_and_bessel_validate() {
        for pr in [catalog::legendre(), catalog::bessel(0.3), catalog::bessel(0.8)] {
            let rep = validation_report(&pr, &ClassifyConfig::default());
            assert!(rep.passed(), "{}: {:?}", pr.name, rep.failures());
        }
    }

    #[test]
    fn wrong_normalization_fails() {
        let mut pr = catalog::free();
        pr.frame_a.v = SolutionFn::new(func(|_| -2.0), func(|_| 0.0));
        let err = validate_problem(&pr, &ClassifyConfig::default()).unwrap_err();
        match err {
            SlxError::InvalidProblem(list) => assert!(list.iter().any(|s| s.starts_with("bracket a"))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonprincipal_free_at_zero() {
        let u = SolutionFn::new(func(|x| x), func(|_| 1.0));
        let p = func(|_| 1.0);
        let v = make_nonprincipal(&u, &p, 0.0, 1.0, 0.0).unwrap();
        for x in [1e-6, 0.1, 0.5, 0.9] {
            assert!((v.eval(x) - (x - 1.0)).abs() < 1e-10, "x = {x}");
            let br = bracket_values(x, 1.0, v.eval(x), v.quasi_at(&p, x).unwrap());
            assert!((br - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn nonprincipal_legendre_at_one() {
        let u = SolutionFn::new(func(|_| 1.0), func(|_| 0.0));
        let p = func(|x| (1.0 - x) * (1.0 + x));
        let v = make_nonprincipal(&u, &p, 1.0, 0.0, 0.0).unwrap();
        for x in [0.2, 0.7, 0.99] {
            let x: f64 = x;
            assert!((v.eval(x) - x.atanh()).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn nonprincipal_rejects_vanishing_u() {
        let u = SolutionFn::new(func(|x| x - 0.5), func(|_| 1.0));
        let p = func(|_| 1.0);
        assert!(matches!(make_nonprincipal(&u, &p, 0.0, 1.0, 0.0), Err(SlxError::PrincipalVanishes { .. })));
    }
}
