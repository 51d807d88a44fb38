//! Endpoint classification by dyadic panel quadrature.

use ode_solvers::SVector;
use serde::{Deserialize, Serialize};

use super::{Coefficients, Endpoint, SLProblem};
use crate::error::{Result, SlxError};
use crate::ode::{self, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointClass {
    Regular,
    LimitCircleNonoscillatory,
    LimitPoint,
}

#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    /// Number of trailing panels inspected by the ratio rule.
    pub window: usize,
    pub min_panels: usize,
    pub max_panels: usize,
    /// Panel ratios below this mean convergence.
    pub converge_ratio: f64,
    /// Panel ratios at or above this mean divergence.
    pub diverge_ratio: f64,
    /// Partial sums beyond this multiple of the first panel mean divergence.
    pub growth_factor: f64,
    pub tol: Tolerances,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            window: 8,
            min_panels: 24,
            max_panels: 200,
            converge_ratio: 0.985,
            diverge_ratio: 0.999,
            growth_factor: 1e6,
            tol: Tolerances { rtol: 1e-10, atol: 1e-300, max_steps: 50_000 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Ratio rule over the trailing panels of a sequence of panel integrals.
pub fn verdict(panels: &[f64], cfg: &ClassifyConfig) -> Verdict {
    if panels.iter().any(|v| !v.is_finite()) {
        return Verdict::Diverges;
    }
    let total: f64 = panels.iter().sum();
    if total == 0.0 {
        return Verdict::Converges;
    }
    if panels[0] > 0.0 && total > cfg.growth_factor * panels[0] && panels.windows(2).rev().take(cfg.window).all(|w| w[1] >= w[0]) {
        return Verdict::Diverges;
    }
    if panels.len() < cfg.window + 1 {
        return Verdict::Inconclusive;
    }
    let tail = &panels[panels.len() - cfg.window - 1..];
    let ratios: Vec<f64> = tail
        .windows(2)
        .map(|w| if w[0] == 0.0 { if w[1] == 0.0 { 0.0 } else { f64::INFINITY } } else { w[1] / w[0] })
        .collect();
    if ratios.iter().all(|&r| r < cfg.converge_ratio) {
        Verdict::Converges
    } else if ratios.iter().all(|&r| r >= cfg.diverge_ratio) {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    }
}

/// Geometry of the panels toward an endpoint: `x(s)` and `dx/ds`.
#[derive(Clone, Copy)]
struct Panels {
    start: f64,
    scale: f64,
    /// +1 toward +infinity / away from `a`; -1 toward `a` or `-infinity`.
    dir: f64,
    infinite: bool,
    floor: f64,
}

impl Panels {
    fn new(a: f64, b: f64, end: Endpoint) -> Self {
        let e = match end {
            Endpoint::A => a,
            Endpoint::B => b,
        };
        let dir = if end == Endpoint::A { -1.0 } else { 1.0 };
        if e.is_finite() {
            let other = if end == Endpoint::A { b } else { a };
            let start = if other.is_finite() { 0.5 * (a + b) } else { e - dir };
            let scale = (start - e).abs();
            let floor = if e == 0.0 { 1e-290 } else { 256.0 * f64::EPSILON * e.abs() };
            Self { start, scale, dir, infinite: false, floor }
        } else {
            let other = if end == Endpoint::A { b } else { a };
            let start = if other.is_finite() { other + dir * other.abs().max(1.0) } else { 0.0 };
            Self { start, scale: 1.0, dir, infinite: true, floor: 0.0 }
        }
    }

    fn x(&self, s: f64) -> f64 {
        if self.infinite {
            self.start + self.dir * self.scale * (s.exp() - 1.0)
        } else {
            let e = self.start + self.dir * self.scale;
            e - self.dir * self.scale * (-s).exp()
        }
    }

    fn dxds(&self, s: f64) -> f64 {
        if self.infinite { self.dir * self.scale * s.exp() } else { self.dir * self.scale * (-s).exp() }
    }

    fn exhausted(&self, k: usize) -> bool {
        !self.infinite && self.scale * (-((k + 1) as f64) * std::f64::consts::LN_2).exp() < self.floor
    }
}

/// Classifies an endpoint from the coefficients alone.
pub fn classify_endpoint(coeffs: &Coefficients, a: f64, b: f64, end: Endpoint, lambda0: f64, cfg: &ClassifyConfig) -> Result<EndpointClass> {
    let geo = Panels::new(a, b, end);
    let rhs = |s: f64, y: &SVector<f64, 9>, dy: &mut SVector<f64, 9>| {
        let x = geo.x(s);
        let g = geo.dxds(s);
        let (p, q, w) = ((coeffs.p)(x), (coeffs.q)(x), (coeffs.w)(x));
        let k = q + lambda0 * w;
        dy[0] = y[1] / p * g;
        dy[1] = -k * y[0] * g;
        dy[2] = y[3] / p * g;
        dy[3] = -k * y[2] * g;
        dy[4] = w * y[0] * y[0] * g.abs();
        dy[5] = w * y[2] * y[2] * g.abs();
        dy[6] = (1.0 / p).abs() * g.abs();
        dy[7] = q.abs() * g.abs();
        dy[8] = w.abs() * g.abs();
    };
    let mut state = SVector::<f64, 9>::zeros();
    state[0] = 1.0;
    state[3] = 1.0;
    let mut sums: [Vec<f64>; 5] = Default::default();
    let mut sign_changes: Vec<bool> = vec![];
    let ds = std::f64::consts::LN_2;
    let mut k = 0;
    let decided = |sums: &[Vec<f64>; 5]| -> Option<[Verdict; 5]> {
        let v = [0, 1, 2, 3, 4].map(|i| verdict(&sums[i], cfg));
        let l2 = v[0] != Verdict::Inconclusive && v[1] != Verdict::Inconclusive;
        let reg = geo.infinite || v[2..].iter().all(|x| *x != Verdict::Inconclusive);
        (l2 && reg).then_some(v)
    };
    let mut result = None;
    while k < cfg.max_panels && !geo.exhausted(k) {
        let traj = ode::trajectory(rhs, k as f64 * ds, (k + 1) as f64 * ds, state, &cfg.tol)?;
        let mut changed = false;
        for w in traj.windows(2) {
            if w[0].1[0] * w[1].1[0] < 0.0 || w[0].1[2] * w[1].1[2] < 0.0 {
                changed = true;
            }
        }
        sign_changes.push(changed);
        let end_state = traj.last().unwrap().1;
        for i in 0..5 {
            sums[i].push(end_state[4 + i]);
        }
        state = end_state;
        for i in 4..9 {
            state[i] = 0.0;
        }
        // Keep the solutions at unit scale; only ratios matter.
        let norm = state.rows(0, 4).abs().max();
        if norm > 1e100 || (norm < 1e-100 && norm > 0.0) {
            for i in 0..4 {
                state[i] /= norm;
            }
            for v in sums[..2].iter_mut().flatten() {
                *v /= norm * norm;
            }
        }
        k += 1;
        if k >= cfg.min_panels {
            let recent = sign_changes.iter().rev().take(cfg.window).filter(|c| **c).count();
            if recent >= 2 {
                return Err(SlxError::NonOscillationUndetermined);
            }
            if let Some(v) = decided(&sums) {
                result = Some(v);
                break;
            }
        }
    }
    let recent = sign_changes.iter().rev().take(cfg.window).filter(|c| **c).count();
    if recent >= 2 {
        return Err(SlxError::NonOscillationUndetermined);
    }
    let v = result.unwrap_or_else(|| [0, 1, 2, 3, 4].map(|i| verdict(&sums[i], cfg)));
    if !geo.infinite && v[2..].iter().all(|x| *x == Verdict::Converges) {
        return Ok(EndpointClass::Regular);
    }
    match (v[0], v[1]) {
        (Verdict::Converges, Verdict::Converges) => Ok(EndpointClass::LimitCircleNonoscillatory),
        (Verdict::Diverges, _) | (_, Verdict::Diverges) => Ok(EndpointClass::LimitPoint),
        _ => Err(SlxError::QuadratureInconclusive),
    }
}

/// Panel-ratio verdict for the integrability of `f` at an endpoint of `problem`.
pub(crate) fn panel_verdict_fn(problem: &SLProblem, end: Endpoint, f: &dyn Fn(f64) -> f64) -> Verdict {
    let cfg = ClassifyConfig::default();
    let geo = Panels::new(problem.a, problem.b, end);
    let mut panels = vec![];
    let mut k = 0;
    while k < cfg.max_panels && !geo.exhausted(k) {
        let (x0, x1) = (geo.x(k as f64 * std::f64::consts::LN_2), geo.x((k + 1) as f64 * std::f64::consts::LN_2));
        let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        let out = quadrature::double_exponential::integrate(|x| f(x).abs(), lo, hi, 1e-12 * (hi - lo));
        panels.push(out.integral);
        k += 1;
        if k >= cfg.min_panels {
            let v = verdict(&panels, &cfg);
            if v != Verdict::Inconclusive {
                return v;
            }
        }
    }
    verdict(&panels, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{catalog, func};

    #[test]
    fn free_endpoint_is_regular() {
        let pr = catalog::free();
        let cls = classify_endpoint(&pr.coefficients, pr.a, pr.b, Endpoint::A, 0.0, &ClassifyConfig::default()).unwrap();
        assert_eq!(cls, EndpointClass::Regular);
    }

    #[test]
    fn legendre_endpoint_is_limit_circle() {
        let pr = catalog::legendre();
        for end in [Endpoint::A, Endpoint::B] {
            let cls = classify_endpoint(&pr.coefficients, pr.a, pr.b, end, 0.0, &ClassifyConfig::default()).unwrap();
            assert_eq!(cls, EndpointClass::LimitCircleNonoscillatory);
        }
    }

    #[test]
    fn half_line_infinity_is_limit_point() {
        let coeffs = Coefficients { p: func(|_| 1.0), q: func(|_| 0.0), w: func(|_| 1.0) };
        let cls = classify_endpoint(&coeffs, 0.0, f64::INFINITY, Endpoint::B, 0.0, &ClassifyConfig::default()).unwrap();
        assert_eq!(cls, EndpointClass::LimitPoint);
    }

    #[test]
    fn oscillatory_endpoint_is_flagged() {
        // -y'' - 2 y / x^2: solutions x^(1/2) cos(c log x), oscillatory limit-circle at 0.
        let coeffs = Coefficients { p: func(|_| 1.0), q: func(|x| 2.0 / (x * x)), w: func(|_| 1.0) };
        let res = classify_endpoint(&coeffs, 0.0, 1.0, Endpoint::A, 0.0, &ClassifyConfig::default());
        assert!(matches!(res, Err(SlxError::NonOscillationUndetermined)), "{res:?}");
    }

    #[test]
    fn verdict_rules() {
        let cfg = ClassifyConfig::default();
        let geo: Vec<f64> = (0..30).map(|k| 0.5f64.powi(k)).collect();
        assert_eq!(verdict(&geo, &cfg), Verdict::Converges);
        let flat = vec![1.0; 30];
        assert_eq!(verdict(&flat, &cfg), Verdict::Diverges);
    }
}
