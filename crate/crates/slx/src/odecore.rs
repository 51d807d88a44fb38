//! Fundamental system, quasi-derivatives at `b`, brackets and the Green identity.
//!
//! Conventions: `[f, g] = p (f g' - f' g)`, `f0 = [f, v]`, `f1 = -[f, u]` at an
//! endpoint with frame `(u, v)`, so that `f ~ f0 u + f1 v` there. The solutions
//! satisfy `u1 ~ u_a`, `u2 ~ v_a` at `a`.
//!
//! Near an endpoint the solution is carried in frame coordinates
//! `c = (f0, f1)(x)`, which obey the trace-free system
//! `c' = (lambda - lambda0) w [[u v, v^2], [-u^2, -u v]] c` and stay bounded up
//! to the endpoint. The propagator of this system is integrated in the
//! stretched variable `x = e +- D exp(-s)` and extrapolated in the offset.

use num_complex::Complex64;
use ode_solvers::SVector;
use serde::Serialize;

use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, adjugate, det, fro, mat, r};
use crate::ode::{self, Tolerances};
use crate::problem::{Endpoint, SLProblem, SolutionFn};
use crate::report::csv_num;

#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    /// Offsets from the endpoints; `None` picks the smallest safe value.
    pub delta_a: Option<f64>,
    pub delta_b: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: u32,
    /// Number of offsets `delta * 2^k` used for extrapolation (2 or 3).
    pub richardson_levels: usize,
    /// Width of each endpoint window as a fraction of the interval length.
    pub window_fraction: f64,
    /// Largest admissible relative Wronskian drift.
    pub tol_wronskian: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            delta_a: None,
            delta_b: None,
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_steps: 200_000,
            richardson_levels: 3,
            window_fraction: 0.125,
            tol_wronskian: 1e-8,
        }
    }
}

impl IntegratorConfig {
    fn tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.rel_tol, atol: self.abs_tol, max_steps: self.max_steps }
    }

    pub fn delta(&self, problem: &SLProblem, end: Endpoint) -> f64 {
        let d = match end {
            Endpoint::A => self.delta_a,
            Endpoint::B => self.delta_b,
        };
        d.unwrap_or_else(|| problem.default_delta(end))
    }
}

/// Quasi-derivatives of the fundamental system at `b`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryData {
    #[serde(serialize_with = "ser_c")]
    pub lambda: C64,
    #[serde(serialize_with = "ser_c")]
    pub u10: C64,
    #[serde(serialize_with = "ser_c")]
    pub u11: C64,
    #[serde(serialize_with = "ser_c")]
    pub u20: C64,
    #[serde(serialize_with = "ser_c")]
    pub u21: C64,
    /// `|u10 u21 - u11 u20 - 1|` before `u2` was rescaled.
    pub wronskian_residual: f64,
    /// Largest relative Wronskian deviation over the checkpoints.
    pub wronskian_drift: f64,
    /// Size of the endpoint extrapolation corrections.
    pub extrapolation_error: f64,
}

pub(crate) fn ser_c<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl BoundaryData {
    /// `u10 u21 - u11 u20`.
    pub fn wronskian(&self) -> C64 {
        self.u10 * self.u21 - self.u11 * self.u20
    }

    pub fn scale(&self) -> f64 {
        self.u10.norm() + self.u11.norm() + self.u20.norm() + self.u21.norm()
    }

    pub fn conj(&self) -> Self {
        Self {
            lambda: self.lambda.conj(),
            u10: self.u10.conj(),
            u11: self.u11.conj(),
            u20: self.u20.conj(),
            u21: self.u21.conj(),
            ..*self
        }
    }
}

/// Bracket `[f, g](x) = p (f g' - f' g)`.
pub fn bracket(problem: &SLProblem, f: &SolutionFn, g: &SolutionFn, x: f64) -> Result<f64> {
    let p = &problem.coefficients.p;
    let out = f.eval(x) * g.quasi_at(p, x)? - f.quasi_at(p, x)? * g.eval(x);
    if out.is_finite() { Ok(out) } else { Err(SlxError::DerivativeUnavailable { x }) }
}

fn get(y: &[f64], i: usize) -> C64 {
    Complex64::new(y[2 * i], y[2 * i + 1])
}

fn set(y: &mut [f64], i: usize, z: C64) {
    y[2 * i] = z.re;
    y[2 * i + 1] = z.im;
}

fn mat_from(y: &SVector<f64, 8>) -> Mat2 {
    let s = y.as_slice();
    mat(get(s, 0), get(s, 1), get(s, 2), get(s, 3))
}

fn mat_to(m: &Mat2) -> SVector<f64, 8> {
    let mut y = SVector::<f64, 8>::zeros();
    let s = y.as_mut_slice();
    set(s, 0, m[(0, 0)]);
    set(s, 1, m[(0, 1)]);
    set(s, 2, m[(1, 0)]);
    set(s, 3, m[(1, 1)]);
    y
}

/// Geometry of an endpoint window: `x(s) = e + side * D exp(-s)`.
#[derive(Clone, Copy)]
struct Window {
    e: f64,
    side: f64,
    width: f64,
}

impl Window {
    fn new(problem: &SLProblem, end: Endpoint, cfg: &IntegratorConfig) -> Self {
        let width = cfg.window_fraction * problem.length();
        match end {
            Endpoint::A => Self { e: problem.a, side: 1.0, width },
            Endpoint::B => Self { e: problem.b, side: -1.0, width },
        }
    }

    fn x(&self, s: f64) -> f64 {
        self.e + self.side * self.width * (-s).exp()
    }

    fn dxds(&self, s: f64) -> f64 {
        -self.side * self.width * (-s).exp()
    }

    /// `s` at which the distance to the endpoint is `d`.
    fn s_at(&self, d: f64) -> f64 {
        (self.width / d).ln()
    }

    fn inner(&self) -> f64 {
        self.x(0.0)
    }
}

/// The frame-coordinate matrix `[[u v, v^2], [-u^2, -u v]] * w` at `x`.
fn frame_matrix(problem: &SLProblem, end: Endpoint, x: f64) -> [f64; 3] {
    let fr = problem.frame(end);
    let (u, v) = (fr.u.eval(x), fr.v.eval(x));
    let w = (problem.coefficients.w)(x);
    [w * u * v, w * v * v, w * u * u]
}

/// Propagator of the frame system from the inner window edge to the offsets
/// `delta * 2^k`, extrapolated to the endpoint. Returns (matrix, error estimate).
fn window_propagator(problem: &SLProblem, end: Endpoint, lambda: C64, cfg: &IntegratorConfig) -> Result<(Mat2, f64)> {
    let win = Window::new(problem, end, cfg);
    let mu = lambda - problem.lambda0();
    let delta = cfg.delta(problem, end);
    let rhs = |s: f64, y: &SVector<f64, 8>, dy: &mut SVector<f64, 8>| {
        let x = win.x(s);
        let [uv, vv, uu] = frame_matrix(problem, end, x);
        let g = win.dxds(s);
        let ys = y.as_slice();
        let ds = dy.as_mut_slice();
        for col in 0..2 {
            let c0 = get(ys, col);
            let c1 = get(ys, 2 + col);
            let f = mu * g;
            set(ds, col, f * (c0 * uv + c1 * vv));
            set(ds, 2 + col, -f * (c0 * uu + c1 * uv));
        }
    };
    let tol = cfg.tolerances();
    let levels = cfg.richardson_levels.clamp(1, 3);
    let mut offsets: Vec<f64> = (0..levels).rev().map(|k| delta * (1u32 << k) as f64).collect();
    offsets.retain(|&d| d < win.width);
    if offsets.is_empty() {
        return Err(SlxError::IntegrationDiverged("endpoint offset exceeds window".into()));
    }
    let mut y = mat_to(&Mat2::identity());
    let mut s0 = 0.0;
    let mut values = vec![];
    for &d in &offsets {
        let s1 = win.s_at(d);
        y = ode::solve(rhs, s0, s1, y, &tol)?;
        values.push(mat_from(&y));
        s0 = s1;
    }
    Ok(extrapolate(&values))
}

/// Richardson-type extrapolation of values at offsets `4d, 2d, d`.
fn extrapolate(values: &[Mat2]) -> (Mat2, f64) {
    let n = values.len();
    let last = values[n - 1];
    if n < 2 {
        return (last, 0.0);
    }
    let d2 = last - values[n - 2];
    let n2 = fro(&d2);
    if n < 3 {
        return (last + d2, n2);
    }
    let n1 = fro(&(values[n - 2] - values[n - 3]));
    if n2 <= 1e-15 * fro(&last) || n1 == 0.0 {
        return (last, n2);
    }
    // Observed order p from the ratio, clamped to [0.1, 2].
    let rho = (n2 / n1).clamp(0.25, 2f64.powf(-0.1));
    let corr = rho / (1.0 - rho);
    (last + d2 * r(corr), n2 * corr)
}

fn wronskian_drift(w: C64, scale: f64) -> f64 {
    (w - 1.0).norm() / scale.max(1.0)
}

/// Integrates the fundamental system and returns its quasi-derivatives at `b`.
pub fn fundamental_at_b(problem: &SLProblem, lambda: C64, cfg: &IntegratorConfig) -> Result<BoundaryData> {
    let (psi_a, err_a) = window_propagator(problem, Endpoint::A, lambda, cfg)?;
    let (psi_b, err_b) = window_propagator(problem, Endpoint::B, lambda, cfg)?;
    let det_a = det(&psi_a);
    let c_a = adjugate(&psi_a) / det_a;
    let mut drift = wronskian_drift(r(1.0) / det_a, fro(&c_a).powi(2));

    // Middle segment in (y, p y').
    let win_a = Window::new(problem, Endpoint::A, cfg);
    let win_b = Window::new(problem, Endpoint::B, cfg);
    let (xa, xb) = (win_a.inner(), win_b.inner());
    let [ua, pua, va, pva] = problem.frame_values(Endpoint::A, xa)?;
    let mut y0 = SVector::<f64, 8>::zeros();
    for col in 0..2 {
        let (c0, c1) = (c_a[(0, col)], c_a[(1, col)]);
        set(y0.as_mut_slice(), 2 * col, c0 * ua + c1 * va);
        set(y0.as_mut_slice(), 2 * col + 1, c0 * pua + c1 * pva);
    }
    let coeffs = &problem.coefficients;
    let rhs = |x: f64, y: &SVector<f64, 8>, dy: &mut SVector<f64, 8>| {
        let p = (coeffs.p)(x);
        let k = lambda * (coeffs.w)(x) + (coeffs.q)(x);
        let ys = y.as_slice();
        let ds = dy.as_mut_slice();
        for col in 0..2 {
            let yy = get(ys, 2 * col);
            let zz = get(ys, 2 * col + 1);
            set(ds, 2 * col, zz / p);
            set(ds, 2 * col + 1, -k * yy);
        }
    };
    let ym = ode::solve(rhs, xa, xb, y0, &cfg.tolerances())?;
    let ys = ym.as_slice();
    let (y1, z1, y2, z2) = (get(ys, 0), get(ys, 1), get(ys, 2), get(ys, 3));
    drift = drift.max(wronskian_drift(y1 * z2 - z1 * y2, (y1 * z2).norm() + (z1 * y2).norm()));

    let [ub, pub_, vb, pvb] = problem.frame_values(Endpoint::B, xb)?;
    let to_b = |y: C64, z: C64| (y * pvb - z * vb, z * ub - y * pub_);
    let (c10, c11) = to_b(y1, z1);
    let (c20, c21) = to_b(y2, z2);
    let c_b = mat(c10, c20, c11, c21);
    let f = psi_b * c_b;
    let (u10, u11, mut u20, mut u21) = (f[(0, 0)], f[(1, 0)], f[(0, 1)], f[(1, 1)]);
    let w = u10 * u21 - u11 * u20;
    let scale = (u10 * u21).norm() + (u11 * u20).norm();
    drift = drift.max(wronskian_drift(w, scale));
    if !(u10.is_finite() && u11.is_finite() && u20.is_finite() && u21.is_finite()) {
        return Err(SlxError::IntegrationDiverged(format!("non-finite boundary data at lambda = {lambda}")));
    }
    if drift > cfg.tol_wronskian {
        return Err(SlxError::WronskianDrift { drift });
    }
    let residual = (w - 1.0).norm();
    u20 /= w;
    u21 /= w;
    let extrapolation_error = (err_a * fro(&psi_b) + err_b) * fro(&c_b).max(1.0);
    Ok(BoundaryData { lambda, u10, u11, u20, u21, wronskian_residual: residual, wronskian_drift: drift, extrapolation_error })
}

/// One sample of the forward trajectory of `u1`, `u2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrajectoryRow {
    pub x: f64,
    #[serde(serialize_with = "ser_c")]
    pub u1: C64,
    #[serde(serialize_with = "ser_c")]
    pub pu1: C64,
    #[serde(serialize_with = "ser_c")]
    pub u2: C64,
    #[serde(serialize_with = "ser_c")]
    pub pu2: C64,
    #[serde(serialize_with = "ser_c")]
    pub wronskian: C64,
}

/// Smooth step from 0 to 1 over `[lo, hi]` and its derivative.
fn smoothstep(x: f64, lo: f64, hi: f64) -> (f64, f64) {
    if x <= lo {
        return (0.0, 0.0);
    }
    if x >= hi {
        return (1.0, 0.0);
    }
    let t = (x - lo) / (hi - lo);
    (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t) / (hi - lo))
}

struct Forward {
    rows: Vec<TrajectoryRow>,
    /// `int w u2 v~ dx` over the whole interval.
    integral: C64,
    /// `int chi' [u2, v_b - v_a] dx`, nonzero only when the frames' `v` differ.
    blend: C64,
    /// `u2^[0](b)` at the truncated endpoint.
    u20_b: C64,
}

/// Forward integration from `a + delta` to `b - delta` without extrapolation.
fn forward(problem: &SLProblem, lambda: C64, cfg: &IntegratorConfig, keep_rows: bool) -> Result<Forward> {
    let tol = cfg.tolerances();
    let mu = lambda - problem.lambda0();
    let mut rows = vec![];
    let push_c = |rows: &mut Vec<TrajectoryRow>, end: Endpoint, x: f64, c: &[C64; 4]| -> Result<()> {
        let [u, pu, v, pv] = problem.frame_values(end, x)?;
        let (u1, pu1) = (c[0] * u + c[1] * v, c[0] * pu + c[1] * pv);
        let (u2, pu2) = (c[2] * u + c[3] * v, c[2] * pu + c[3] * pv);
        rows.push(TrajectoryRow { x, u1, pu1, u2, pu2, wronskian: u1 * pu2 - pu1 * u2 });
        Ok(())
    };

    // a-window, outward from the endpoint. State: c of u1, c of u2, J.
    let win = Window::new(problem, Endpoint::A, cfg);
    let s_start = win.s_at(cfg.delta(problem, Endpoint::A));
    let window_rhs = |end: Endpoint, win: Window| {
        move |s: f64, y: &SVector<f64, 10>, dy: &mut SVector<f64, 10>| {
            let x = win.x(s);
            let [uv, vv, uu] = frame_matrix(problem, end, x);
            let g = win.dxds(s);
            let ys = y.as_slice();
            let ds = dy.as_mut_slice();
            let fr = problem.frame(end);
            let (u, v) = (fr.u.eval(x), fr.v.eval(x));
            for sol in 0..2 {
                let c0 = get(ys, 2 * sol);
                let c1 = get(ys, 2 * sol + 1);
                set(ds, 2 * sol, mu * g * (c0 * uv + c1 * vv));
                set(ds, 2 * sol + 1, -mu * g * (c0 * uu + c1 * uv));
            }
            let u2 = get(ys, 2) * u + get(ys, 3) * v;
            set(ds, 4, u2 * (v * (problem.coefficients.w)(x) * g));
        }
    };
    let mut y = SVector::<f64, 10>::zeros();
    y[0] = 1.0;
    y[6] = 1.0;
    let traj = ode::trajectory(window_rhs(Endpoint::A, win), s_start, 0.0, y, &tol)?;
    if keep_rows {
        for (s, st) in &traj {
            let ss = st.as_slice();
            push_c(&mut rows, Endpoint::A, win.x(*s), &[get(ss, 0), get(ss, 1), get(ss, 2), get(ss, 3)])?;
        }
    }
    let st = traj.last().unwrap().1;
    let ss = st.as_slice();
    // J accumulates with dx/ds < 0 while s decreases, so the sign is already that of int dx.
    let mut integral = get(ss, 4);

    // Middle: (y, p y') for both solutions, J and the blend correction.
    let xa = win.inner();
    let win_b = Window::new(problem, Endpoint::B, cfg);
    let xb = win_b.inner();
    let [ua, pua, va, pva] = problem.frame_values(Endpoint::A, xa)?;
    let mut ym = SVector::<f64, 12>::zeros();
    for sol in 0..2 {
        let (c0, c1) = (get(ss, 2 * sol), get(ss, 2 * sol + 1));
        set(ym.as_mut_slice(), 2 * sol, c0 * ua + c1 * va);
        set(ym.as_mut_slice(), 2 * sol + 1, c0 * pua + c1 * pva);
    }
    let (blo, bhi) = (xa + (xb - xa) / 3.0, xb - (xb - xa) / 3.0);
    let coeffs = &problem.coefficients;
    let (fa, fb) = (&problem.frame_a.v, &problem.frame_b.v);
    let rhs = |x: f64, y: &SVector<f64, 12>, dy: &mut SVector<f64, 12>| {
        let p = (coeffs.p)(x);
        let w = (coeffs.w)(x);
        let k = lambda * w + (coeffs.q)(x);
        let ys = y.as_slice();
        let ds = dy.as_mut_slice();
        for sol in 0..2 {
            let yy = get(ys, 2 * sol);
            let zz = get(ys, 2 * sol + 1);
            set(ds, 2 * sol, zz / p);
            set(ds, 2 * sol + 1, -k * yy);
        }
        let (chi, dchi) = smoothstep(x, blo, bhi);
        let (va, vb) = (fa.eval(x), fb.eval(x));
        let vt = va + chi * (vb - va);
        let (y2, z2) = (get(ys, 2), get(ys, 3));
        set(ds, 4, y2 * (w * vt));
        if dchi != 0.0 {
            let dv = vb - va;
            let pdv = fb.quasi_at(&coeffs.p, x).unwrap_or(f64::NAN) - fa.quasi_at(&coeffs.p, x).unwrap_or(f64::NAN);
            set(ds, 5, (y2 * pdv - z2 * dv) * dchi);
        } else {
            set(ds, 5, r(0.0));
        }
    };
    let traj = ode::trajectory(rhs, xa, xb, ym, &tol)?;
    if keep_rows {
        for (x, st) in &traj {
            let s = st.as_slice();
            let (u1, pu1, u2, pu2) = (get(s, 0), get(s, 1), get(s, 2), get(s, 3));
            rows.push(TrajectoryRow { x: *x, u1, pu1, u2, pu2, wronskian: u1 * pu2 - pu1 * u2 });
        }
    }
    let st = traj.last().unwrap().1;
    let s = st.as_slice();
    integral += get(s, 4);
    let blend = get(s, 5);

    // b-window toward the endpoint.
    let [ub, pub_, vb, pvb] = problem.frame_values(Endpoint::B, xb)?;
    let mut y = SVector::<f64, 10>::zeros();
    for sol in 0..2 {
        let (yy, zz) = (get(s, 2 * sol), get(s, 2 * sol + 1));
        set(y.as_mut_slice(), 2 * sol, yy * pvb - zz * vb);
        set(y.as_mut_slice(), 2 * sol + 1, zz * ub - yy * pub_);
    }
    let s_end = win_b.s_at(cfg.delta(problem, Endpoint::B));
    let traj = ode::trajectory(window_rhs(Endpoint::B, win_b), 0.0, s_end, y, &tol)?;
    if keep_rows {
        for (s, st) in &traj {
            let ss = st.as_slice();
            push_c(&mut rows, Endpoint::B, win_b.x(*s), &[get(ss, 0), get(ss, 1), get(ss, 2), get(ss, 3)])?;
        }
    }
    let st = traj.last().unwrap().1;
    let ss = st.as_slice();
    integral += get(ss, 4);
    Ok(Forward { rows, integral, blend, u20_b: get(ss, 2) })
}

/// `|(lambda - lambda0) int w u2 v~ dx + int chi' [u2, v_b - v_a] dx - (u2^[0](b) - u2^[0](a))|`.
///
/// `v~` equals `v_a` near `a`, `v_b` near `b`, blended smoothly in between.
pub fn green_identity_residual(problem: &SLProblem, lambda: C64, cfg: &IntegratorConfig) -> Result<f64> {
    let fw = forward(problem, lambda, cfg, false)?;
    let mu = lambda - problem.lambda0();
    Ok((mu * fw.integral + fw.blend - fw.u20_b).norm())
}

/// Forward trajectory of `u1`, `u2` and their quasi-derivatives.
pub fn trajectory(problem: &SLProblem, lambda: C64, cfg: &IntegratorConfig) -> Result<Vec<TrajectoryRow>> {
    Ok(forward(problem, lambda, cfg, true)?.rows)
}

/// CSV rendering of [`trajectory`].
pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("x,re_u1,im_u1,re_pu1,im_pu1,re_u2,im_u2,re_pu2,im_pu2,re_wronskian,im_wronskian\n");
    for rw in rows {
        let cells = [rw.x, rw.u1.re, rw.u1.im, rw.pu1.re, rw.pu1.im, rw.u2.re, rw.u2.im, rw.pu2.re, rw.pu2.im, rw.wronskian.re, rw.wronskian.im];
        out.push_str(&cells.map(csv_num).join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::problem::catalog;
    use std::f64::consts::PI;

    fn close(a: C64, b: f64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn free_boundary_data_closed_forms() {
        let pr = catalog::free();
        let cfg = IntegratorConfig::default();
        let bd = fundamental_at_b(&pr, r(0.25), &cfg).unwrap();
        assert!(close(bd.u10, 0.0, 1e-11) && close(bd.u11, -2.0, 1e-11));
        assert!(close(bd.u20, 0.5, 1e-11) && close(bd.u21, 0.0, 1e-11));
        let bd = fundamental_at_b(&pr, r(0.0), &cfg).unwrap();
        assert!(close(bd.u10, 1.0, 1e-12) && close(bd.u11, -PI, 1e-12));
        assert!(close(bd.u20, 0.0, 1e-12) && close(bd.u21, 1.0, 1e-12));
        let bd = fundamental_at_b(&pr, r(4.0), &cfg).unwrap();
        assert!(close(bd.u10, 1.0, 1e-10) && close(bd.u11, 0.0, 1e-10));
        assert!(close(bd.u20, 0.0, 1e-10) && close(bd.u21, 1.0, 1e-10));
    }

    #[test]
    fn free_matches_trig_at_complex_lambda() {
        let pr = catalog::free();
        let lam = c(2.3, 0.7);
        let bd = fundamental_at_b(&pr, lam, &IntegratorConfig::default()).unwrap();
        let k = lam.sqrt();
        let kp = k * PI;
        assert!((bd.u10 - kp.cos()).norm() < 1e-10);
        assert!((bd.u11 + kp.sin() / k).norm() < 1e-10);
        assert!((bd.u20 - k * kp.sin()).norm() < 1e-10);
        assert!((bd.u21 - kp.cos()).norm() < 1e-10);
    }

    #[test]
    fn legendre_at_anchor() {
        // At lambda0 the solutions are 1 and atanh(x): u11 = 0, u10 = u21 = 1.
        let pr = catalog::legendre();
        let bd = fundamental_at_b(&pr, r(0.0), &IntegratorConfig::default()).unwrap();
        assert!(close(bd.u10, 1.0, 1e-12) && close(bd.u11, 0.0, 1e-12) && close(bd.u21, 1.0, 1e-12));
    }

    #[test]
    fn bracket_examples() {
        let pr = catalog::free();
        let s = SolutionFn::new(crate::problem::func(f64::sin), crate::problem::func(f64::cos));
        let co = SolutionFn::new(crate::problem::func(f64::cos), crate::problem::func(|x: f64| -x.sin()));
        for x in [0.1, 1.0, 2.5] {
            assert!((bracket(&pr, &co, &s, x).unwrap() - 1.0).abs() < 1e-15);
            assert!(bracket(&pr, &s, &s, x).unwrap().abs() < 1e-15);
        }
        let near0 = bracket(&pr, &pr.frame_a.u, &pr.frame_a.v, 1e-12).unwrap();
        assert!((near0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn green_identity_on_free_problem() {
        let pr = catalog::free();
        let cfg = IntegratorConfig::default();
        for lam in [0.25, 0.0, 1.0, 4.0, 7.3] {
            assert!(green_identity_residual(&pr, r(lam), &cfg).unwrap() < 1e-9, "lambda = {lam}");
        }
    }

    #[test]
    fn green_identity_with_blended_frames() {
        // v_b shifted by a principal multiple: v_b - v_a is a nonzero anchor solution.
        let mut pr = catalog::free();
        pr.frame_b.v = SolutionFn::new(crate::problem::func(|x| -1.0 + 0.3 * (x - PI)), crate::problem::func(|_| 0.3));
        let cfg = IntegratorConfig::default();
        assert!(green_identity_residual(&pr, c(1.7, 0.2), &cfg).unwrap() < 1e-9);
    }
}
