//! Finite-difference eigenvalue oracle on a truncated interval.
//!
//! Piecewise-linear elements with lumped mass on `[a + delta, b - delta]`.
//! The boundary condition is rewritten in the plain values `(f, p f')` at the
//! truncation points through the endpoint frames, then imposed weakly:
//! the end values are restricted to the range of the relation and the
//! operator part enters as a boundary form. Eigenvalues come from inertia
//! counts and bisection, so this path shares no code with the shooting solver.

use serde::Serialize;

use crate::context::Context;
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, Vec2, eigh, hermitian_part, inv_sqrt_hpd, mat, r};
use crate::problem::{Endpoint, SLProblem};
use crate::spectra::{BoundaryParameter, eigenvalues};

pub struct DiscreteModel {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub h: f64,
    /// `p` at cell midpoints over `h`.
    k: Vec<f64>,
    /// Lumped `q` and `w` at the nodes.
    qm: Vec<f64>,
    wm: Vec<f64>,
    /// Orthonormal basis of the admissible end values `(f(lo), f(hi))`.
    basis: Vec<Vec2>,
    /// Boundary form on that basis.
    form: Mat2,
    /// `|[u, v] - 1|` at the two truncation points.
    pub frame_residual: f64,
}

/// Accepted Wronskian defect of the frames at the truncation points.
pub const FRAME_TOL: f64 = 1e-6;

/// Default truncation offset relative to the interval length.
pub const DEFAULT_DELTA: f64 = 1e-6;

pub fn discretize(problem: &SLProblem, param: &BoundaryParameter, n: usize, delta: Option<f64>) -> Result<DiscreteModel> {
    if n < 64 {
        return Err(SlxError::HypothesisViolated(vec![format!("need at least 64 cells, got {n}")]));
    }
    let delta = delta.unwrap_or(DEFAULT_DELTA * problem.length());
    let (lo, hi) = (problem.a + delta, problem.b - delta);
    let h = (hi - lo) / n as f64;
    let node = |i: usize| if i == n { hi } else { lo + i as f64 * h };
    let cf = &problem.coefficients;
    let k: Vec<f64> = (0..n).map(|i| (cf.p)(0.5 * (node(i) + node(i + 1))) / h).collect();
    let mass = |i: usize| if i == 0 || i == n { 0.5 * h } else { h };
    let qm: Vec<f64> = (0..=n).map(|i| (cf.q)(node(i)) * mass(i)).collect();
    let wm: Vec<f64> = (0..=n).map(|i| (cf.w)(node(i)) * mass(i)).collect();
    if k.iter().chain(&qm).chain(&wm).any(|x| !x.is_finite()) {
        return Err(SlxError::InvalidProblem(vec!["coefficients not finite on the truncated grid".into()]));
    }

    let [ua, pua, va, pva] = problem.frame_values(Endpoint::A, lo)?;
    let [ub, pub_, vb, pvb] = problem.frame_values(Endpoint::B, hi)?;
    let frame_residual = (ua * pva - pua * va - 1.0).abs().max((ub * pvb - pub_ * vb - 1.0).abs());
    if frame_residual > FRAME_TOL {
        return Err(SlxError::FrameInaccurate { residual: frame_residual });
    }
    // (Gamma0, Gamma1) in terms of (f, p f') at the truncation points:
    // Gamma0 = A0 g0 + A1 g1, Gamma1 = C0 g0 + C1 g1, g0 = (f(lo), f(hi)), g1 = (F(lo), -F(hi)).
    let d = |x: f64, y: f64| mat(r(x), r(0.0), r(0.0), r(y));
    let (a0, a1) = (d(pva, pvb), d(-va, vb));
    let (c0, c1) = (d(-pua, pub_), d(ua, ub));
    let rel = param.as_relation();
    let (e0, e1) = (-rel.b.adjoint(), rel.a.adjoint());
    let f0 = e0 * a0 + e1 * c0;
    let f1 = e0 * a1 + e1 * c1;
    let g = inv_sqrt_hpd(&(f1 * f1.adjoint() + f0 * f0.adjoint()));
    let (ah, bh) = (f1.adjoint() * g, -f0.adjoint() * g);

    let (vals, vecs) = eigh(&hermitian_part(&(ah * ah.adjoint())));
    let top = vals[1].max(0.0);
    let mut basis = Vec::new();
    let mut form = Mat2::zeros();
    let kept: Vec<usize> = (0..2).filter(|&i| vals[i] > 1e-10 * top.max(1e-300)).collect();
    for (row, &i) in kept.iter().enumerate() {
        for (col, &j) in kept.iter().enumerate() {
            // u_i* B A^+ u_j with A^+ u_j = A* u_j / s_j.
            let hj = ah.adjoint() * vecs[j] / r(vals[j]);
            form[(row, col)] = (vecs[i].adjoint() * bh * hj)[(0, 0)];
        }
        basis.push(vecs[i]);
    }
    Ok(DiscreteModel { lo, hi, n, h, k, qm, wm, basis, form: hermitian_part(&form), frame_residual })
}

impl DiscreteModel {
    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n;
        let diag = |i: usize| self.k[i - 1] + self.k[i] - self.qm[i] - sigma * self.wm[i];
        // LDL^T of the interior block; l[i] couples node i to i - 1.
        let mut dd = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut neg = 0;
        for i in 1..n {
            let mut di = diag(i);
            if i > 1 {
                l[i] = -self.k[i - 1] / dd[i - 1];
                di -= l[i] * l[i] * dd[i - 1];
            }
            if di == 0.0 {
                di = -f64::EPSILON * diag(i).abs().max(f64::MIN_POSITIVE);
            }
            if di < 0.0 {
                neg += 1;
            }
            dd[i] = di;
        }
        let r_dim = self.basis.len();
        if r_dim == 0 {
            return neg;
        }
        // Entries of the interior inverse at the two nodes next to the ends.
        let solve = |e: usize| -> (f64, f64) {
            let mut z = vec![0.0; n];
            z[e] = 1.0;
            for i in 2..n {
                z[i] -= l[i] * z[i - 1];
            }
            for i in 1..n {
                z[i] /= dd[i];
            }
            for i in (1..n - 1).rev() {
                z[i] -= l[i + 1] * z[i + 1];
            }
            (z[1], z[n - 1])
        };
        let (g11, g1n) = solve(1);
        let (_, gnn) = solve(n - 1);
        let end_diag = [self.k[0] - self.qm[0] - sigma * self.wm[0], self.k[n - 1] - self.qm[n] - sigma * self.wm[n]];
        let couple = [-self.k[0], -self.k[n - 1]];
        let mut s = Mat2::zeros();
        for i in 0..r_dim {
            for j in 0..r_dim {
                let (ui, uj) = (&self.basis[i], &self.basis[j]);
                let mut v = self.form[(i, j)];
                for e in 0..2 {
                    v += ui[e].conj() * uj[e] * end_diag[e];
                }
                let bi = [ui[0] * couple[0], ui[1] * couple[1]];
                let bj = [uj[0] * couple[0], uj[1] * couple[1]];
                let inner: C64 = bi[0].conj() * (bj[0] * g11 + bj[1] * g1n) + bi[1].conj() * (bj[0] * g1n + bj[1] * gnn);
                s[(i, j)] = v - inner;
            }
        }
        let schur_neg = if r_dim == 1 {
            (s[(0, 0)].re < 0.0) as usize
        } else {
            let (ev, _) = eigh(&hermitian_part(&s));
            ev.iter().filter(|&&x| x < 0.0).count()
        };
        neg + schur_neg
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, index: usize) -> f64 {
        // Invariant: count(lo) <= index < count(hi).
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-13 * mid.abs().max(1.0) || mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > index { hi = mid } else { lo = mid }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvalues in `[lo, hi]`, repeated by multiplicity.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let (c0, c1) = (self.count_below(lo), self.count_below(hi));
        (c0..c1).map(|i| self.bisect(lo, hi, i)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEigenvalue {
    pub lambda: f64,
    /// Width of the final bisection bracket.
    pub residual: f64,
}

/// The `k` lowest eigenvalues of the model.
pub fn oracle_spectrum(model: &DiscreteModel, k: usize) -> Result<Vec<OracleEigenvalue>> {
    let mut lo = -1.0;
    let mut guard = 0;
    while model.count_below(lo) > 0 {
        lo *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(SlxError::SolverFailure("no lower bound for the discrete spectrum".into()));
        }
    }
    let mut hi = 1.0;
    while model.count_below(hi) < k {
        hi *= 2.0;
        guard += 1;
        if guard > 400 {
            return Err(SlxError::SolverFailure(format!("fewer than {k} discrete eigenvalues")));
        }
    }
    Ok((0..k)
        .map(|i| {
            let lambda = model.bisect(lo, hi, i);
            OracleEigenvalue { lambda, residual: 1e-13 * lambda.abs().max(1.0) }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub index: usize,
    pub continuum: Option<f64>,
    pub oracle: Option<f64>,
    pub gap: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub cells: usize,
    pub h: f64,
    pub tolerance: f64,
    pub counts_match: bool,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.counts_match && self.rows.iter().all(|r| r.passed)
    }

    pub fn max_gap(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.gap).fold(0.0, f64::max)
    }
}

/// Shooting eigenvalues (repeated by multiplicity) against the model on `[lo, hi]`.
///
/// Both lists are taken on a slightly wider window so an eigenvalue sitting at
/// an edge is not counted on one side only; pairs with both members outside
/// `[lo, hi]` are dropped. Tolerance `max(1e-3, 5 h^2)`.
pub fn compare(ctx: &Context, param: &BoundaryParameter, lo: f64, hi: f64, n: usize, delta: Option<f64>) -> Result<Comparison> {
    let pad = 0.02 * (hi - lo);
    let mut cont = Vec::new();
    for e in eigenvalues(ctx, param, lo - pad, hi + pad)? {
        cont.extend(std::iter::repeat_n(e.lambda, e.multiplicity));
    }
    let model = discretize(&ctx.problem, param, n, delta)?;
    let fd = model.eigenvalues_in(lo - pad, hi + pad);
    let tolerance = 1e-3f64.max(5.0 * model.h * model.h);
    let inside = |x: Option<f64>| x.is_some_and(|x| (lo..=hi).contains(&x));
    let rows = (0..cont.len().max(fd.len()))
        .map(|i| (cont.get(i).copied(), fd.get(i).copied()))
        .filter(|&(a, b)| inside(a) || inside(b))
        .enumerate()
        .map(|(index, (continuum, oracle))| {
            let gap = continuum.zip(oracle).map(|(a, b)| (a - b).abs());
            ComparisonRow { index, continuum, oracle, gap, passed: gap.is_some_and(|g| g <= tolerance) }
        })
        .collect();
    Ok(Comparison { cells: n, h: model.h, tolerance, counts_match: cont.len() == fd.len(), rows })
}
