//! Zeros of a real characteristic function on a fixed lattice.

use crate::context::Context;
use crate::error::Result;
use crate::odecore::BoundaryData;
use crate::roots::brent;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Root {
    pub lambda: f64,
    /// 1 for a sign change, 2 for a touching zero.
    pub order: usize,
}

/// Finds the zeros of `f` in `[lo, hi]`.
///
/// The lattice is `k / cells_per_unit` for integer `k`, independent of the
/// interval, so repeated scans share cached boundary data.
pub(crate) fn scan<F>(ctx: &Context, lo: f64, hi: f64, f: F) -> Result<Vec<Root>>
where
    F: Fn(&BoundaryData) -> (f64, f64) + Sync,
{
    let cpu = ctx.tol.cells_per_unit;
    let k0 = (lo * cpu).floor() as i64 - 1;
    let k1 = (hi * cpu).ceil() as i64 + 1;
    let grid: Vec<f64> = (k0..=k1).map(|k| k as f64 / cpu).collect();
    let data = ctx.boundary_many(&grid)?;
    let vals: Vec<(f64, f64)> = data.iter().map(&f).collect();

    let eval = |l: f64| -> Result<(f64, f64)> { Ok(f(&ctx.boundary_real(l)?)) };
    let value = |l: f64| -> Result<f64> { Ok(eval(l)?.0) };
    let slope = |l: f64| -> Result<f64> {
        let h = 1e-4 * l.abs().max(1.0);
        Ok((value(l + h)? - value(l - h)?) / (2.0 * h))
    };

    let mut roots = Vec::new();
    let n = grid.len();
    for i in 0..n {
        let (v, _) = vals[i];
        if v == 0.0 {
            let touching = i > 0 && i + 1 < n && vals[i - 1].0 * vals[i + 1].0 > 0.0;
            roots.push(Root { lambda: grid[i], order: if touching { 2 } else { 1 } });
            continue;
        }
        if i + 1 < n && v * vals[i + 1].0 < 0.0 {
            let tol = ctx.tol.root_tol(grid[i]);
            let x = brent(value, grid[i], grid[i + 1], v, vals[i + 1].0, tol)?;
            roots.push(Root { lambda: x, order: 1 });
        }
        // Local minimum of |f| without a sign change: two close zeros or a double zero.
        if i == 0 || i + 1 >= n {
            continue;
        }
        let (vl, vr) = (vals[i - 1].0, vals[i + 1].0);
        if !(vl * v > 0.0 && v * vr > 0.0 && v.abs() < vl.abs() && v.abs() <= vr.abs()) {
            continue;
        }
        let (gl, gr) = (slope(grid[i - 1])?, slope(grid[i + 1])?);
        if gl * gr >= 0.0 {
            continue;
        }
        let tol = ctx.tol.root_tol(grid[i]);
        let xm = brent(slope, grid[i - 1], grid[i + 1], gl, gr, tol)?;
        let (fm, scale) = eval(xm)?;
        if fm == 0.0 || fm * v < 0.0 {
            if fm == 0.0 {
                roots.push(Root { lambda: xm, order: 2 });
            } else {
                roots.push(Root { lambda: brent(value, grid[i - 1], xm, vl, fm, tol)?, order: 1 });
                roots.push(Root { lambda: brent(value, xm, grid[i + 1], fm, vr, tol)?, order: 1 });
            }
        } else if fm.abs() < ctx.tol.double_root_rel * scale {
            roots.push(Root { lambda: xm, order: 2 });
        }
    }

    roots.retain(|r| r.lambda >= lo - ctx.tol.root_tol(lo) && r.lambda <= hi + ctx.tol.root_tol(hi));
    roots.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.lambda - last.lambda).abs() <= 2.0 * ctx.tol.root_tol(r.lambda) => {
                last.order = last.order.max(r.order);
            }
            _ => out.push(r),
        }
    }
    // A double zero perturbed by rounding shows up as two simple zeros about
    // sqrt(noise) apart; merge them when f between them is at noise level.
    let mut merged: Vec<Root> = Vec::with_capacity(out.len());
    for r in out {
        if let Some(last) = merged.last_mut() {
            if r.lambda - last.lambda <= CLUSTER_REL * r.lambda.abs().max(1.0) {
                let mid = 0.5 * (last.lambda + r.lambda);
                let (fm, scale) = eval(mid)?;
                if fm.abs() < ctx.tol.double_root_rel * scale {
                    *last = Root { lambda: mid, order: 2 };
                    continue;
                }
            }
        }
        merged.push(r);
    }
    Ok(merged)
}

/// Separation below which two simple zeros are tested as one double zero.
const CLUSTER_REL: f64 = 1e-6;
