//! A problem bundled with its numerical settings and a cache of boundary data.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::{C64, r};
use crate::odecore::{BoundaryData, IntegratorConfig, fundamental_at_b};
use crate::problem::SLProblem;

#[derive(Clone, Debug)]
pub struct SpectralTolerances {
    /// Root accuracy, scaled by `max(1, |lambda|)`.
    pub tol_root: f64,
    /// Singular values below `nullity_rel * (s_max + 1)` count as zero.
    pub nullity_rel: f64,
    /// Relative size below which a boundary value counts as a zero (a pole of `M`).
    pub pole_guard: f64,
    /// Scan lattice density.
    pub cells_per_unit: f64,
    /// `det(vartheta) = 0` threshold, relative to `|vartheta|^2`.
    pub tol_det: f64,
    /// Acceptance level for a double root without sign change, relative to the term scale.
    pub double_root_rel: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        Self { tol_root: 1e-11, nullity_rel: 1e-7, pole_guard: 1e-10, cells_per_unit: 400.0, tol_det: 1e-10, double_root_rel: 1e-8 }
    }
}

impl SpectralTolerances {
    pub fn root_tol(&self, lambda: f64) -> f64 {
        self.tol_root * lambda.abs().max(1.0)
    }
}

pub struct Context {
    pub problem: SLProblem,
    pub integrator: IntegratorConfig,
    pub tol: SpectralTolerances,
    cache: Mutex<HashMap<(u64, u64), BoundaryData>>,
}

const CACHE_LIMIT: usize = 2_000_000;

impl Context {
    pub fn new(problem: SLProblem) -> Self {
        Self::with_config(problem, IntegratorConfig::default(), SpectralTolerances::default())
    }

    pub fn with_config(problem: SLProblem, integrator: IntegratorConfig, tol: SpectralTolerances) -> Self {
        Self { problem, integrator, tol, cache: Mutex::new(HashMap::new()) }
    }

    /// Boundary data at a complex spectral parameter (cached).
    pub fn boundary(&self, lambda: C64) -> Result<BoundaryData> {
        let key = (lambda.re.to_bits(), lambda.im.to_bits());
        if let Some(bd) = self.cache.lock().unwrap().get(&key) {
            return Ok(*bd);
        }
        let bd = fundamental_at_b(&self.problem, lambda, &self.integrator)?;
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, bd);
        Ok(bd)
    }

    pub fn boundary_real(&self, lambda: f64) -> Result<BoundaryData> {
        self.boundary(r(lambda))
    }

    /// Evaluates many real points in parallel; results in input order.
    pub fn boundary_many(&self, lambdas: &[f64]) -> Result<Vec<BoundaryData>> {
        lambdas.par_iter().map(|&l| self.boundary_real(l)).collect()
    }

    /// Relative size test used for poles of the Weyl functions.
    pub fn vanishes(&self, value: C64, bd: &BoundaryData) -> bool {
        value.norm() <= self.tol.pole_guard * bd.scale()
    }
}
