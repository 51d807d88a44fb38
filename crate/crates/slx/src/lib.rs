//! Spectral theory of semi-bounded Sturm-Liouville operators with two limit-circle endpoints.
//!
//! A [`problem::SLProblem`] carries the coefficients and a principal/non-principal
//! frame at each endpoint. From these, [`odecore`] computes the boundary data
//! `(u10, u11, u20, u21)` of the fundamental system at `b`; everything else
//! (Weyl functions, eigenvalues, line families, point masses) is algebra on
//! those four numbers as functions of `lambda`.

pub mod cli;
pub mod context;
pub mod error;
pub mod linalg;
pub mod lines;
pub mod ode;
pub mod odecore;
pub mod oracle;
pub mod problem;
pub mod report;
pub mod roots;
pub mod specrep;
pub mod spectra;
pub mod suite;
pub mod weyl;

pub use context::{Context, SpectralTolerances};
pub use error::{Result, SlxError};

/// Caps the global thread pool at `SLX_THREADS` when set. Call once, early.
pub fn configure_threads() {
    if let Some(n) = std::env::var("SLX_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
