use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, Error)]
pub enum SlxError {
    #[error("sign changes accumulate near the endpoint; oscillation cannot be excluded")]
    NonOscillationUndetermined,
    #[error("endpoint quadrature neither converged nor diverged at the configured depth")]
    QuadratureInconclusive,
    #[error("principal solution vanishes at x = {x}")]
    PrincipalVanishes { x: f64 },
    #[error("invalid problem: {}", .0.join("; "))]
    InvalidProblem(Vec<String>),
    #[error("derivative unavailable at x = {x}")]
    DerivativeUnavailable { x: f64 },
    #[error("integration diverged: {0}")]
    IntegrationDiverged(String),
    #[error("Wronskian drift {drift:.3e} exceeds tolerance")]
    WronskianDrift { drift: f64 },
    #[error("pole at lambda = {lambda} (kernel dimension {nullity})")]
    AtPole { lambda: f64, nullity: usize },
    #[error("pair (A, B) is not admissible: residual {residual:.3e}")]
    InadmissiblePair { residual: f64 },
    #[error("grid too coarse near lambda = {lambda}")]
    GridTooCoarse { lambda: f64 },
    #[error(
        "lambda = {lambda} lies in both distinguished spectra (|u10*u21 - 1| = {certificate:.3e}); direct boundary nullity {direct_nullity}"
    )]
    UncoveredPoint { lambda: f64, certificate: f64, direct_nullity: usize },
    #[error("lambda = {lambda} lies outside the resolvent set required here")]
    OutsideResolventUnion { lambda: f64 },
    #[error("lambda = {lambda} is not an eigenvalue")]
    NotAnEigenvalue { lambda: f64 },
    #[error("zeta and eta must be nonzero")]
    ZeroParameter,
    #[error("hypothesis violated: {}", .0.join(", "))]
    HypothesisViolated(Vec<String>),
    #[error("no disjoint partner found; tried t = {0:?}")]
    SearchExhausted(Vec<f64>),
    #[error("residue methods disagree by {gap:.3e} (allowed {allowed:.3e})")]
    ResidueMismatch { gap: f64, allowed: f64 },
    #[error("frame residual {residual:.3e} too large at the truncated endpoint")]
    FrameInaccurate { residual: f64 },
    #[error("eigensolver failure: {0}")]
    SolverFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SlxError>;
