//! Command-line front end behind the `slx` binary.
//!
//! Exit codes: 2 for usage errors (bad flags, parameters, problem files),
//! 1 for a failed computation or a failed `suite` check, 0 otherwise.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{Value, json};

use crate::context::{Context, SpectralTolerances};
use crate::error::{Result, SlxError};
use crate::linalg::{C64, Mat2, c, hermitian_part, inverse, mat};
use crate::lines::{LineFamily, TCase, t_roots};
use crate::odecore::IntegratorConfig;
use crate::oracle;
use crate::problem::{self, SLProblem, catalog, classify::ClassifyConfig};
use crate::report::{csv_num as num, envelope, mat_json};
use crate::specrep::{point_mass_l0, point_mass_theta};
use crate::spectra::{BoundaryParameter, CoupledBC, Distinguished, Relation, eigenvalues};
use crate::suite::{self, SuiteConfig};
use crate::weyl;

#[derive(Parser, Debug)]
#[command(name = "slx", version, about = "Spectra of Sturm-Liouville operators with two limit-circle endpoints")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify both endpoints and validate the frames.
    Classify(ClassifyArgs),
    /// Eigenvalues of one self-adjoint extension.
    Spectrum(SpectrumArgs),
    /// Weyl functions at a point or over a grid.
    Mfunction(MfunctionArgs),
    /// Eigenvalue curves of a line family `vartheta~ + t vartheta`.
    LineScan(LineScanArgs),
    /// Point masses of the spectral measure at each eigenvalue.
    Weights(WeightsArgs),
    /// Compare eigenvalues with the finite-difference model.
    OracleCheck(OracleArgs),
    /// Run the reproducibility battery.
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// Problem file (JSON) or built-in name: free, legendre, bessel:<nu>.
    #[arg(long)]
    pub problem: String,
    /// Root accuracy relative to max(1, |lambda|).
    #[arg(long)]
    pub tol_root: Option<f64>,
    /// Scan lattice density (points per unit of lambda).
    #[arg(long)]
    pub cells_per_unit: Option<f64>,
    /// Relative tolerance of the ODE integrator.
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    M0,
    Minf,
    Param,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// matrix:..., vartheta:..., relation:...;..., coupled:alpha;..., L0 or Linf.
    #[arg(long, allow_hyphen_values = true)]
    pub param: String,
    /// lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
}

#[derive(Args, Debug)]
pub struct MfunctionArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value = "m0")]
    pub which: Which,
    /// Boundary parameter for `--which param`.
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<String>,
    /// A single point `re[,im]`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    pub lambda: Option<String>,
    /// Real grid `lo:hi`, shifted by `--imag`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: Option<(f64, f64)>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub imag: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
}

#[derive(Args, Debug)]
pub struct LineScanArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Four entries, row-major.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_tilde: String,
    /// Four entries, row-major.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    /// lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub lambda: (f64, f64),
    /// Keep only roots in lo:hi.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub t: Option<(f64, f64)>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Same forms as for `spectrum`.
    #[arg(long, allow_hyphen_values = true)]
    pub param: String,
    /// lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Same forms as for `spectrum`.
    #[arg(long, allow_hyphen_values = true)]
    pub param: String,
    /// lo:hi
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
    /// Number of cells.
    #[arg(short = 'N', default_value_t = 2000)]
    pub cells: usize,
    /// Truncation offset; default 1e-6 times the interval length.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Print JSON instead of the table.
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Problem for the problem-independent checks (default: free).
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Run only these criteria (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
}

/// Failure split by exit code.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<SlxError> for Failure {
    fn from(e: SlxError) -> Self {
        Failure::Run(e.to_string())
    }
}

fn usage(e: SlxError) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `lo:hi` with finite `lo < hi`.
pub fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite lo < hi, got {s:?}"));
    }
    Ok((lo, hi))
}

/// A complex number: `1.5`, `-2i`, `1+2i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t = s.trim();
    t.parse::<C64>().ok().filter(|z| z.is_finite()).ok_or_else(|| SlxError::Parse(format!("bad number {t:?}")))
}

fn parse_reals<const K: usize>(s: &str) -> Result<[f64; K]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != K {
        return Err(SlxError::Parse(format!("expected {K} comma-separated numbers, got {s:?}")));
    }
    let mut out = [0.0; K];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().ok().filter(|x: &f64| x.is_finite()).ok_or_else(|| SlxError::Parse(format!("bad number {p:?}")))?;
    }
    Ok(out)
}

/// Four comma-separated entries, row-major.
pub fn parse_matrix(s: &str) -> Result<Mat2> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(SlxError::Parse(format!("a matrix needs 4 entries, got {s:?}")));
    }
    let z: Vec<C64> = parts.iter().map(|p| parse_complex(p)).collect::<Result<_>>()?;
    Ok(mat(z[0], z[1], z[2], z[3]))
}

/// Boundary parameter from its command-line form.
///
/// * `matrix:t11,t12,t21,t22`: `Gamma1 = theta Gamma0`
/// * `vartheta:...`: `-Gamma0 = vartheta Gamma1`
/// * `relation:a11,a12,a21,a22;b11,b12,b21,b22`: `{(A h, B h)}`
/// * `coupled:alpha;r11,r12,r21,r22`
/// * `L0`, `Linf`
pub fn parse_parameter(s: &str) -> Result<BoundaryParameter> {
    let s = s.trim();
    match s {
        "L0" | "l0" => return Ok(BoundaryParameter::l0()),
        "Linf" | "linf" => return Ok(BoundaryParameter::linf()),
        _ => {}
    }
    let (kind, body) = s.split_once(':').ok_or_else(|| SlxError::Parse(format!("unknown parameter {s:?}")))?;
    match kind {
        "matrix" => BoundaryParameter::matrix(parse_matrix(body)?),
        "vartheta" => BoundaryParameter::vartheta(parse_matrix(body)?),
        "relation" => {
            let (a, b) = body.split_once(';').ok_or_else(|| SlxError::Parse("relation needs A;B".into()))?;
            Ok(BoundaryParameter::relation(Relation::normalized(parse_matrix(a)?, parse_matrix(b)?)?))
        }
        "coupled" => {
            let (alpha, rr) = body.split_once(';').ok_or_else(|| SlxError::Parse("coupled needs alpha;R".into()))?;
            let [alpha] = parse_reals::<1>(alpha)?;
            let [r11, r12, r21, r22] = parse_reals::<4>(rr)?;
            BoundaryParameter::coupled(&CoupledBC::new(alpha, [[r11, r12], [r21, r22]])?)
        }
        _ => Err(SlxError::Parse(format!("unknown parameter kind {kind:?}"))),
    }
}

/// A problem file path or a built-in name.
pub fn load_problem(spec: &str) -> Result<SLProblem> {
    let path = Path::new(spec);
    if path.exists() {
        return problem::file::load(path);
    }
    catalog::by_name(spec).ok_or_else(|| SlxError::Parse(format!("{spec:?} is neither a file nor a built-in problem")))
}

fn context(args: &ProblemArgs) -> std::result::Result<Context, Failure> {
    let problem = load_problem(&args.problem).map_err(usage)?;
    let mut integrator = IntegratorConfig::default();
    let mut tol = SpectralTolerances::default();
    if let Some(x) = args.rel_tol {
        integrator.rel_tol = x;
    }
    if let Some(x) = args.tol_root {
        tol.tol_root = x;
    }
    if let Some(x) = args.cells_per_unit {
        tol.cells_per_unit = x;
    }
    let positive = [args.rel_tol, args.tol_root, args.cells_per_unit].into_iter().flatten().all(|x| x > 0.0 && x.is_finite());
    if !positive {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    Ok(Context::with_config(problem, integrator, tol))
}

fn param_arg(s: &str) -> std::result::Result<BoundaryParameter, Failure> {
    parse_parameter(s).map_err(usage)
}

fn describe(param: &BoundaryParameter) -> Value {
    match param {
        BoundaryParameter::Matrix(t) => json!({"kind": "matrix", "theta": mat_json(t)}),
        BoundaryParameter::Relation(r) => json!({"kind": "relation", "A": mat_json(&r.a), "B": mat_json(&r.b), "mul_dim": r.mul_dim}),
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let n = steps.max(2);
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn json_text(command: &str, result: Value) -> String {
    let mut s = serde_json::to_string_pretty(&envelope(command, result)).expect("serializable");
    s.push('\n');
    s
}


fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn classify(a: &ClassifyArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let p = &ctx.problem;
    let report = problem::validation_report(p, &ClassifyConfig::default());
    let result = json!({
        "problem": p.name,
        "interval": [p.a, p.b],
        "lambda0": p.lambda0(),
        "K": p.lower_bound,
        "valid": report.passed(),
        "report": report,
    });
    Ok(json_text("classify", result))
}

fn spectrum(a: &SpectrumArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let param = param_arg(&a.param)?;
    let (lo, hi) = a.range;
    let ev = eigenvalues(&ctx, &param, lo, hi)?;
    Ok(match a.out {
        Format::Json => json_text(
            "spectrum",
            json!({"problem": ctx.problem.name, "parameter": describe(&param), "range": [lo, hi], "eigenvalues": ev}),
        ),
        Format::Csv => {
            let mut s = String::from("lambda,multiplicity,degenerate,residual,via\n");
            for e in &ev {
                let _ = writeln!(s, "{},{},{},{},{}", num(e.lambda), e.multiplicity, e.degenerate, num(e.residual), e.via.label());
            }
            s
        }
    })
}

fn mfunction(a: &MfunctionArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let param = match (a.which, &a.param) {
        (Which::Param, Some(p)) => Some(param_arg(p)?),
        (Which::Param, None) => return Err(Failure::Usage("--which param needs --param".into())),
        (_, Some(_)) => return Err(Failure::Usage("--param only applies to --which param".into())),
        (_, None) => None,
    };
    let points: Vec<C64> = match (&a.lambda, a.range) {
        (Some(l), _) => {
            let v: Vec<&str> = l.split(',').collect();
            let re = parse_reals::<1>(v[0]).map_err(usage)?[0];
            let im = match v.len() {
                1 => 0.0,
                2 => parse_reals::<1>(v[1]).map_err(usage)?[0],
                _ => return Err(Failure::Usage(format!("--lambda expects re[,im], got {l:?}"))),
            };
            vec![c(re, im)]
        }
        (None, Some((lo, hi))) => grid(lo, hi, a.steps).into_iter().map(|x| c(x, a.imag)).collect(),
        (None, None) => return Err(Failure::Usage("give --lambda or --range".into())),
    };
    let eval = |z: C64| -> Result<Mat2> {
        Ok(match (&a.which, &param) {
            (Which::M0, _) => weyl::m0(&ctx, z)?.matrix,
            (Which::Minf, _) => weyl::m_inf(&ctx, z)?.matrix,
            (_, Some(BoundaryParameter::Matrix(t))) => weyl::m_theta(&ctx, t, z)?.matrix,
            (_, Some(BoundaryParameter::Relation(r))) => weyl::m_relation(&ctx, r, z)?.matrix,
            (Which::Param, None) => unreachable!(),
        })
    };
    let values: Vec<Result<Mat2>> = points.par_iter().map(|&z| eval(z)).collect();
    let which = match a.which {
        Which::M0 => "m0",
        Which::Minf => "minf",
        Which::Param => "param",
    };
    Ok(match a.out {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .zip(&values)
                .map(|(z, v)| match v {
                    Ok(m) => json!({"lambda": [z.re, z.im], "matrix": mat_json(m)}),
                    Err(e) => json!({"lambda": [z.re, z.im], "matrix": null, "error": e.to_string()}),
                })
                .collect();
            let mut result = json!({"problem": ctx.problem.name, "which": which, "values": rows});
            if let Some(p) = &param {
                result["parameter"] = describe(p);
            }
            json_text("mfunction", result)
        }
        Format::Csv => {
            let mut s = String::from("lambda_re,lambda_im,m11_re,m11_im,m12_re,m12_im,m21_re,m21_im,m22_re,m22_im\n");
            for (z, v) in points.iter().zip(&values) {
                let _ = write!(s, "{},{}", num(z.re), num(z.im));
                match v {
                    Ok(m) => (0..4).for_each(|k| {
                        let e = m[(k / 2, k % 2)];
                        let _ = write!(s, ",{},{}", num(e.re), num(e.im));
                    }),
                    Err(_) => s.push_str(",NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN"),
                }
                s.push('\n');
            }
            s
        }
    })
}

fn case_label(case: TCase, all_t: bool) -> &'static str {
    match case {
        TCase::Quadratic => "quadratic",
        TCase::Linear => "linear",
        TCase::AllOrNone if all_t => "all",
        TCase::AllOrNone => "none",
    }
}

fn line_scan(a: &LineScanArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let family = LineFamily::new(parse_matrix(&a.theta_tilde).map_err(usage)?, parse_matrix(&a.theta).map_err(usage)?).map_err(usage)?;
    let (lo, hi) = a.lambda;
    let keep = |t: &f64| a.t.is_none_or(|(tl, th)| (tl..=th).contains(t));
    let rows: Vec<(f64, Vec<f64>, &str, Option<f64>)> = grid(lo, hi, a.steps)
        .par_iter()
        .map(|&l| match t_roots(&ctx, &family, l) {
            Ok(sol) => (l, sol.roots.iter().copied().filter(keep).collect(), case_label(sol.case, sol.all_t), sol.double_t.filter(keep)),
            Err(_) => (l, vec![], "minf-pole", None),
        })
        .collect();
    Ok(match a.out {
        Format::Json => {
            let rows: Vec<Value> =
                rows.iter().map(|(l, t, case, d)| json!({"lambda": l, "t_roots": t, "case": case, "double_t": d})).collect();
            json_text(
                "line-scan",
                json!({"problem": ctx.problem.name, "theta_tilde": mat_json(&family.theta_tilde), "theta": mat_json(&family.theta), "rows": rows}),
            )
        }
        Format::Csv => {
            let mut s = String::from("lambda,t_root_1,t_root_2,case,double_t\n");
            for (l, t, case, d) in &rows {
                let _ = writeln!(s, "{},{},{},{case},{}", num(*l), opt(t.first().copied()), opt(t.get(1).copied()), opt(*d));
            }
            s
        }
    })
}

/// `vartheta = -A B^-1` for `{(A h, B h)}`, when `B` is invertible.
fn second_triple(param: &BoundaryParameter) -> Option<Mat2> {
    let rel = param.as_relation();
    inverse(&rel.b).map(|(binv, _)| hermitian_part(&(-rel.a * binv)))
}

fn weights(a: &WeightsArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let param = param_arg(&a.param)?;
    let (lo, hi) = a.range;
    let is_l0 = param.distinguished() == Some(Distinguished::L0);
    let vartheta = second_triple(&param);
    if !is_l0 && vartheta.is_none() {
        return Err(Failure::Usage("weights need a parameter of the form -Gamma0 = vartheta Gamma1 (B invertible)".into()));
    }
    let ev = eigenvalues(&ctx, &param, lo, hi)?;
    let masses: Vec<_> = ev
        .par_iter()
        .map(|e| match vartheta {
            Some(vt) if !is_l0 => point_mass_theta(&ctx, &vt, e.lambda),
            _ => point_mass_l0(&ctx, e.lambda),
        })
        .collect();
    Ok(match a.out {
        Format::Json => {
            let rows: Vec<Value> = ev
                .iter()
                .zip(&masses)
                .map(|(e, m)| match m {
                    Ok(pm) => json!({
                        "lambda": e.lambda,
                        "multiplicity": e.multiplicity,
                        "weight": mat_json(&pm.weight),
                        "rank": pm.rank,
                        "trace": pm.trace,
                        "method": pm.method,
                        "error": pm.error_estimate,
                        "cross_check": pm.cross_check,
                    }),
                    Err(err) => json!({"lambda": e.lambda, "multiplicity": e.multiplicity, "error_message": err.to_string()}),
                })
                .collect();
            let mut result = json!({"problem": ctx.problem.name, "parameter": describe(&param), "range": [lo, hi], "weights": rows});
            if let Some(vt) = vartheta {
                result["vartheta"] = mat_json(&vt);
            }
            json_text("weights", result)
        }
        Format::Csv => {
            let mut s = String::from("lambda,rank,trace,method,error,w11_re,w11_im,w12_re,w12_im,w21_re,w21_im,w22_re,w22_im\n");
            for (e, m) in ev.iter().zip(&masses) {
                match m {
                    Ok(pm) => {
                        let method = serde_json::to_value(pm.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                        let _ = write!(s, "{},{},{},{},{}", num(e.lambda), pm.rank, num(pm.trace), method, num(pm.error_estimate));
                        for k in 0..4 {
                            let w = pm.weight[(k / 2, k % 2)];
                            let _ = write!(s, ",{},{}", num(w.re), num(w.im));
                        }
                    }
                    Err(_) => {
                        let _ = write!(s, "{},,,failed,,,,,,,,,", num(e.lambda));
                    }
                }
                s.push('\n');
            }
            s
        }
    })
}

fn oracle_check(a: &OracleArgs) -> std::result::Result<String, Failure> {
    let ctx = context(&a.problem)?;
    let param = param_arg(&a.param)?;
    let (lo, hi) = a.range;
    let cmp = oracle::compare(&ctx, &param, lo, hi, a.cells, a.delta)?;
    if a.out == Some(Format::Json) {
        return Ok(json_text("oracle-check", json!({"problem": ctx.problem.name, "parameter": describe(&param), "passed": cmp.passed(), "comparison": cmp})));
    }
    if a.out == Some(Format::Csv) {
        return Err(Failure::Usage("oracle-check prints a table or JSON".into()));
    }
    let mut s = format!("cells {}  h {:.3e}  tolerance {:.1e}\n", cmp.cells, cmp.h, cmp.tolerance);
    let _ = writeln!(s, "{:>4}  {:>20}  {:>20}  {:>10}  result", "#", "shooting", "finite differences", "gap");
    let cell = |x: Option<f64>| x.map(|v| format!("{v:.12}")).unwrap_or_else(|| "-".into());
    for row in &cmp.rows {
        let gap = row.gap.map(|g| format!("{g:.2e}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:>4}  {:>20}  {:>20}  {:>10}  {}", row.index, cell(row.continuum), cell(row.oracle), gap, if row.passed { "PASS" } else { "FAIL" });
    }
    if !cmp.counts_match {
        s.push_str("eigenvalue counts differ\n");
    }
    let _ = writeln!(s, "{}", if cmp.passed() { "PASS" } else { "FAIL" });
    Ok(s)
}

fn run_suite(a: &SuiteArgs, out: &mut dyn Write) -> std::result::Result<bool, Failure> {
    let problem = a.problem.as_deref().map(load_problem).transpose().map_err(usage)?;
    if let Some(bad) = a.only.iter().find(|&&id| !(1..=12).contains(&id)) {
        return Err(Failure::Usage(format!("no criterion {bad}")));
    }
    let cfg = SuiteConfig { seed: a.seed, problem };
    let ids: Vec<u32> = if a.only.is_empty() { (1..=12).collect() } else { a.only.clone() };
    let mut results = Vec::new();
    for id in ids {
        let r = suite::run_criterion(id, &cfg);
        let _ = writeln!(out, "{} {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title, r.detail);
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    let _ = writeln!(out, "{} of {} criteria passed", results.iter().filter(|r| r.passed).count(), results.len());
    if let Some(path) = &a.report {
        let name = cfg.problem.as_ref().map_or("free", |p| p.name.as_str());
        let text = json_text("suite", json!({"seed": a.seed, "problem": name, "passed": passed, "criteria": results}));
        std::fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?;
    }
    Ok(passed)
}

/// Runs one command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Mfunction(a) => mfunction(a),
        Command::LineScan(a) => line_scan(a),
        Command::Weights(a) => weights(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Suite(a) => {
            return match run_suite(a, out) {
                Ok(true) => 0,
                Ok(false) => 1,
                Err(f) => report_failure(f, err),
            };
        }
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => report_failure(f, err),
    }
}

fn report_failure(f: Failure, err: &mut dyn Write) -> i32 {
    match f {
        Failure::Usage(m) => {
            let _ = writeln!(err, "slx: {m}");
            2
        }
        Failure::Run(m) => {
            let _ = writeln!(err, "slx: {m}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::r;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1:20"), Ok((-1.0, 20.0)));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("0:inf").is_err());
        assert!(parse_range("5").is_err());
    }

    #[test]
    fn parameters() {
        let p = parse_parameter("matrix:1,2+1i,2-1i,0").unwrap();
        match p {
            BoundaryParameter::Matrix(t) => assert_eq!(t[(0, 1)], c(2.0, 1.0)),
            _ => panic!(),
        }
        assert!(parse_parameter("matrix:1,2i,2i,0").is_err());
        assert_eq!(parse_parameter("L0").unwrap().distinguished(), Some(Distinguished::L0));
        assert_eq!(parse_parameter("matrix:0,0,0,0").unwrap().distinguished(), Some(Distinguished::Linf));
        let per = parse_parameter("coupled:0;1,0,0,1").unwrap();
        assert_eq!(per.as_relation().mul_dim, 1);
        assert!(parse_parameter("coupled:0;2,0,0,1").is_err());
        let rel = parse_parameter("relation:0,0,0,0;1,0,0,1").unwrap();
        assert_eq!(rel.distinguished(), Some(Distinguished::L0));
        assert!(parse_parameter("banana:1").is_err());
    }

    #[test]
    fn second_triple_of_matrix() {
        let p = parse_parameter("matrix:2,0,0,4").unwrap();
        let vt = second_triple(&p).unwrap();
        assert!((vt[(0, 0)] - r(-0.5)).norm() < 1e-12 && (vt[(1, 1)] - r(-0.25)).norm() < 1e-12);
        assert!(second_triple(&BoundaryParameter::linf()).is_none());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["slx", "spectrum", "--problem", "free"], &mut o, &mut e), 2);
        assert_eq!(run(["slx", "spectrum", "--problem", "nowhere.json", "--param", "L0", "--range", "0:1"], &mut o, &mut e), 2);
        assert_eq!(run(["slx", "--help"], &mut o, &mut e), 0);
    }
}
