//! Problem definition files (JSON).
//!
//! ```json
//! {
//!   "name": "legendre",
//!   "interval": [-1, 1],
//!   "coefficients": {"p": "1 - x^2", "q": "0", "w": "1"},
//!   "lambda0": 0,
//!   "frames": {"a": {"u": "1", "v": "atanh(x)"}, "b": {"u": "1", "nonprincipal": {"alpha": 0, "beta": 0}}},
//!   "K": 0
//! }
//! ```
//!
//! `coefficients` may instead name a built-in (`"free"`, `"legendre"`,
//! `"bessel:0.3"`), in which case `frames` is `"auto-builtin"` or omitted.
//! Interval bounds accept `"inf"` / `"-inf"`. An optional
//! `"change_of_variable": {"x": "tan(t)", "t_interval": [0, 1.5707963267948966]}`
//! rewrites the problem in the variable `t`.

use std::path::Path;
use std::sync::Arc;

use exmex::prelude::*;
use serde::Deserialize;

use super::{Coefficients, EndpointFrame, RealFn, SLProblem, SolutionFn, catalog, func, make_nonprincipal};
use crate::error::{Result, SlxError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub interval: Option<[Bound; 2]>,
    pub coefficients: CoeffSpec,
    pub lambda0: Option<f64>,
    pub frames: Option<FramesSpec>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub change_of_variable: Option<ChangeSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Text(String),
}

impl Bound {
    fn value(&self) -> Result<f64> {
        match self {
            Bound::Num(v) => Ok(*v),
            Bound::Text(s) => match s.trim() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => other.parse().map_err(|_| SlxError::Parse(format!("bad bound {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Builtin(String),
    Exprs { p: String, q: String, w: String },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FramesSpec {
    Builtin(String),
    Explicit { a: FrameSpec, b: FrameSpec },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub u: String,
    pub v: Option<String>,
    pub nonprincipal: Option<NonprincipalSpec>,
}

#[derive(Debug, Deserialize)]
pub struct NonprincipalSpec {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Deserialize)]
pub struct ChangeSpec {
    pub x: String,
    pub t_interval: [f64; 2],
}

/// A compiled one-variable expression and its derivative.
fn compile(src: &str, var: &str) -> Result<(RealFn, RealFn)> {
    let ex = exmex::parse::<f64>(src).map_err(|e| SlxError::Parse(format!("{src:?}: {e}")))?;
    let names: Vec<String> = ex.var_names().to_vec();
    match names.len() {
        0 => {
            let v = ex.eval(&[]).map_err(|e| SlxError::Parse(e.to_string()))?;
            Ok((func(move |_| v), func(|_| 0.0)))
        }
        1 if names[0] == var => {
            let d = ex.clone().partial(0).map_err(|e| SlxError::Parse(format!("{src:?}: {e}")))?;
            let ex = Arc::new(ex);
            let d = Arc::new(d);
            Ok((
                func(move |x| ex.eval(&[x]).unwrap_or(f64::NAN)),
                func(move |x| d.eval(&[x]).unwrap_or(f64::NAN)),
            ))
        }
        _ => Err(SlxError::Parse(format!("{src:?}: only the variable {var} is allowed, found {names:?}"))),
    }
}

pub fn load(path: &Path) -> Result<SLProblem> {
    let text = std::fs::read_to_string(path).map_err(|e| SlxError::Parse(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<SLProblem> {
    let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| SlxError::Parse(e.to_string()))?;
    build(&spec)
}

pub fn build(spec: &ProblemSpec) -> Result<SLProblem> {
    let (p, q, w, interval) = match &spec.coefficients {
        CoeffSpec::Builtin(name) => {
            let mut pr = catalog::by_name(name).ok_or_else(|| SlxError::Parse(format!("unknown built-in {name:?}")))?;
            if !matches!(&spec.frames, None | Some(FramesSpec::Builtin(_))) {
                return Err(SlxError::Parse("built-in coefficients use built-in frames".into()));
            }
            if let Some(n) = &spec.name {
                pr.name = n.clone();
            }
            if let Some(k) = spec.k {
                pr.lower_bound = k;
            }
            if spec.lambda0.is_some_and(|l| l != 0.0) || spec.change_of_variable.is_some() {
                return Err(SlxError::Parse("built-in problems fix lambda0 = 0 and take no change of variable".into()));
            }
            return Ok(pr);
        }
        CoeffSpec::Exprs { p, q, w } => {
            let interval = spec.interval.as_ref().ok_or_else(|| SlxError::Parse("interval required".into()))?;
            (compile(p, "x")?, compile(q, "x")?.0, compile(w, "x")?.0, [interval[0].value()?, interval[1].value()?])
        }
    };
    let lambda0 = spec.lambda0.unwrap_or(0.0);
    let (p, _) = p;

    // Optional change of variable x = phi(t).
    let (phi, dphi, a, b) = match &spec.change_of_variable {
        Some(ch) => {
            let (phi, dphi) = compile(&ch.x, "t")?;
            (Some(phi), Some(dphi), ch.t_interval[0], ch.t_interval[1])
        }
        None => (None, None, interval[0], interval[1]),
    };
    let compose = |f: &RealFn| -> RealFn {
        match &phi {
            Some(phi) => {
                let (f, phi) = (f.clone(), phi.clone());
                func(move |t| f(phi(t)))
            }
            None => f.clone(),
        }
    };
    let coefficients = match (&phi, &dphi) {
        (Some(phi), Some(dphi)) => {
            let (pp, ph, dp) = (p.clone(), phi.clone(), dphi.clone());
            let pt = func(move |t| pp(ph(t)) / dp(t));
            let (qq, ph, dp) = (q.clone(), phi.clone(), dphi.clone());
            let qt = func(move |t| qq(ph(t)) * dp(t));
            let (ww, ph, dp) = (w.clone(), phi.clone(), dphi.clone());
            let wt = func(move |t| ww(ph(t)) * dp(t));
            Coefficients { p: pt, q: qt, w: wt }
        }
        _ => Coefficients { p: p.clone(), q, w },
    };

    let frames = match &spec.frames {
        Some(FramesSpec::Explicit { a, b }) => [a, b],
        _ => return Err(SlxError::Parse("expression problems need explicit frames".into())),
    };
    let mut built = vec![];
    for (fs, loc) in frames.into_iter().zip([a, b]) {
        let (u, du) = compile(&fs.u, "x")?;
        let pu = {
            let (pp, du) = (p.clone(), du.clone());
            func(move |x| pp(x) * du(x))
        };
        let u = SolutionFn::new(compose(&u), compose(&pu));
        let v = match (&fs.v, &fs.nonprincipal) {
            (Some(vsrc), None) => {
                let (v, dv) = compile(vsrc, "x")?;
                let pv = {
                    let pp = p.clone();
                    func(move |x| pp(x) * dv(x))
                };
                SolutionFn::new(compose(&v), compose(&pv))
            }
            (None, Some(np)) => make_nonprincipal(&u, &coefficients.p, loc, np.alpha, np.beta)?,
            _ => return Err(SlxError::Parse("each frame needs exactly one of v or nonprincipal".into())),
        };
        built.push(EndpointFrame { location: loc, anchor: lambda0, u, v, classification: None });
    }
    let frame_b = built.pop().unwrap();
    let frame_a = built.pop().unwrap();
    Ok(SLProblem {
        name: spec.name.clone().unwrap_or_else(|| "custom".into()),
        a,
        b,
        coefficients,
        frame_a,
        frame_b,
        lower_bound: spec.k.unwrap_or(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{ClassifyConfig, validation_report};

    #[test]
    fn builtin_by_name() {
        let pr = parse(r#"{"coefficients": "legendre", "frames": "auto-builtin"}"#).unwrap();
        assert_eq!(pr.name, "legendre");
    }

    #[test]
    fn expression_legendre_matches_builtin_frames() {
        let pr = parse(
            r#"{"interval": [-1, 1], "coefficients": {"p": "1 - x^2", "q": "0", "w": "1"},
                "frames": {"a": {"u": "1", "v": "atanh(x)"}, "b": {"u": "1", "nonprincipal": {"alpha": 0, "beta": 0}}}}"#,
        )
        .unwrap();
        for x in [-0.9, 0.0, 0.5, 0.99] {
            let va = pr.frame_a.v.eval(x);
            let vb = pr.frame_b.v.eval(x);
            assert!((va - f64::atanh(x)).abs() < 1e-12);
            assert!((vb - va).abs() < 1e-9, "x = {x}: {vb} vs {va}");
            assert!((pr.frame_b.v.quasi_at(&pr.coefficients.p, x).unwrap() - 1.0).abs() < 1e-8);
        }
        assert!(validation_report(&pr, &ClassifyConfig::default()).passed());
    }

    #[test]
    fn change_of_variable_maps_quasi_derivatives() {
        // Free problem on (0, pi) written in t with x = pi t, t in (0, 1).
        let pr = parse(
            r#"{"interval": [0, 3.141592653589793], "coefficients": {"p": "1", "q": "0", "w": "1"},
                "change_of_variable": {"x": "3.141592653589793*t", "t_interval": [0, 1]},
                "frames": {"a": {"u": "x", "v": "-1"}, "b": {"u": "x - 3.141592653589793", "v": "-1"}}}"#,
        )
        .unwrap();
        assert!(((pr.coefficients.p)(0.3) - 1.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!((pr.frame_a.u.quasi_at(&pr.coefficients.p, 0.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_variable() {
        let err = parse(r#"{"interval": [0, 1], "coefficients": {"p": "1 + y", "q": "0", "w": "1"}, "frames": {"a": {"u": "x", "v": "-1"}, "b": {"u": "x-1", "v": "-1"}}}"#);
        assert!(matches!(err, Err(SlxError::Parse(_))));
    }
}
