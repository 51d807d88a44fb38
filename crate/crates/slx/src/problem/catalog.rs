//! Built-in problems with closed-form frames.

use std::f64::consts::PI;

use super::{Coefficients, EndpointFrame, SLProblem, SolutionFn, func};

fn frame(location: f64, u: SolutionFn, v: SolutionFn) -> EndpointFrame {
    EndpointFrame { location, anchor: 0.0, u, v, classification: None }
}

/// `-y'' = lambda y` on `(0, pi)`.
pub fn free() -> SLProblem {
    let minus_one = || SolutionFn::new(func(|_| -1.0), func(|_| 0.0));
    SLProblem {
        name: "free".into(),
        a: 0.0,
        b: PI,
        coefficients: Coefficients { p: func(|_| 1.0), q: func(|_| 0.0), w: func(|_| 1.0) },
        frame_a: frame(0.0, SolutionFn::new(func(|x| x), func(|_| 1.0)), minus_one()),
        frame_b: frame(PI, SolutionFn::new(func(|x| x - PI), func(|_| 1.0)), minus_one()),
        lower_bound: 0.0,
    }
}

/// `-((1 - x^2) y')' = lambda y` on `(-1, 1)`.
pub fn legendre() -> SLProblem {
    let one = || SolutionFn::new(func(|_| 1.0), func(|_| 0.0));
    let atanh = || SolutionFn::new(func(|x: f64| x.atanh()), func(|_| 1.0));
    SLProblem {
        name: "legendre".into(),
        a: -1.0,
        b: 1.0,
        coefficients: Coefficients {
            p: func(|x| (1.0 - x) * (1.0 + x)),
            q: func(|_| 0.0),
            w: func(|_| 1.0),
        },
        frame_a: frame(-1.0, one(), atanh()),
        frame_b: frame(1.0, one(), atanh()),
        lower_bound: 0.0,
    }
}

/// `-y'' + (nu^2 - 1/4) x^-2 y = lambda y` on `(0, 1)`, `0 < nu < 1`.
///
/// Stored as `q = (1/4 - nu^2) / x^2` in the `(p y')' + q y` form.
pub fn bessel(nu: f64) -> SLProblem {
    assert!(nu > 0.0 && nu < 1.0, "bessel order must lie in (0, 1)");
    let hi = 0.5 + nu;
    let lo = 0.5 - nu;
    let s = 2.0 * nu;
    let v = move || {
        SolutionFn::new(func(move |x: f64| -x.powf(lo) / s), func(move |x: f64| -lo * x.powf(-0.5 - nu) / s))
    };
    SLProblem {
        name: format!("bessel({nu})"),
        a: 0.0,
        b: 1.0,
        coefficients: Coefficients {
            p: func(|_| 1.0),
            q: func(move |x| (0.25 - nu * nu) / (x * x)),
            w: func(|_| 1.0),
        },
        frame_a: frame(0.0, SolutionFn::new(func(move |x: f64| x.powf(hi)), func(move |x: f64| hi * x.powf(nu - 0.5))), v()),
        frame_b: frame(
            1.0,
            SolutionFn::new(
                func(move |x: f64| x.powf(hi) - x.powf(lo)),
                func(move |x: f64| hi * x.powf(nu - 0.5) - lo * x.powf(-0.5 - nu)),
            ),
            v(),
        ),
        lower_bound: 0.0,
    }
}

/// Looks up a built-in by name: `free`, `legendre`, `bessel:<nu>`.
pub fn by_name(name: &str) -> Option<SLProblem> {
    match name {
        "free" => Some(free()),
        "legendre" => Some(legendre()),
        _ => {
            let nu: f64 = name.strip_prefix("bessel:")?.parse().ok()?;
            (nu > 0.0 && nu < 1.0).then(|| bessel(nu))
        }
    }
}
