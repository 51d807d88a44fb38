//! Thin wrapper over the adaptive order-8 Dormand-Prince stepper.

use ode_solvers::{Dop853, OutputType, SVector, System};

use crate::error::{Result, SlxError};

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: u32,
}

/// The stepper mishandles explicit `x` dependence, so the independent
/// variable is carried as one extra state component.
pub trait Augment<const N: usize> {
    fn run<F>(f: F, x0: f64, x1: f64, y0: SVector<f64, N>, tol: &Tolerances) -> Result<Vec<(f64, SVector<f64, N>)>>
    where
        F: Fn(f64, &SVector<f64, N>, &mut SVector<f64, N>);
}

pub struct Aug;

struct Autonomous<F, const N: usize>(F);

macro_rules! augment {
    ($($n:literal => $m:literal),*) => {$(
        impl<F> System<f64, SVector<f64, $m>> for Autonomous<F, $n>
        where
            F: Fn(f64, &SVector<f64, $n>, &mut SVector<f64, $n>),
        {
            fn system(&self, _: f64, y: &SVector<f64, $m>, dy: &mut SVector<f64, $m>) {
                let ys = y.fixed_rows::<$n>(0).into_owned();
                let mut ds = SVector::<f64, $n>::zeros();
                (self.0)(y[$n], &ys, &mut ds);
                dy.fixed_rows_mut::<$n>(0).copy_from(&ds);
                dy[$n] = 1.0;
            }
        }

        impl Augment<$n> for Aug {
            fn run<F>(f: F, x0: f64, x1: f64, y0: SVector<f64, $n>, tol: &Tolerances) -> Result<Vec<(f64, SVector<f64, $n>)>>
            where
                F: Fn(f64, &SVector<f64, $n>, &mut SVector<f64, $n>),
            {
                let mut s0 = SVector::<f64, $m>::zeros();
                s0.fixed_rows_mut::<$n>(0).copy_from(&y0);
                s0[$n] = x0;
                let mut stepper = Dop853::from_param(
                    Autonomous::<F, $n>(f),
                    x0,
                    x1,
                    0.0,
                    s0,
                    tol.rtol,
                    tol.atol,
                    0.9,
                    0.0,
                    0.333,
                    6.0,
                    (x1 - x0).abs(),
                    // An explicit first step; the automatic estimate overflows for tiny atol.
                    (x1 - x0) * 1e-3,
                    tol.max_steps,
                    u32::MAX,
                    OutputType::Sparse,
                );
                stepper.integrate().map_err(|e| SlxError::IntegrationDiverged(e.to_string()))?;
                Ok(stepper.x_out().iter().zip(stepper.y_out()).map(|(&x, y)| (x, y.fixed_rows::<$n>(0).into_owned())).collect())
            }
        }
    )*};
}

augment!(2 => 3, 8 => 9, 9 => 10, 10 => 11, 12 => 13);

/// Integrates `y' = f(x, y)` from `x0` to `x1`; returns accepted steps (including both ends).
pub fn trajectory<const N: usize, F>(f: F, x0: f64, x1: f64, y0: SVector<f64, N>, tol: &Tolerances) -> Result<Vec<(f64, SVector<f64, N>)>>
where
    Aug: Augment<N>,
    F: Fn(f64, &SVector<f64, N>, &mut SVector<f64, N>),
{
    if x0 == x1 {
        return Ok(vec![(x0, y0)]);
    }
    let out = Aug::run(f, x0, x1, y0, tol)?;
    match out.last() {
        Some((_, y)) if y.iter().all(|v| v.is_finite()) => Ok(out),
        _ => Err(SlxError::IntegrationDiverged("non-finite state".into())),
    }
}

/// Final state only.
pub fn solve<const N: usize, F>(f: F, x0: f64, x1: f64, y0: SVector<f64, N>, tol: &Tolerances) -> Result<SVector<f64, N>>
where
    Aug: Augment<N>,
    F: Fn(f64, &SVector<f64, N>, &mut SVector<f64, N>),
{
    Ok(trajectory(f, x0, x1, y0, tol)?.last().unwrap().1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let tol = Tolerances { rtol: 1e-12, atol: 1e-14, max_steps: 100_000 };
        let y = solve(
            |_, y: &SVector<f64, 2>, dy: &mut SVector<f64, 2>| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            std::f64::consts::PI,
            SVector::<f64, 2>::new(0.0, 1.0),
            &tol,
        )
        .unwrap();
        assert!(y[0].abs() < 1e-11 && (y[1] + 1.0).abs() < 1e-11);
    }

    #[test]
    fn explicit_x_dependence() {
        let tol = Tolerances { rtol: 1e-12, atol: 1e-14, max_steps: 100_000 };
        let t = trajectory(
            |s, y: &SVector<f64, 2>, dy: &mut SVector<f64, 2>| {
                dy[0] = -0.4 * (-s as f64).exp() * y[1];
                dy[1] = 0.4 * (-s as f64).exp() * y[0];
            },
            0.0,
            400.0,
            SVector::<f64, 2>::new(0.0, 1.0),
            &tol,
        )
        .unwrap();
        let y = t.last().unwrap().1;
        assert!(t.len() < 200);
        assert!((y[0] + 0.4f64.sin()).abs() < 1e-12 && (y[1] - 0.4f64.cos()).abs() < 1e-12);
    }
}
