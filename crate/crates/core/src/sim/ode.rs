//! Explicit one-step methods over any state that supports `s + h·d`.

use thiserror::Error;

use crate::consensus::SystemState;

pub trait OdeState: Sized {
    /// `self + h·d`
    fn add_scaled(&self, d: &Self, h: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        self + h * d
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl OdeState for Vec<f64> {
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        self.iter().zip(d).map(|(s, v)| s + h * v).collect()
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for SystemState {
    fn add_scaled(&self, d: &Self, h: f64) -> Self {
        SystemState {
            t: self.t + h * d.t,
            x: self.x.add_scaled(&d.x, h),
            theta_hat: self
                .theta_hat
                .iter()
                .zip(&d.theta_hat)
                .map(|(s, v)| s.add_scaled(v, h))
                .collect(),
            chi: self.chi.add_scaled(&d.chi, h),
        }
    }

    fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.x.is_finite()
            && self.chi.is_finite()
            && self.theta_hat.iter().all(OdeState::is_finite)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError<E> {
    #[error("derivative evaluation failed: {0}")]
    Derivative(E),
    #[error("non-finite derivative or state")]
    NonFinite,
}

fn eval<S: OdeState, E>(f: &mut impl FnMut(&S) -> Result<S, E>, s: &S) -> Result<S, StepError<E>> {
    let d = f(s).map_err(StepError::Derivative)?;
    if d.is_finite() {
        Ok(d)
    } else {
        Err(StepError::NonFinite)
    }
}

/// Classical four-stage Runge–Kutta step.
pub fn rk4_step<S, E, F>(mut f: F, s: &S, dt: f64) -> Result<S, StepError<E>>
where
    S: OdeState,
    F: FnMut(&S) -> Result<S, E>,
{
    let k1 = eval(&mut f, s)?;
    let k2 = eval(&mut f, &s.add_scaled(&k1, 0.5 * dt))?;
    let k3 = eval(&mut f, &s.add_scaled(&k2, 0.5 * dt))?;
    let k4 = eval(&mut f, &s.add_scaled(&k3, dt))?;
    let next = s
        .add_scaled(&k1, dt / 6.0)
        .add_scaled(&k2, dt / 3.0)
        .add_scaled(&k3, dt / 3.0)
        .add_scaled(&k4, dt / 6.0);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(StepError::NonFinite)
    }
}

pub fn euler_step<S, E, F>(mut f: F, s: &S, dt: f64) -> Result<S, StepError<E>>
where
    S: OdeState,
    F: FnMut(&S) -> Result<S, E>,
{
    let next = s.add_scaled(&eval(&mut f, s)?, dt);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(StepError::NonFinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn grow(x: &f64) -> Result<f64, Infallible> {
        Ok(*x)
    }

    #[test]
    fn exponential_single_step() {
        let x = rk4_step(grow, &1.0, 0.1).unwrap();
        // RK4 reproduces the Taylor series through h^4
        let taylor = 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0 + 0.0001 / 24.0;
        assert!((x - taylor).abs() < 1e-15);
        assert!((x - 0.1f64.exp()).abs() < 1e-7);
        assert_eq!(format!("{x:.9}"), "1.105170833");
    }

    #[test]
    fn zero_field_is_stationary() {
        let s = vec![1.0, -2.0, 3.5];
        let next = rk4_step(|v: &Vec<f64>| Ok::<_, Infallible>(vec![0.0; v.len()]), &s, 0.3).unwrap();
        assert_eq!(next, s);
    }

    fn integrate(dt: f64, steps: usize) -> Vec<f64> {
        // damped oscillator y'' + 0.3y' + y = 0
        let f = |s: &Vec<f64>| Ok::<_, Infallible>(vec![s[1], -s[0] - 0.3 * s[1]]);
        let mut s = vec![1.0, 0.0];
        for _ in 0..steps {
            s = rk4_step(f, &s, dt).unwrap();
        }
        s
    }

    #[test]
    fn fourth_order_convergence() {
        let reference = integrate(0.1 / 8.0, 800);
        let coarse = integrate(0.1, 100)[0] - reference[0];
        let fine = integrate(0.05, 200)[0] - reference[0];
        let ratio = coarse.abs() / fine.abs();
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn euler_is_first_order() {
        let exact = 1f64.exp();
        let run = |n: usize| {
            let mut x = 1.0;
            for _ in 0..n {
                x = euler_step(grow, &x, 1.0 / n as f64).unwrap();
            }
            exact - x
        };
        let ratio = run(100) / run(200);
        assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn non_finite_derivative_aborts() {
        let r = rk4_step(|_: &f64| Ok::<_, Infallible>(f64::NAN), &0.0, 0.1);
        assert_eq!(r, Err(StepError::NonFinite));
        let r = rk4_step(|_: &f64| Err::<f64, _>("boom"), &0.0, 0.1);
        assert_eq!(r, Err(StepError::Derivative("boom")));
    }
}
