//! Fixed-step integration of the closed loop.

mod engine;
mod ode;

pub use engine::{run, Blowup, RunOutcome, Sample, SimConfig, SimError, Solver, Trajectory};
pub use ode::{euler_step, rk4_step, OdeState, StepError};
