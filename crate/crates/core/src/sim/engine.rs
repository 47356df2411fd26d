use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::ode::{euler_step, rk4_step, OdeState, StepError};
use crate::consensus::{closed_loop_derivative, control_step, DynamicsError, SystemState};
use crate::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    #[default]
    Rk4,
    Euler,
}

fn default_dt() -> f64 {
    1e-3
}
fn default_t_final() -> f64 {
    10.0
}
fn default_stride() -> usize {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    #[serde(default)]
    pub solver: Solver,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            t_final: default_t_final(),
            record_stride: default_stride(),
            solver: Solver::Rk4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid sim config: {0}")]
    Config(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.dt <= self.t_final) {
            return Err(SimError::Config(format!(
                "need dt <= t_final, got dt = {} and t_final = {}",
                self.dt, self.t_final
            )));
        }
        if self.record_stride == 0 {
            return Err(SimError::Config("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}

/// One recorded instant of the closed loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub u_n: Vec<f64>,
    pub e: Vec<f64>,
    pub chi: Vec<f64>,
    pub gain: Vec<f64>,
    pub theta_hat: Vec<Vec<f64>>,
}

impl Sample {
    pub fn spread(&self) -> f64 {
        let max = self.x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.x.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    fn is_finite(&self) -> bool {
        [&self.x, &self.u, &self.u_n, &self.e, &self.chi, &self.gain]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
            && self.theta_hat.iter().flatten().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n_agents: usize,
    pub sim: SimConfig,
    /// SHA-256 of the scenario and sim config as canonical JSON.
    pub fingerprint: String,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Blowup {
    pub step: usize,
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    /// Set when the run stopped early; the trajectory then holds the samples
    /// recorded before the failing step.
    pub blowup: Option<Blowup>,
}

fn fingerprint(scenario: &Scenario, sim: &SimConfig) -> String {
    let doc = serde_json::json!({ "scenario": scenario.config(), "sim": sim });
    hex::encode(Sha256::digest(doc.to_string().as_bytes()))
}

pub fn run(scenario: &Scenario, sim: &SimConfig) -> Result<RunOutcome, SimError> {
    sim.validate()?;
    let graph = scenario.graph();
    let agents = scenario.agents();
    let gains = scenario.gains();
    let mut state = SystemState::initial(agents);
    let mut trajectory = Trajectory {
        n_agents: agents.len(),
        sim: *sim,
        fingerprint: fingerprint(scenario, sim),
        samples: Vec::with_capacity(sim.steps() / sim.record_stride + 1),
    };
    let field = |s: &SystemState| closed_loop_derivative(graph, agents, gains, s);

    let steps = sim.steps();
    let mut step = 0;
    loop {
        let t = step as f64 * sim.dt;
        if step % sim.record_stride == 0 {
            let out = match control_step(graph, agents, gains, &state) {
                Ok(out) => out,
                Err(err) => return Ok(stopped(trajectory, step, t, err.to_string())),
            };
            let sample = Sample {
                t,
                x: state.x.clone(),
                u: out.u,
                u_n: out.u_n,
                e: out.e,
                chi: state.chi.clone(),
                gain: out.gain,
                theta_hat: state.theta_hat.clone(),
            };
            if !sample.is_finite() {
                return Ok(stopped(trajectory, step, t, "non-finite recorded value".into()));
            }
            trajectory.samples.push(sample);
        }
        if step == steps {
            break;
        }
        let next = match sim.solver {
            Solver::Rk4 => rk4_step(field, &state, sim.dt),
            Solver::Euler => euler_step(field, &state, sim.dt),
        };
        state = match next {
            Ok(mut s) => {
                // pin t to the grid so sample times do not drift
                s.t = (step + 1) as f64 * sim.dt;
                s
            }
            Err(StepError::Derivative(err)) => {
                return Ok(stopped(trajectory, step, t, err.to_string()))
            }
            Err(StepError::NonFinite) => {
                return Ok(stopped(trajectory, step, t, "non-finite state".into()))
            }
        };
        debug_assert!(state.is_finite());
        step += 1;
    }
    Ok(RunOutcome {
        trajectory,
        blowup: None,
    })
}

fn stopped(trajectory: Trajectory, step: usize, t: f64, reason: String) -> RunOutcome {
    RunOutcome {
        trajectory,
        blowup: Some(Blowup { step, t, reason }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ScenarioConfig;

    fn novel() -> Scenario {
        Scenario::bundled("reference_saturated").unwrap()
    }

    #[test]
    fn rejects_bad_sim_config() {
        let s = novel();
        for bad in [
            SimConfig { dt: 0.0, ..SimConfig::default() },
            SimConfig { dt: 20.0, ..SimConfig::default() },
            SimConfig { record_stride: 0, ..SimConfig::default() },
        ] {
            assert!(run(&s, &bad).is_err());
        }
    }

    #[test]
    fn uniform_sample_grid() {
        let sim = SimConfig { t_final: 0.5, ..SimConfig::default() };
        let out = run(&novel(), &sim).unwrap();
        assert!(out.blowup.is_none());
        let tr = out.trajectory;
        assert_eq!(tr.samples.len(), 51);
        for (k, s) in tr.samples.iter().enumerate() {
            assert_eq!(s.t, (10 * k) as f64 * 1e-3);
        }
    }

    #[test]
    fn runs_are_bitwise_deterministic() {
        let sim = SimConfig { t_final: 1.0, ..SimConfig::default() };
        let a = run(&novel(), &sim).unwrap().trajectory;
        let b = run(&novel(), &sim).unwrap().trajectory;
        assert_eq!(a, b);
        let c = run(&novel(), &SimConfig { record_stride: 5, ..sim }).unwrap().trajectory;
        assert_ne!(a.fingerprint, c.fingerprint);
    }

    #[test]
    fn lone_agent_without_regressor_stays_put() {
        let json = r#"{
            "schema_version": 1,
            "name": "lone",
            "graph": {"nodes": 1, "edges": []},
            "agents": [{"rho": 1.0, "theta": [2.0], "regressor": {"kind": "constant", "values": [0.0]},
                        "zeta": 1.0, "gamma": 1.0, "x0": 0.75}],
            "gain_scheme": {"scheme": "saturated", "a_n": 1.0, "b_n": 2.0, "t_n": 1.0, "m": 4},
            "gain_bounds": {"rho_min": 0.5, "rho_max": 2.0}
        }"#;
        let cfg: ScenarioConfig = serde_json::from_str(json).unwrap();
        let s = Scenario::from_config(cfg).unwrap();
        let out = run(&s, &SimConfig { t_final: 1.0, ..SimConfig::default() }).unwrap();
        assert!(out.trajectory.samples.iter().all(|p| p.x == vec![0.75] && p.u == vec![0.0]));
    }

    #[test]
    fn exponent_cap_blowup_keeps_partial_trajectory() {
        let mut cfg = Scenario::bundled("reference_traditional").unwrap().config().clone();
        if let crate::scenario::GainScheme::Traditional { alpha, .. } = &mut cfg.gain_scheme {
            *alpha = 400.0;
        }
        let s = Scenario::from_config(cfg).unwrap();
        let out = run(&s, &SimConfig { dt: 1e-4, t_final: 2.0, ..SimConfig::default() }).unwrap();
        let blowup = out.blowup.expect("alpha = 400 must hit the exponent cap");
        assert!(blowup.reason.contains("exponent cap"), "{}", blowup.reason);
        assert!(!out.trajectory.samples.is_empty());
        assert!(out.trajectory.samples.last().unwrap().t <= blowup.t);
    }
}
