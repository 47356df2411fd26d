//! Energy bookkeeping along a recorded run.
//!
//! `V = ½xᵀLx + ½Σ θ̃_iᵀθ̃_i/ζ_i` with `θ̃_i = θ̂_i − θ_i`. Along the closed loop
//!
//! ```text
//! V̇ = −Σ e_i² − Σ (ϱ_i N_i − 1)·e_i·u_Ni
//!   = −Σ e_i² − Σ (ϱ_i/γ_i)·N_i·χ̇_i + Σ χ̇_i/γ_i
//! ```
//!
//! so `RHS(t) = V(0) + ∫Σ(−ϱ_i/γ_i)N_iχ̇_i + ∫Σχ̇_i/γ_i` exceeds `V(t)` by
//! exactly `∫Σe_i²`. The trace accumulates both integrals with the trapezoid
//! rule on the recorded samples.

use serde::{Deserialize, Serialize};

use super::Quadrature;
use crate::consensus::{closed_loop_derivative, control_step, AgentSpec, DynamicsError, Graph, SystemState};
use crate::nussbaum::NussbaumFunction;
use crate::sim::{Sample, Trajectory};
use crate::Scenario;

fn theta_tilde(agents: &[AgentSpec], theta_hat: &[Vec<f64>]) -> Vec<Vec<f64>> {
    agents
        .iter()
        .zip(theta_hat)
        .map(|(a, est)| est.iter().zip(&a.theta).map(|(h, t)| h - t).collect())
        .collect()
}

pub fn lyapunov_value(graph: &Graph, agents: &[AgentSpec], x: &[f64], theta_hat: &[Vec<f64>]) -> Result<f64, DynamicsError> {
    let consensus = 0.5 * graph.quadratic_form(x)?;
    let estimation: f64 = theta_tilde(agents, theta_hat)
        .iter()
        .zip(agents)
        .map(|(tt, a)| 0.5 * tt.iter().map(|v| v * v).sum::<f64>() / a.zeta)
        .sum();
    Ok(consensus + estimation)
}

/// `V̇` by the chain rule: `eᵀẋ + Σ θ̃_iᵀθ̂̇_i/ζ_i`.
pub fn lyapunov_rate<G: NussbaumFunction>(
    graph: &Graph,
    agents: &[AgentSpec],
    gains: &[G],
    state: &SystemState,
) -> Result<f64, DynamicsError> {
    let d = closed_loop_derivative(graph, agents, gains, state)?;
    let e = graph.combined_error(&state.x)?;
    let consensus: f64 = e.iter().zip(&d.x).map(|(a, b)| a * b).sum();
    let estimation: f64 = theta_tilde(agents, &state.theta_hat)
        .iter()
        .zip(&d.theta_hat)
        .zip(agents)
        .map(|((tt, dt), a)| tt.iter().zip(dt).map(|(p, q)| p * q).sum::<f64>() / a.zeta)
        .sum();
    Ok(consensus + estimation)
}

/// `V̇` in closed form: `−Σe_i² − Σ(ϱ_iN_i − 1)e_iu_Ni`.
pub fn lyapunov_rate_assembled<G: NussbaumFunction>(
    graph: &Graph,
    agents: &[AgentSpec],
    gains: &[G],
    state: &SystemState,
) -> Result<f64, DynamicsError> {
    let out = control_step(graph, agents, gains, state)?;
    Ok((0..agents.len())
        .map(|i| {
            -out.e[i] * out.e[i] - (agents[i].rho * out.gain[i] - 1.0) * out.e[i] * out.u_n[i]
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovTrace {
    pub quadrature: Quadrature,
    pub times: Vec<f64>,
    pub v: Vec<f64>,
    pub rhs: Vec<f64>,
    /// `rhs − v`
    pub residual: Vec<f64>,
    /// Independent trapezoid of `Σe_i²`.
    pub error_energy: Vec<f64>,
    /// Integration constant, `V(0)`.
    pub delta: f64,
    /// Diagonal of `H = diag(ζ)⁻¹`.
    pub h_diag: Vec<f64>,
    /// `η_i = 1/γ_i`.
    pub eta: Vec<f64>,
    /// `θ̃_i` per sample.
    pub theta_tilde: Vec<Vec<Vec<f64>>>,
}

impl LyapunovTrace {
    pub fn min_residual(&self) -> f64 {
        self.residual.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest drop of the residual between consecutive samples (0 if none).
    pub fn max_residual_decrease(&self) -> f64 {
        self.residual
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }

    /// `max_k |r_k − E_k| / E_final` where `E` is the error-energy integral.
    pub fn energy_mismatch(&self) -> f64 {
        let scale = self.error_energy.last().copied().unwrap_or(0.0);
        let worst = self
            .residual
            .iter()
            .zip(&self.error_energy)
            .map(|(r, e)| (r - e).abs())
            .fold(0.0, f64::max);
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }

    pub fn max_v(&self) -> f64 {
        self.v.iter().copied().fold(0.0, f64::max)
    }
}

/// Trace with trapezoidal accumulation.
pub fn lyapunov_trace(trajectory: &Trajectory, scenario: &Scenario) -> Result<LyapunovTrace, DynamicsError> {
    lyapunov_trace_with(trajectory, scenario, Quadrature::Trapezoid)
}

pub fn lyapunov_trace_with(
    trajectory: &Trajectory,
    scenario: &Scenario,
    quadrature: Quadrature,
) -> Result<LyapunovTrace, DynamicsError> {
    let graph = scenario.graph();
    let agents = scenario.agents();
    let samples: &[Sample] = &trajectory.samples;
    let times: Vec<f64> = samples.iter().map(|s| s.t).collect();

    let mut v = Vec::with_capacity(samples.len());
    let mut shaping = Vec::with_capacity(samples.len());
    let mut energy = Vec::with_capacity(samples.len());
    let mut tilde = Vec::with_capacity(samples.len());
    for s in samples {
        v.push(lyapunov_value(graph, agents, &s.x, &s.theta_hat)?);
        let mut f = 0.0;
        for (i, a) in agents.iter().enumerate() {
            let chi_dot = a.gamma * s.e[i] * s.u_n[i];
            f += -a.rho / a.gamma * s.gain[i] * chi_dot + chi_dot / a.gamma;
        }
        shaping.push(f);
        energy.push(s.e.iter().map(|e| e * e).sum::<f64>());
        tilde.push(theta_tilde(agents, &s.theta_hat));
    }
    let delta = v.first().copied().unwrap_or(0.0);
    let rhs: Vec<f64> = quadrature
        .cumulative(&times, &shaping)
        .into_iter()
        .map(|integral| delta + integral)
        .collect();
    let residual = rhs.iter().zip(&v).map(|(r, v)| r - v).collect();
    Ok(LyapunovTrace {
        quadrature,
        error_energy: quadrature.cumulative(&times, &energy),
        times,
        v,
        rhs,
        residual,
        delta,
        h_diag: agents.iter().map(|a| 1.0 / a.zeta).collect(),
        eta: agents.iter().map(|a| 1.0 / a.gamma).collect(),
        theta_tilde: tilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rate_forms_agree() {
        for name in ["reference_saturated", "reference_traditional"] {
            let s = Scenario::bundled(name).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..1000 {
                let state = SystemState {
                    t: 0.0,
                    x: (0..3).map(|_| rng.gen_range(-4.0..4.0)).collect(),
                    theta_hat: (0..3).map(|_| vec![rng.gen_range(-2.0..2.0)]).collect(),
                    chi: (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                };
                let a = lyapunov_rate(s.graph(), s.agents(), s.gains(), &state).unwrap();
                let b = lyapunov_rate_assembled(s.graph(), s.agents(), s.gains(), &state).unwrap();
                assert!((a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1e-300), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn value_is_nonnegative_and_zero_at_rest() {
        let s = Scenario::bundled("reference_saturated").unwrap();
        let thetas: Vec<Vec<f64>> = s.agents().iter().map(|a| a.theta.clone()).collect();
        assert_eq!(lyapunov_value(s.graph(), s.agents(), &[0.3; 3], &thetas).unwrap(), 0.0);
        let v0 = lyapunov_value(s.graph(), s.agents(), &[2.0, -1.0, -2.0], &vec![vec![0.0]; 3]).unwrap();
        // ½·(9·1 + ... ) : xᵀLx = (2+1)² + (−1+2)² = 10
        let expected = 5.0 + 0.5 * (1.1 * 1.1 / 0.6 + 0.04 / 1.6 + 0.36 / 2.3);
        assert!((v0 - expected).abs() < 1e-14);
    }

    #[test]
    fn residual_starts_at_zero() {
        let s = Scenario::bundled("reference_saturated").unwrap();
        let sim = crate::sim::SimConfig { t_final: 0.5, ..s.sim_config() };
        let tr = crate::sim::run(&s, &sim).unwrap().trajectory;
        let trace = lyapunov_trace(&tr, &s).unwrap();
        assert_eq!(trace.residual[0], 0.0);
        assert_eq!(trace.delta, trace.v[0]);
        assert!(trace.v.iter().all(|v| *v >= 0.0));
    }
}
