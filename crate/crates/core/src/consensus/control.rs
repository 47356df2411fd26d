use serde::{Deserialize, Serialize};

use super::{expect_len, AgentSpec, DynamicsError, Graph};
use crate::nussbaum::NussbaumFunction;

/// Closed-loop state `(x, θ̂, χ)` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub t: f64,
    pub x: Vec<f64>,
    pub theta_hat: Vec<Vec<f64>>,
    pub chi: Vec<f64>,
}

impl SystemState {
    pub fn initial(agents: &[AgentSpec]) -> Self {
        Self {
            t: 0.0,
            x: agents.iter().map(|a| a.x0).collect(),
            theta_hat: agents.iter().map(AgentSpec::initial_estimate).collect(),
            chi: agents.iter().map(|a| a.chi0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn check(&self, agents: &[AgentSpec], graph: &Graph) -> Result<(), DynamicsError> {
        let n = graph.len();
        expect_len("agents", agents.len(), n)?;
        expect_len("x", self.x.len(), n)?;
        expect_len("chi", self.chi.len(), n)?;
        expect_len("theta_hat", self.theta_hat.len(), n)?;
        for (est, agent) in self.theta_hat.iter().zip(agents) {
            expect_len("theta_hat[i]", est.len(), agent.regressor.dim())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlOutputs {
    /// Combined errors `e = Lx`.
    pub e: Vec<f64>,
    /// Auxiliary controls `u_Ni = e_i + ψ_iᵀθ̂_i`.
    pub u_n: Vec<f64>,
    /// Applied inputs `u_i = −N_i(χ_i)·u_Ni`.
    pub u: Vec<f64>,
    /// `N_i(χ_i)`.
    pub gain: Vec<f64>,
}

pub fn control_step<G: NussbaumFunction>(
    graph: &Graph,
    agents: &[AgentSpec],
    gains: &[G],
    state: &SystemState,
) -> Result<ControlOutputs, DynamicsError> {
    state.check(agents, graph)?;
    expect_len("gains", gains.len(), agents.len())?;
    let e = graph.combined_error(&state.x)?;
    let n = agents.len();
    let mut u_n = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut gain = Vec::with_capacity(n);
    for i in 0..n {
        let aux = e[i] + agents[i].regressor.dot(state.x[i], &state.theta_hat[i]);
        let g = gains[i]
            .gain(state.chi[i])
            .map_err(|source| DynamicsError::Gain { agent: i + 1, source })?;
        u_n.push(aux);
        u.push(-g * aux);
        gain.push(g);
    }
    Ok(ControlOutputs { e, u_n, u, gain })
}

/// Right-hand side of the closed loop; the returned state's `t` field holds `ṫ = 1`.
pub fn closed_loop_derivative<G: NussbaumFunction>(
    graph: &Graph,
    agents: &[AgentSpec],
    gains: &[G],
    state: &SystemState,
) -> Result<SystemState, DynamicsError> {
    let out = control_step(graph, agents, gains, state)?;
    let mut dx = Vec::with_capacity(agents.len());
    let mut dtheta = Vec::with_capacity(agents.len());
    let mut dchi = Vec::with_capacity(agents.len());
    for (i, agent) in agents.iter().enumerate() {
        let psi = agent.regressor.eval(state.x[i]);
        let drift: f64 = psi.iter().zip(&agent.theta).map(|(p, q)| p * q).sum();
        dx.push(agent.rho * out.u[i] + drift);
        dtheta.push(psi.iter().map(|p| agent.zeta * p * out.e[i]).collect());
        dchi.push(agent.gamma * out.e[i] * out.u_n[i]);
    }
    Ok(SystemState {
        t: 1.0,
        x: dx,
        theta_hat: dtheta,
        chi: dchi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consensus::Regressor;
    use crate::nussbaum::SaturatedNussbaumParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn agent(rho: f64, regressor: Regressor, theta: Vec<f64>) -> AgentSpec {
        AgentSpec {
            rho,
            theta,
            regressor,
            zeta: 0.6,
            gamma: 10.0,
            x0: 0.0,
            theta_hat0: None,
            chi0: 0.0,
        }
    }

    fn three() -> (Graph, Vec<AgentSpec>, Vec<SaturatedNussbaumParams>) {
        let agents = vec![
            agent(2.2, Regressor::SineOfState, vec![-1.1]),
            agent(2.0, Regressor::CosineOfState, vec![0.2]),
            agent(-1.8, Regressor::IdentityOfState, vec![-0.6]),
        ];
        let gains = vec![SaturatedNussbaumParams::new(3.0, 3.0, 1.0, 4).unwrap(); 3];
        (Graph::path(3).unwrap(), agents, gains)
    }

    #[test]
    fn consensus_with_zero_estimates_gives_zero_input() {
        let (g, agents, gains) = three();
        let mut s = SystemState::initial(&agents);
        s.x = vec![0.4; 3];
        s.chi = vec![0.3, 1.7, 12.0];
        let out = control_step(&g, &agents, &gains, &s).unwrap();
        assert_eq!(out.u, vec![0.0; 3]);
        let d = closed_loop_derivative(&g, &agents, &gains, &s).unwrap();
        assert_eq!(d.chi, vec![0.0; 3]);
        assert!(d.theta_hat.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn isolated_agent_without_regressor_is_a_fixed_point() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let a = vec![agent(1.5, Regressor::Constant { values: vec![0.0] }, vec![3.0])];
        let gains = vec![SaturatedNussbaumParams::new(1.0, 2.0, 1.0, 4).unwrap()];
        let mut s = SystemState::initial(&a);
        s.x = vec![7.0];
        for chi in [0.0, 2.0, 100.0] {
            s.chi = vec![chi];
            let out = control_step(&g, &a, &gains, &s).unwrap();
            assert_eq!(out.u, vec![0.0]);
            let d = closed_loop_derivative(&g, &a, &gains, &s).unwrap();
            assert_eq!(d.x, vec![0.0]);
        }
    }

    #[test]
    fn initial_errors_on_path() {
        let (g, mut agents, gains) = three();
        for (a, x0) in agents.iter_mut().zip([2.0, -1.0, -2.0]) {
            a.x0 = x0;
        }
        let s = SystemState::initial(&agents);
        let out = control_step(&g, &agents, &gains, &s).unwrap();
        assert_eq!(out.e, vec![3.0, -2.0, -1.0]);
        // χ = 0 ⇒ N = a
        assert_eq!(out.u, vec![-9.0, 6.0, 3.0]);
    }

    #[test]
    fn random_states_satisfy_pointwise_identities() {
        let (g, agents, gains) = three();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let s = SystemState {
                t: 0.0,
                x: (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect(),
                theta_hat: (0..3).map(|_| vec![rng.gen_range(-3.0..3.0)]).collect(),
                chi: (0..3).map(|_| rng.gen_range(-50.0..50.0)).collect(),
            };
            let out = control_step(&g, &agents, &gains, &s).unwrap();
            let d = closed_loop_derivative(&g, &agents, &gains, &s).unwrap();
            assert!(out.e.iter().sum::<f64>().abs() < 1e-12);
            for i in 0..3 {
                assert_eq!(out.u[i], -out.gain[i] * out.u_n[i]);
                let product = out.e[i] * out.u_n[i];
                assert_eq!(d.chi[i] > 0.0, product > 0.0);
                assert_eq!(d.chi[i] < 0.0, product < 0.0);
            }
            // bitwise determinism
            assert_eq!(d, closed_loop_derivative(&g, &agents, &gains, &s).unwrap());
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let (g, agents, gains) = three();
        let mut s = SystemState::initial(&agents);
        s.chi.pop();
        assert!(matches!(
            control_step(&g, &agents, &gains, &s),
            Err(DynamicsError::Dimension { what: "chi", .. })
        ));
    }
}
