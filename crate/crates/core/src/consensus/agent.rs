use serde::{Deserialize, Serialize};

use super::{DynamicsError, Regressor};

/// Known bounds on `|ϱ_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainBounds {
    pub rho_min: f64,
    pub rho_max: f64,
}

impl GainBounds {
    pub fn contains(&self, rho: f64) -> bool {
        let m = rho.abs();
        m >= self.rho_min && m <= self.rho_max
    }
}

/// Plant truth and controller gains of one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    /// Unknown control coefficient `ϱ_i`, nonzero, any sign.
    pub rho: f64,
    /// Unknown parameter vector `θ_i`.
    pub theta: Vec<f64>,
    pub regressor: Regressor,
    /// Parameter adaptation rate `ζ_i > 0`.
    pub zeta: f64,
    /// Nussbaum argument rate `γ_i > 0`.
    pub gamma: f64,
    pub x0: f64,
    /// Initial estimate `θ̂_i(0)`; zeros when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_hat0: Option<Vec<f64>>,
    #[serde(default)]
    pub chi0: f64,
}

impl AgentSpec {
    pub fn initial_estimate(&self) -> Vec<f64> {
        self.theta_hat0
            .clone()
            .unwrap_or_else(|| vec![0.0; self.regressor.dim()])
    }

    /// Checks the agent's own invariants; `agent` is 1-based and only used in messages.
    pub fn validate(&self, agent: usize, bounds: Option<&GainBounds>) -> Result<(), DynamicsError> {
        let fail = |reason: String| Err(DynamicsError::Agent { agent, reason });
        if !self.rho.is_finite() || self.rho == 0.0 {
            return fail(format!("rho must be finite and nonzero, got {}", self.rho));
        }
        if let Some(b) = bounds {
            if !b.contains(self.rho) {
                return fail(format!(
                    "|rho| = {} outside [{}, {}]",
                    self.rho.abs(),
                    b.rho_min,
                    b.rho_max
                ));
            }
        }
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return fail(format!("zeta must be positive, got {}", self.zeta));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        let dim = self.regressor.dim();
        if self.theta.len() != dim {
            return fail(format!("theta has length {}, regressor has dimension {dim}", self.theta.len()));
        }
        if self.initial_estimate().len() != dim {
            return fail(format!("theta_hat0 must have length {dim}"));
        }
        if !self.x0.is_finite() || !self.chi0.is_finite() {
            return fail("initial state must be finite".to_string());
        }
        Ok(())
    }
}
