//! Exponential amplitude-elongation baseline:
//!
//! ```text
//! N_i(χ) = (α²β^{2i} + 1) / (β^i·√(α²β^{2i} + 1)) · e^{α|χ|} · sin(χ / β^i)
//! ```
//!
//! Each agent `i` gets its own frequency `1/β^i`.

use serde::{Deserialize, Serialize};

use super::{invalid, NussbaumError, NussbaumFunction};

/// Default cap on `α·|χ|`; beyond `e^50` the baseline is numerically meaningless.
pub const DEFAULT_EXPONENT_CAP: f64 = 50.0;

fn default_cap() -> f64 {
    DEFAULT_EXPONENT_CAP
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraditionalNussbaumParams {
    /// Exponential growth rate, `α > 0`.
    pub alpha: f64,
    /// Frequency base, `0 < β < 1`.
    pub beta: f64,
    /// 1-based agent index `i`.
    pub agent_index: u32,
    #[serde(default = "default_cap")]
    pub exponent_cap: f64,
}

impl TraditionalNussbaumParams {
    pub fn new(alpha: f64, beta: f64, agent_index: u32) -> Result<Self, NussbaumError> {
        let params = Self {
            alpha,
            beta,
            agent_index,
            exponent_cap: DEFAULT_EXPONENT_CAP,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_exponent_cap(mut self, cap: f64) -> Self {
        self.exponent_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<(), NussbaumError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid("alpha", format!("must be positive, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid("beta", format!("must lie in (0, 1), got {}", self.beta)));
        }
        if self.agent_index == 0 {
            return Err(invalid("agent_index", "agents are numbered from 1"));
        }
        if self.exponent_cap.is_nan() || self.exponent_cap <= 0.0 {
            return Err(invalid("exponent_cap", "must be positive"));
        }
        Ok(())
    }

    /// `β^i`, the period scale of this agent.
    pub fn period_scale(&self) -> f64 {
        self.beta.powi(self.agent_index as i32)
    }

    /// Constant factor in front of `e^{α|χ|}·sin(χ/β^i)`.
    pub fn prefactor(&self) -> f64 {
        let scale = self.period_scale();
        let k = self.alpha * self.alpha * scale * scale + 1.0;
        k / (scale * k.sqrt())
    }

    pub fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        if !chi.is_finite() {
            return Err(NussbaumError::NonFinite(chi));
        }
        let magnitude = chi.abs();
        let exponent = self.alpha * magnitude;
        if exponent > self.exponent_cap {
            return Err(NussbaumError::ExponentCapExceeded {
                exponent,
                cap: self.exponent_cap,
            });
        }
        let value = self.prefactor() * exponent.exp() * (magnitude / self.period_scale()).sin();
        Ok(if chi < 0.0 { -value } else { value })
    }
}

impl NussbaumFunction for TraditionalNussbaumParams {
    fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        TraditionalNussbaumParams::gain(self, chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_at_origin() {
        let p = TraditionalNussbaumParams::new(4.0, 0.2, 1).unwrap();
        assert_eq!(p.gain(0.0).unwrap(), 0.0);
    }

    #[test]
    fn direct_substitution() {
        let p = TraditionalNussbaumParams::new(4.0, 0.2, 1).unwrap();
        let chi = 0.1 * PI * 0.2;
        // √(α²β² + 1)/β with α = 4, β = 0.2
        let prefactor = (16.0f64 * 0.04 + 1.0).sqrt() / 0.2;
        let expected = prefactor * (0.4 * PI * 0.2).exp() * (0.1 * PI).sin();
        let got = p.gain(chi).unwrap();
        assert!((got - expected).abs() <= 1e-14 * expected.abs(), "{got} vs {expected}");
    }

    #[test]
    fn odd_symmetry() {
        let p = TraditionalNussbaumParams::new(4.0, 0.2, 3).unwrap();
        for k in 0..200 {
            let chi = -5.0 + 0.05 * k as f64 + 0.0013;
            assert_eq!(p.gain(-chi).unwrap(), -p.gain(chi).unwrap());
        }
    }

    #[test]
    fn exponent_cap_is_enforced() {
        let p = TraditionalNussbaumParams::new(4.0, 0.2, 1).unwrap();
        assert!(p.gain(12.5).is_ok());
        assert!(matches!(
            p.gain(12.6),
            Err(NussbaumError::ExponentCapExceeded { .. })
        ));
        let tight = p.with_exponent_cap(1.0);
        assert!(tight.gain(0.3).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TraditionalNussbaumParams::new(0.0, 0.2, 1).is_err());
        assert!(TraditionalNussbaumParams::new(1.0, 1.0, 1).is_err());
        assert!(TraditionalNussbaumParams::new(1.0, 0.5, 0).is_err());
    }
}
