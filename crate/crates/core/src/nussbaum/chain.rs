//! Inter-agent parameter chain.
//!
//! Agent `N` (the last) has the fastest frequency and carries the user's
//! `(a_N, b_N, T_N)`. Slower agents are derived backwards with
//! `S = Σ_{n=0}^{M-1} b_{i+1}^n`:
//!
//! ```text
//! a_i = b_{i+1}^{M-1} / S · a_{i+1}
//! b_i = b_{i+1}^M
//! T_i = S · T_{i+1}
//! ```
//!
//! which makes every segment of agent `i` coincide with `M` consecutive
//! segments of agent `i+1` and equalises the integral extrema.

use serde::{Deserialize, Serialize};

use super::{invalid, NussbaumError, SaturatedNussbaumParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NussbaumChain {
    params: Vec<SaturatedNussbaumParams>,
}

pub fn build_chain(
    n_agents: usize,
    a_n: f64,
    b_n: f64,
    t_n: f64,
    m: u32,
) -> Result<NussbaumChain, NussbaumError> {
    if n_agents == 0 {
        return Err(invalid("n_agents", "need at least one agent"));
    }
    let last = SaturatedNussbaumParams::new(a_n, b_n, t_n, m)?;
    let mut params = vec![last; n_agents];
    for agent in (1..n_agents).rev() {
        let next = params[agent];
        let mut power = 1.0;
        let mut sum = 0.0;
        for _ in 0..m {
            sum += power;
            power *= next.b;
        }
        // `power` is now b^M; b^{M-1} = b^M / b
        let derived = SaturatedNussbaumParams {
            a: next.a * (power / next.b) / sum,
            b: power,
            t: sum * next.t,
            m,
            horizon: next.horizon,
        };
        if !(derived.a.is_finite() && derived.b.is_finite() && derived.t.is_finite())
            || derived.a <= 0.0
        {
            // report 1-based agent numbering
            return Err(NussbaumError::ChainOverflow { agent });
        }
        params[agent - 1] = derived;
    }
    Ok(NussbaumChain { params })
}

impl NussbaumChain {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[SaturatedNussbaumParams] {
        &self.params
    }

    /// Parameters of agent `agent` (1-based).
    pub fn agent(&self, agent: usize) -> Option<&SaturatedNussbaumParams> {
        agent.checked_sub(1).and_then(|i| self.params.get(i))
    }

    /// Consecutive `(slower, faster)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (&SaturatedNussbaumParams, &SaturatedNussbaumParams)> {
        self.params.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Relative mismatch of `a_i·T_i·b_i^{n-1}` against
    /// `a_{i+1}·T_{i+1}·b_{i+1}^{Mn-1}` for the pair starting at `agent` (1-based).
    pub fn amplitude_residual(&self, agent: usize, n: u32) -> Result<f64, NussbaumError> {
        let (slow, fast) = self.pair(agent)?;
        let lhs = slow.extremum(n)?;
        let rhs = fast.extremum(slow.m * n)?;
        Ok(relative(lhs, rhs))
    }

    /// Relative mismatch of `χ_{n,i}` against `χ_{Mn,i+1}`.
    pub fn alignment_residual(&self, agent: usize, n: u32) -> Result<f64, NussbaumError> {
        let (slow, fast) = self.pair(agent)?;
        let lhs = slow.boundary(n)?;
        let rhs = fast.boundary(slow.m * n)?;
        Ok(relative(lhs, rhs))
    }

    fn pair(
        &self,
        agent: usize,
    ) -> Result<(&SaturatedNussbaumParams, &SaturatedNussbaumParams), NussbaumError> {
        match (self.agent(agent), self.agent(agent + 1)) {
            (Some(s), Some(f)) => Ok((s, f)),
            _ => Err(invalid("agent", format!("no pair starts at agent {agent}"))),
        }
    }
}

fn relative(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_chain_values() {
        let chain = build_chain(3, 3.0, 3.0, 100.0, 4).unwrap();
        let b: Vec<f64> = chain.params().iter().map(|p| p.b).collect();
        assert_eq!(b, vec![3f64.powi(16), 81.0, 3.0]);
        let second = chain.agent(2).unwrap();
        assert!((second.a - 2.025).abs() < 1e-15);
        assert_eq!(second.t, 4000.0);
        let first = chain.agent(1).unwrap();
        let s = 1.0 + 81.0 + 81f64.powi(2) + 81f64.powi(3);
        assert_eq!(s, 538084.0);
        assert!((first.t - 4000.0 * s).abs() < 1e-6);
        assert!((first.a - 2.025 * 81f64.powi(3) / s).abs() < 1e-15);
    }

    #[test]
    fn single_agent_chain_is_the_input() {
        let chain = build_chain(1, 2.0, 5.0, 0.5, 4).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.params()[0], SaturatedNussbaumParams::new(2.0, 5.0, 0.5, 4).unwrap());
        assert_eq!(chain.pairs().count(), 0);
    }

    #[test]
    fn identities_hold_on_reference_chain() {
        let chain = build_chain(3, 3.0, 3.0, 100.0, 4).unwrap();
        for agent in 1..3 {
            for n in 1..=8 {
                assert!(chain.amplitude_residual(agent, n).unwrap() < 1e-12);
                assert!(chain.alignment_residual(agent, n).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn long_chain_overflow_names_agent() {
        let err = build_chain(6, 1.0, 10.0, 1.0, 4).unwrap_err();
        assert!(matches!(err, NussbaumError::ChainOverflow { .. }), "{err:?}");
    }

    #[test]
    fn invalid_inputs() {
        assert!(build_chain(0, 1.0, 2.0, 1.0, 4).is_err());
        assert!(build_chain(2, 1.0, 2.0, 1.0, 3).is_err());
    }
}
