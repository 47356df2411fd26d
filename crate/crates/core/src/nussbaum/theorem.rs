//! Parameter constraints for the fastest agent's `(a_N, b_N)`.
//!
//! With `κ = (N-1)ρ_max/b_N − ρ_min/2` and `ξ = N/(b_N−1) + (N+4)/6` the
//! boundedness argument needs
//!
//! ```text
//! b_N > 2(N-1)·ρ_max/ρ_min
//! a_N > max{ 2η̄π / (ρ_min(b_N − 1)),  −η̄πξ/κ }
//! ```
//!
//! The `b_N` bound is equivalent to `κ < 0`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{invalid, NussbaumError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremConstraintReport {
    pub n_agents: usize,
    pub rho_min: f64,
    pub rho_max: f64,
    pub eta_bar: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub kappa: f64,
    pub xi: f64,
    pub b_lower_bound: f64,
    pub a_lower_bound: f64,
    pub b_above_one: bool,
    pub b_bound_satisfied: bool,
    pub a_bound_satisfied: bool,
    pub kappa_negative: bool,
    pub diagnostics: Vec<String>,
}

impl TheoremConstraintReport {
    pub fn all_satisfied(&self) -> bool {
        self.b_above_one && self.b_bound_satisfied && self.a_bound_satisfied && self.kappa_negative
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl fmt::Display for TheoremConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "agents = {}, rho in [{}, {}], eta_bar = {}",
            self.n_agents, self.rho_min, self.rho_max, self.eta_bar
        )?;
        writeln!(f, "a_N = {}, b_N = {}", self.a_n, self.b_n)?;
        writeln!(f, "kappa = {}, xi = {}", self.kappa, self.xi)?;
        writeln!(f, "[{}] b_N > 1", verdict(self.b_above_one))?;
        writeln!(
            f,
            "[{}] b_N > {} (2(N-1) rho_max/rho_min)",
            verdict(self.b_bound_satisfied),
            self.b_lower_bound
        )?;
        writeln!(f, "[{}] kappa < 0", verdict(self.kappa_negative))?;
        writeln!(
            f,
            "[{}] a_N > {}",
            verdict(self.a_bound_satisfied),
            self.a_lower_bound
        )?;
        for d in &self.diagnostics {
            writeln!(f, "note: {d}")?;
        }
        write!(f, "overall: {}", verdict(self.all_satisfied()))
    }
}

fn check_inputs(n_agents: usize, rho_min: f64, rho_max: f64, eta_bar: f64) -> Result<(), NussbaumError> {
    if n_agents == 0 {
        return Err(invalid("n_agents", "need at least one agent"));
    }
    if !(rho_min > 0.0 && rho_min <= rho_max && rho_max.is_finite()) {
        return Err(invalid(
            "rho",
            format!("need 0 < rho_min <= rho_max, got [{rho_min}, {rho_max}]"),
        ));
    }
    if !(eta_bar > 0.0 && eta_bar.is_finite()) {
        return Err(invalid("eta_bar", format!("must be positive, got {eta_bar}")));
    }
    Ok(())
}

fn b_bound(n_agents: usize, rho_min: f64, rho_max: f64) -> f64 {
    2.0 * (n_agents as f64 - 1.0) * rho_max / rho_min
}

pub fn validate_theorem_params(
    n_agents: usize,
    rho_min: f64,
    rho_max: f64,
    eta_bar: f64,
    a_n: f64,
    b_n: f64,
) -> Result<TheoremConstraintReport, NussbaumError> {
    check_inputs(n_agents, rho_min, rho_max, eta_bar)?;
    let n = n_agents as f64;
    let mut diagnostics = Vec::new();

    let kappa = (n - 1.0) * rho_max / b_n - rho_min / 2.0;
    let xi = n / (b_n - 1.0) + (n + 4.0) / 6.0;
    let b_lower_bound = b_bound(n_agents, rho_min, rho_max);
    let b_above_one = b_n > 1.0;
    if !b_above_one {
        diagnostics.push(format!("b_N = {b_n} does not exceed 1"));
    }

    let first = 2.0 * eta_bar * PI / (rho_min * (b_n - 1.0));
    let a_lower_bound = if kappa == 0.0 {
        diagnostics.push("kappa = 0: the second a_N bound is undefined".to_string());
        f64::INFINITY
    } else {
        first.max(-eta_bar * PI * xi / kappa)
    };
    if kappa > 0.0 {
        diagnostics.push(format!(
            "kappa = {kappa} > 0: no a_N can make kappa + eta_bar*pi*xi/a_N negative"
        ));
    }

    Ok(TheoremConstraintReport {
        n_agents,
        rho_min,
        rho_max,
        eta_bar,
        a_n,
        b_n,
        kappa,
        xi,
        b_lower_bound,
        a_lower_bound,
        b_above_one,
        b_bound_satisfied: b_above_one && b_n > b_lower_bound,
        a_bound_satisfied: b_above_one && a_n > a_lower_bound,
        kappa_negative: kappa < 0.0,
        diagnostics,
    })
}

/// Smallest-margin `(a_N, b_N)` that satisfies every constraint, scaled by
/// `margin > 1`.
pub fn synthesize_params(
    n_agents: usize,
    rho_min: f64,
    rho_max: f64,
    eta_bar: f64,
    margin: f64,
) -> Result<(f64, f64), NussbaumError> {
    check_inputs(n_agents, rho_min, rho_max, eta_bar)?;
    if !(margin > 1.0 && margin.is_finite()) {
        return Err(invalid("margin", format!("must exceed 1, got {margin}")));
    }
    let b_n = (margin * b_bound(n_agents, rho_min, rho_max)).max(margin);
    let n = n_agents as f64;
    let kappa = (n - 1.0) * rho_max / b_n - rho_min / 2.0;
    let xi = n / (b_n - 1.0) + (n + 4.0) / 6.0;
    let first = 2.0 * eta_bar * PI / (rho_min * (b_n - 1.0));
    let a_n = margin * first.max(-eta_bar * PI * xi / kappa);
    if !(a_n.is_finite() && b_n.is_finite()) {
        return Err(invalid("margin", "synthesized parameters overflow"));
    }
    Ok((a_n, b_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_scenario_fails_b_bound() {
        let r = validate_theorem_params(3, 1.8, 2.2, 0.1, 3.0, 3.0).unwrap();
        assert!((r.b_lower_bound - 4.0 * 2.2 / 1.8).abs() < 1e-12);
        assert!((r.b_lower_bound - 4.8889).abs() < 1e-4);
        assert!(!r.b_bound_satisfied);
        assert!(!r.kappa_negative);
        assert!(!r.all_satisfied());
    }

    #[test]
    fn single_agent_needs_only_b_above_one() {
        let r = validate_theorem_params(1, 1.0, 3.0, 0.5, 100.0, 1.5).unwrap();
        assert_eq!(r.b_lower_bound, 0.0);
        assert_eq!(r.kappa, -0.5);
        assert!(r.b_bound_satisfied);
        assert!(r.all_satisfied(), "{r}");
    }

    #[test]
    fn kappa_zero_is_reported_not_panicking() {
        // (N-1)ρ_max/b_N = ρ_min/2  with N=2, ρ=1, b=2
        let r = validate_theorem_params(2, 1.0, 1.0, 0.1, 10.0, 2.0).unwrap();
        assert_eq!(r.kappa, 0.0);
        assert!(r.a_lower_bound.is_infinite());
        assert!(!r.all_satisfied());
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn synthesized_reference_values() {
        let (a, b) = synthesize_params(3, 1.8, 2.2, 0.1, 1.1).unwrap();
        assert!((b - 1.1 * 4.0 * 2.2 / 1.8).abs() < 1e-12);
        assert!((b - 5.378).abs() < 1e-3);
        let r = validate_theorem_params(3, 1.8, 2.2, 0.1, a, b).unwrap();
        assert!(r.all_satisfied(), "{r}");
        assert_eq!(synthesize_params(1, 0.3, 0.9, 1.0, 2.0).unwrap().1, 2.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(validate_theorem_params(0, 1.0, 2.0, 0.1, 1.0, 2.0).is_err());
        assert!(validate_theorem_params(2, 2.0, 1.0, 0.1, 1.0, 2.0).is_err());
        assert!(validate_theorem_params(2, 1.0, 2.0, 0.0, 1.0, 2.0).is_err());
        assert!(synthesize_params(2, 1.0, 2.0, 0.1, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn synthesize_then_validate_passes(
            n in 1usize..12,
            rho_min in 0.05f64..5.0,
            spread in 1.0f64..4.0,
            eta in 0.001f64..5.0,
            margin in 1.001f64..3.0,
        ) {
            let rho_max = rho_min * spread;
            let (a, b) = synthesize_params(n, rho_min, rho_max, eta, margin).unwrap();
            let r = validate_theorem_params(n, rho_min, rho_max, eta, a, b).unwrap();
            prop_assert!(r.all_satisfied(), "{}", r);
        }
    }
}
