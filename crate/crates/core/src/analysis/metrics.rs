use serde::{Deserialize, Serialize};

use crate::sim::Trajectory;

/// Spread below which agents count as agreed.
pub const DEFAULT_CONSENSUS_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Maximum absolute input per agent over the recorded samples.
    pub mai: Vec<f64>,
    /// First recorded time after which the spread stays within tolerance;
    /// `None` when the run never settles.
    pub settling_time: Option<f64>,
    pub final_spread: f64,
    pub consensus_tolerance_used: f64,
}

pub fn compute_metrics(trajectory: &Trajectory, consensus_tol: f64) -> MetricsReport {
    let n = trajectory.n_agents;
    let mut mai = vec![0.0f64; n];
    for s in &trajectory.samples {
        for (m, u) in mai.iter_mut().zip(&s.u) {
            *m = m.max(u.abs());
        }
    }
    // scan backwards for the last sample outside tolerance
    let mut settling_time = None;
    for s in trajectory.samples.iter().rev() {
        if s.spread() > consensus_tol {
            break;
        }
        settling_time = Some(s.t);
    }
    MetricsReport {
        mai,
        settling_time,
        final_spread: trajectory.last().map_or(f64::NAN, |s| s.spread()),
        consensus_tolerance_used: consensus_tol,
    }
}
