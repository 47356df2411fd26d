use serde::{Deserialize, Serialize};

use super::{compute_metrics, MetricsReport};
use crate::sim::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub metrics_a: MetricsReport,
    pub metrics_b: MetricsReport,
    /// `1 − MAI_a/MAI_b` per agent; `None` where `MAI_b = 0`.
    pub mai_reduction: Vec<Option<f64>>,
    /// Agents whose reduction is undefined.
    pub undefined_agents: Vec<usize>,
    /// `settling_a − settling_b` when both runs settle.
    pub settling_delta: Option<f64>,
}

pub fn compare_scenarios(a: &Trajectory, b: &Trajectory, consensus_tol: f64) -> Result<Comparison, String> {
    if a.n_agents != b.n_agents {
        return Err(format!("agent counts differ: {} vs {}", a.n_agents, b.n_agents));
    }
    let metrics_a = compute_metrics(a, consensus_tol);
    let metrics_b = compute_metrics(b, consensus_tol);
    let mai_reduction: Vec<Option<f64>> = metrics_a
        .mai
        .iter()
        .zip(&metrics_b.mai)
        .map(|(ma, mb)| (*mb > 0.0).then(|| 1.0 - ma / mb))
        .collect();
    let undefined_agents = mai_reduction
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none())
        .map(|(i, _)| i + 1)
        .collect();
    let settling_delta = match (metrics_a.settling_time, metrics_b.settling_time) {
        (Some(x), Some(y)) => Some(x - y),
        _ => None,
    };
    Ok(Comparison {
        metrics_a,
        metrics_b,
        mai_reduction,
        undefined_agents,
        settling_delta,
    })
}
