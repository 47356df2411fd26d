//! Metrics and numeric certificates computed from trajectories and gain families.

mod certify;
mod compare;
mod lyapunov;
mod metrics;
mod ratio;

pub use certify::{
    certify_lemma33, certify_lemma35, scan_interval, IntervalScan, Lemma33Certificate,
    Lemma35Certificate, ENDPOINT_SLACK, MIN_GRID_POINTS,
};
pub use compare::{compare_scenarios, Comparison};
pub use lyapunov::{
    lyapunov_rate, lyapunov_rate_assembled, lyapunov_trace, lyapunov_trace_with, lyapunov_value,
    LyapunovTrace,
};
pub use metrics::{compute_metrics, MetricsReport, DEFAULT_CONSENSUS_TOL};
pub use ratio::{check_nussbaum_ratio, ratio_limit, PropertyCheckReport};

/// Quadrature rule used to accumulate integrals over recorded samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    #[default]
    Trapezoid,
    /// Composite Simpson on a uniform grid, fourth order.
    Simpson,
}

impl Quadrature {
    pub fn cumulative(self, times: &[f64], values: &[f64]) -> Vec<f64> {
        match self {
            Quadrature::Trapezoid => cumulative_trapezoid(times, values),
            Quadrature::Simpson => cumulative_simpson(times, values),
        }
    }
}

/// Cumulative composite Simpson over uniformly spaced `times`.
///
/// Even indices use the standard three-point panels; the first odd point
/// uses the one-interval form `h/12·(5f₀ + 8f₁ − f₂)` and later odd points
/// chain panels from there. Falls back to the trapezoid for two samples.
pub fn cumulative_simpson(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        return cumulative_trapezoid(times, values);
    }
    let mut out = vec![0.0; n];
    let h1 = times[1] - times[0];
    out[1] = h1 / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
    for k in 2..n {
        let h = 0.5 * (times[k] - times[k - 2]);
        out[k] = out[k - 2] + h / 3.0 * (values[k - 2] + 4.0 * values[k - 1] + values[k]);
    }
    out
}

/// Cumulative trapezoid of `values` over `times`, starting at 0.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(values.len());
    for k in 0..values.len() {
        if k > 0 {
            acc += 0.5 * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let t: Vec<f64> = (0..11).map(|k| k as f64 * 0.1).collect();
        let f: Vec<f64> = t.iter().map(|t| 2.0 * t + 1.0).collect();
        let c = cumulative_trapezoid(&t, &f);
        assert_eq!(c[0], 0.0);
        assert!((c[10] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let t: Vec<f64> = (0..9).map(|k| k as f64 * 0.25).collect();
        let f: Vec<f64> = t.iter().map(|t| t * t * t - t).collect();
        let c = cumulative_simpson(&t, &f);
        for (k, tk) in t.iter().enumerate().skip(2).step_by(2) {
            let exact = tk.powi(4) / 4.0 - tk * tk / 2.0;
            assert!((c[k] - exact).abs() < 1e-12, "{k}");
        }
        let q: Vec<f64> = t.iter().map(|t| t * t).collect();
        let cq = cumulative_simpson(&t, &q);
        for (k, tk) in t.iter().enumerate() {
            assert!((cq[k] - tk.powi(3) / 3.0).abs() < 1e-12, "{k}");
        }
    }
}
