//! Grid certification of the interval lemmas for a chained pair.

use serde::{Deserialize, Serialize};

use crate::nussbaum::{
    invalid, lemma33_interval_for_directions, slow_agent_interval, Direction, Lemma33Interval,
    NussbaumError, SaturatedNussbaumParams,
};

/// Smallest grid accepted by the certifiers.
pub const MIN_GRID_POINTS: usize = 1000;

/// Relative slack on the threshold. The interval endpoints sit exactly where
/// the bound is attained, and the slower agent's parameters come out of the
/// chain recurrence, so equality holds there only up to accumulated rounding
/// (a few 1e-12 for the long chains at `χ ~ 1e20`).
pub const ENDPOINT_SLACK: f64 = 1e-9;

fn within(value: f64, bound: f64) -> bool {
    value <= bound + ENDPOINT_SLACK * bound.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalScan {
    pub lo: f64,
    pub hi: f64,
    pub threshold: f64,
    /// max of `sign(ϱ_i)·G_i` over the grid
    pub worst_slow: f64,
    /// max of `sign(ϱ_{i+1})·G_{i+1}` over the grid
    pub worst_fast: f64,
    pub passed: bool,
}

impl IntervalScan {
    pub fn slow_margin(&self) -> f64 {
        self.threshold - self.worst_slow
    }

    pub fn fast_margin(&self) -> f64 {
        self.threshold - self.worst_fast
    }

    pub fn worst_margin(&self) -> f64 {
        self.slow_margin().min(self.fast_margin())
    }
}

#[allow(clippy::too_many_arguments)]
pub fn scan_interval(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    slow_direction: Direction,
    fast_direction: Direction,
    lo: f64,
    hi: f64,
    threshold: f64,
    grid_points: usize,
) -> Result<IntervalScan, NussbaumError> {
    let mut worst_slow = f64::NEG_INFINITY;
    let mut worst_fast = f64::NEG_INFINITY;
    let last = grid_points.max(2) - 1;
    for k in 0..=last {
        let chi = lo + (hi - lo) * k as f64 / last as f64;
        worst_slow = worst_slow.max(slow_direction.sign() * slow.integral(chi)?);
        worst_fast = worst_fast.max(fast_direction.sign() * fast.integral(chi)?);
    }
    Ok(IntervalScan {
        lo,
        hi,
        threshold,
        worst_slow,
        worst_fast,
        passed: within(worst_slow, threshold) && within(worst_fast, threshold),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma33Certificate {
    pub interval: Lemma33Interval,
    /// Half the fast agent's segment minimum, `0.5·G^min_{i+1} < 0`.
    pub threshold: f64,
    pub scan: IntervalScan,
    /// The slow agent's own interval and its scan against the same threshold.
    pub slow_interval: (f64, f64),
    pub slow_interval_max: f64,
    pub contained: bool,
    /// Interval widened by 5% of the fast segment on each side; expected to fail.
    pub widened_probe: IntervalScan,
    pub passed: bool,
}

pub fn certify_lemma33(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    slow_direction: Direction,
    fast_direction: Direction,
    k: u32,
    grid_points: usize,
) -> Result<Lemma33Certificate, NussbaumError> {
    if grid_points < MIN_GRID_POINTS {
        return Err(invalid("grid_points", format!("need at least {MIN_GRID_POINTS}")));
    }
    let iv = lemma33_interval_for_directions(slow, fast, slow_direction, fast_direction, k)?;
    let threshold = -0.5 * fast.extremum(iv.fast_segment)?;
    let scan = scan_interval(slow, fast, slow_direction, fast_direction, iv.chi_in, iv.chi_out, threshold, grid_points)?;

    let (slo, shi) = slow_agent_interval(slow, fast, &iv)?;
    let mut slow_interval_max = f64::NEG_INFINITY;
    let last = grid_points - 1;
    for j in 0..=last {
        let chi = slo + (shi - slo) * j as f64 / last as f64;
        slow_interval_max = slow_interval_max.max(slow_direction.sign() * slow.integral(chi)?);
    }
    let contained = slo < iv.chi_in && shi > iv.chi_out;

    let eps = 0.05 * fast.scale(iv.fast_segment)? * std::f64::consts::PI;
    let widened_probe = scan_interval(
        slow,
        fast,
        slow_direction,
        fast_direction,
        iv.chi_in - eps,
        iv.chi_out + eps,
        threshold,
        grid_points,
    )?;

    Ok(Lemma33Certificate {
        passed: scan.passed && contained && threshold < 0.0 && within(slow_interval_max, threshold),
        interval: iv,
        threshold,
        scan,
        slow_interval: (slo, shi),
        slow_interval_max,
        contained,
        widened_probe,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma35Certificate {
    pub chi_in: f64,
    /// Fast agent's extremum on the segment before the interval.
    pub bound: f64,
    pub worst_slow: f64,
    pub worst_fast: f64,
    pub passed: bool,
}

/// Checks `sign(ϱ_j)·G_j(χ) ≤ G^max_{i+1}` on the segment preceding the
/// interval, for both agents and every `χ ∈ [0, χ^in]`. The grid is laid per
/// fast segment so the short early segments are resolved.
pub fn certify_lemma35(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    slow_direction: Direction,
    fast_direction: Direction,
    k: u32,
    grid_points: usize,
) -> Result<Lemma35Certificate, NussbaumError> {
    if grid_points < MIN_GRID_POINTS {
        return Err(invalid("grid_points", format!("need at least {MIN_GRID_POINTS}")));
    }
    let iv = lemma33_interval_for_directions(slow, fast, slow_direction, fast_direction, k)?;
    let bound = fast.extremum(iv.fast_segment - 1)?;
    let per_segment = (grid_points / iv.fast_segment as usize).max(64);
    let mut worst_slow = f64::NEG_INFINITY;
    let mut worst_fast = f64::NEG_INFINITY;
    for seg in 1..=iv.fast_segment {
        let lo = fast.boundary(seg - 1)?;
        let hi = if seg == iv.fast_segment { iv.chi_in } else { fast.boundary(seg)? };
        for j in 0..=per_segment {
            let chi = lo + (hi - lo) * j as f64 / per_segment as f64;
            worst_slow = worst_slow.max(slow_direction.sign() * slow.integral(chi)?);
            worst_fast = worst_fast.max(fast_direction.sign() * fast.integral(chi)?);
        }
    }
    Ok(Lemma35Certificate {
        chi_in: iv.chi_in,
        bound,
        worst_slow,
        worst_fast,
        passed: within(worst_slow, bound) && within(worst_fast, bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nussbaum::build_chain;

    #[test]
    fn reference_pair_identical_signs() {
        let chain = build_chain(2, 1.0, 3.0, 1.0, 4).unwrap();
        let (slow, fast) = (&chain.params()[0], &chain.params()[1]);
        let c = certify_lemma33(slow, fast, Direction::Positive, Direction::Positive, 1, 10_000).unwrap();
        assert!(c.passed, "{c:?}");
        assert!((c.threshold + 121.5).abs() < 1e-9);
        assert!(c.scan.worst_fast <= -121.5 * (1.0 - ENDPOINT_SLACK));
        assert!(c.scan.worst_margin() >= -ENDPOINT_SLACK * 121.5);
        assert!(!c.widened_probe.passed);
    }

    #[test]
    fn small_grid_rejected() {
        let chain = build_chain(2, 1.0, 3.0, 1.0, 4).unwrap();
        let (slow, fast) = (&chain.params()[0], &chain.params()[1]);
        assert!(certify_lemma33(slow, fast, Direction::Positive, Direction::Positive, 1, 10).is_err());
    }

    #[test]
    fn lemma35_holds_for_all_directions() {
        let chain = build_chain(2, 1.0, 3.0, 1.0, 4).unwrap();
        let (slow, fast) = (&chain.params()[0], &chain.params()[1]);
        for ds in Direction::ALL {
            for df in Direction::ALL {
                let c = certify_lemma35(slow, fast, ds, df, 1, 10_000).unwrap();
                assert!(c.passed, "{ds:?} {df:?} {c:?}");
            }
        }
    }
}
