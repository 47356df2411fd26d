//! Intervals on which two chained agents' sign-adjusted integrals are both
//! at most half of the faster agent's segment minimum.
//!
//! With `M = 4`, slow segment `m` covers fast segments `4m-3 ..= 4m`. Fast
//! segment `4m-2` always has a negative integral and `4m-1` a positive one,
//! while the slow integral on segment `m` has sign `(-1)^{m-1}`. Picking the
//! slow segment where `sign(ϱ_i)·G_i < 0` and the fast sub-segment where
//! `sign(ϱ_{i+1})·G_{i+1} < 0` gives, for period index `k ≥ 1`:
//!
//! | `sign ϱ_i` | `sign ϱ_{i+1}` | slow segment | fast segment |
//! |-----------|---------------|--------------|--------------|
//! | +         | +             | `2k`         | `8k-2`       |
//! | +         | −             | `2k`         | `8k-1`       |
//! | −         | −             | `2k-1`       | `8k-5`       |
//! | −         | +             | `2k-1`       | `8k-6`       |
//!
//! On the middle two thirds of the fast segment `|sin| ≥ 1/2`, which gives
//! the interval endpoints.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{invalid, NussbaumError, SaturatedNussbaumParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCase {
    Identical,
    Opposite,
}

/// Sign of an unknown control coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn of(value: f64) -> Self {
        if value < 0.0 {
            Direction::Negative
        } else {
            Direction::Positive
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Direction::Positive => 1.0,
            Direction::Negative => -1.0,
        }
    }

    pub const ALL: [Direction; 2] = [Direction::Positive, Direction::Negative];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma33Interval {
    pub chi_in: f64,
    pub chi_out: f64,
    pub k: u32,
    pub sign_case: SignCase,
    /// Direction of the slower agent the interval was built for.
    pub slow_direction: Direction,
    /// 1-based fast-agent segment containing the interval.
    pub fast_segment: u32,
    /// 1-based slow-agent segment containing the interval.
    pub slow_segment: u32,
}

impl Lemma33Interval {
    pub fn fast_direction(&self) -> Direction {
        match (self.sign_case, self.slow_direction) {
            (SignCase::Identical, d) => d,
            (SignCase::Opposite, Direction::Positive) => Direction::Negative,
            (SignCase::Opposite, Direction::Negative) => Direction::Positive,
        }
    }

    pub fn width(&self) -> f64 {
        self.chi_out - self.chi_in
    }
}

fn check_pair(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    k: u32,
) -> Result<(), NussbaumError> {
    slow.validate()?;
    fast.validate()?;
    if slow.m != 4 || fast.m != 4 {
        return Err(invalid("m", "interval construction assumes M = 4"));
    }
    if k == 0 {
        return Err(invalid("k", "period index starts at 1"));
    }
    Ok(())
}

/// Interval for a positive slower agent, in the identical or opposite case.
pub fn lemma33_interval(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    sign_case: SignCase,
    k: u32,
) -> Result<Lemma33Interval, NussbaumError> {
    let fast_direction = match sign_case {
        SignCase::Identical => Direction::Positive,
        SignCase::Opposite => Direction::Negative,
    };
    lemma33_interval_for_directions(slow, fast, Direction::Positive, fast_direction, k)
}

/// Interval for any combination of the two agents' directions.
pub fn lemma33_interval_for_directions(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    slow_direction: Direction,
    fast_direction: Direction,
    k: u32,
) -> Result<Lemma33Interval, NussbaumError> {
    check_pair(slow, fast, k)?;
    let (slow_segment, fast_segment) = match (slow_direction, fast_direction) {
        (Direction::Positive, Direction::Positive) => (2 * k, 8 * k - 2),
        (Direction::Positive, Direction::Negative) => (2 * k, 8 * k - 1),
        (Direction::Negative, Direction::Negative) => (2 * k - 1, 8 * k - 5),
        (Direction::Negative, Direction::Positive) => (2 * k - 1, 8 * k - 6),
    };
    let sign_case = if slow_direction == fast_direction {
        SignCase::Identical
    } else {
        SignCase::Opposite
    };
    let start = fast.boundary(fast_segment - 1)?;
    let end = fast.boundary(fast_segment)?;
    let margin = fast.scale(fast_segment)? * PI / 6.0;
    Ok(Lemma33Interval {
        chi_in: start + margin,
        chi_out: end - margin,
        k,
        sign_case,
        slow_direction,
        fast_segment,
        slow_segment,
    })
}

/// The slower agent's own interval on which `sign(ϱ_i)·G_i` stays below half
/// the fast minimum; it must contain `interval`.
pub fn slow_agent_interval(
    slow: &SaturatedNussbaumParams,
    fast: &SaturatedNussbaumParams,
    interval: &Lemma33Interval,
) -> Result<(f64, f64), NussbaumError> {
    let m = interval.slow_segment;
    let ratio = 0.5 * fast.extremum(interval.fast_segment)? / slow.extremum(m)?;
    if ratio > 1.0 {
        return Err(invalid(
            "pair",
            "slow extremum below half the fast extremum; not a chained pair",
        ));
    }
    let margin = slow.scale(m)? * ratio.asin();
    Ok((slow.boundary(m - 1)? + margin, slow.boundary(m)? - margin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nussbaum::build_chain;

    fn pair(b: f64) -> (SaturatedNussbaumParams, SaturatedNussbaumParams) {
        let chain = build_chain(2, 1.0, b, 1.0, 4).unwrap();
        (chain.params()[0], chain.params()[1])
    }

    #[test]
    fn identical_case_first_period() {
        let (slow, fast) = pair(3.0);
        let iv = lemma33_interval(&slow, &fast, SignCase::Identical, 1).unwrap();
        assert_eq!(iv.fast_segment, 6);
        assert!((iv.chi_in - 161.5 * PI).abs() < 1e-10);
        assert!((iv.chi_out - 323.5 * PI).abs() < 1e-10);
        assert!((iv.chi_in - 507.36).abs() < 0.01);
        assert!((iv.chi_out - 1016.3).abs() < 0.05);
    }

    #[test]
    fn opposite_case_uses_next_segment() {
        let (slow, fast) = pair(3.0);
        let iv = lemma33_interval(&slow, &fast, SignCase::Opposite, 1).unwrap();
        assert_eq!(iv.fast_segment, 7);
        // χ_6 = 364π, b^6 = 729
        assert!((iv.chi_in - (364.0 + 729.0 / 6.0) * PI).abs() < 1e-9);
        assert_eq!(iv.fast_direction(), Direction::Negative);
    }

    #[test]
    fn slow_interval_contains_fast_interval() {
        for b in [2.0, 3.0, 5.0] {
            let (slow, fast) = pair(b);
            for k in 1..=2 {
                for ds in Direction::ALL {
                    for df in Direction::ALL {
                        let iv = lemma33_interval_for_directions(&slow, &fast, ds, df, k).unwrap();
                        let (lo, hi) = slow_agent_interval(&slow, &fast, &iv).unwrap();
                        assert!(lo < iv.chi_in && hi > iv.chi_out, "b={b} k={k} {ds:?} {df:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn slow_interval_matches_closed_forms() {
        let (slow, fast) = pair(3.0);
        let iv = lemma33_interval(&slow, &fast, SignCase::Identical, 1).unwrap();
        let (lo, _) = slow_agent_interval(&slow, &fast, &iv).unwrap();
        let expected = slow.boundary(1).unwrap() + slow.b * slow.t * (1.0 / 18.0f64).asin();
        assert!((lo - expected).abs() < 1e-9 * expected);
        let iv = lemma33_interval(&slow, &fast, SignCase::Opposite, 1).unwrap();
        let (lo, _) = slow_agent_interval(&slow, &fast, &iv).unwrap();
        let expected = slow.boundary(1).unwrap() + slow.b * slow.t * (1.0 / 6.0f64).asin();
        assert!((lo - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn requires_m_four_and_positive_k() {
        let (slow, fast) = pair(3.0);
        assert!(lemma33_interval(&slow, &fast, SignCase::Identical, 0).is_err());
        let mut wide = fast;
        wide.m = 5;
        assert!(lemma33_interval(&slow, &wide, SignCase::Identical, 1).is_err());
    }
}
