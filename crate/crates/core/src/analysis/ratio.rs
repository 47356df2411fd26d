//! Ratio `G(χ)/χ` sampled at each segment's extremum.
//!
//! At the midpoint of segment `n` the ratio equals
//! `(−1)^{n−1}·a·b^{n−1} / (π·((b^{n−1}−1)/(b−1) + b^{n−1}/2))`, which tends to
//! `±2a(b−1)/(π(b+1))`: the averaged integral stays bounded rather than
//! sweeping to ±∞.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::nussbaum::{NussbaumError, SaturatedNussbaumParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheckReport {
    /// `(segment, G/χ at the segment's extremum)`
    pub ratio_sequence: Vec<(u32, f64)>,
    pub limiting_constant: f64,
    /// `|r_n − (−1)^{n−1}·limit| / limit` per segment.
    pub deviations: Vec<f64>,
    pub max_deviation_from_limit: f64,
    pub terminal_deviation: f64,
    pub sign_alternation_ok: bool,
}

pub fn ratio_limit(params: &SaturatedNussbaumParams) -> f64 {
    2.0 * params.a * (params.b - 1.0) / (PI * (params.b + 1.0))
}

pub fn check_nussbaum_ratio(params: &SaturatedNussbaumParams, n_segments: u32) -> Result<PropertyCheckReport, NussbaumError> {
    params.validate()?;
    let limit = ratio_limit(params);
    let mut ratio_sequence = Vec::with_capacity(n_segments as usize);
    let mut deviations = Vec::with_capacity(n_segments as usize);
    let mut sign_alternation_ok = true;
    for n in 1..=n_segments {
        let chi = params.boundary(n - 1)? + 0.5 * PI * params.scale(n)?;
        let ratio = params.integral(chi)? / chi;
        let expected_sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        sign_alternation_ok &= ratio * expected_sign > 0.0;
        deviations.push((ratio - expected_sign * limit).abs() / limit);
        ratio_sequence.push((n, ratio));
    }
    Ok(PropertyCheckReport {
        ratio_sequence,
        limiting_constant: limit,
        max_deviation_from_limit: deviations.iter().copied().fold(0.0, f64::max),
        terminal_deviation: deviations.last().copied().unwrap_or(f64::NAN),
        deviations,
        sign_alternation_ok,
    })
}
