//! Nussbaum-type gain functions.
//!
//! Two families are provided: the saturated time-elongation family, whose
//! gain is bounded by its amplitude `a` and whose half-periods grow
//! geometrically, and the exponential amplitude-elongation family used as a
//! baseline. Both implement [`NussbaumFunction`], which is what the closed
//! loop consumes.

mod chain;
mod lemma;
mod saturated;
mod theorem;
mod traditional;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chain::{build_chain, NussbaumChain};
pub use lemma::{
    lemma33_interval, lemma33_interval_for_directions, slow_agent_interval, Direction,
    Lemma33Interval, SignCase,
};
pub use saturated::{
    segment_boundary, SaturatedNussbaumParams, SegmentPosition, DEFAULT_SEGMENT_HORIZON,
};
pub use theorem::{synthesize_params, validate_theorem_params, TheoremConstraintReport};
pub use traditional::{TraditionalNussbaumParams, DEFAULT_EXPONENT_CAP};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NussbaumError {
    #[error("segment horizon exceeded: argument {chi} not reached within {segments} segments{}", if *.overflow { " (b^n overflow)" } else { "" })]
    HorizonExceeded { chi: f64, segments: u32, overflow: bool },
    #[error("exponent cap exceeded: alpha*|chi| = {exponent} > {cap}")]
    ExponentCapExceeded { exponent: f64, cap: f64 },
    #[error("parameter chain overflows at agent {agent}")]
    ChainOverflow { agent: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite argument {0}")]
    NonFinite(f64),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> NussbaumError {
    NussbaumError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// A scalar gain `N(χ)` used to probe an unknown control direction.
pub trait NussbaumFunction {
    fn gain(&self, chi: f64) -> Result<f64, NussbaumError>;

    /// Uniform bound on `|N(χ)|`, if the family has one.
    fn gain_bound(&self) -> Option<f64> {
        None
    }
}

/// Per-agent gain function as carried by a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GainFunction {
    Saturated(SaturatedNussbaumParams),
    Traditional(TraditionalNussbaumParams),
}

impl NussbaumFunction for GainFunction {
    fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        match self {
            GainFunction::Saturated(p) => p.gain(chi),
            GainFunction::Traditional(p) => p.gain(chi),
        }
    }

    fn gain_bound(&self) -> Option<f64> {
        match self {
            GainFunction::Saturated(p) => p.gain_bound(),
            GainFunction::Traditional(p) => p.gain_bound(),
        }
    }
}

impl<T: NussbaumFunction + ?Sized> NussbaumFunction for &T {
    fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        (**self).gain(chi)
    }

    fn gain_bound(&self) -> Option<f64> {
        (**self).gain_bound()
    }
}
