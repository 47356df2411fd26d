//! Saturated time-elongation Nussbaum family.
//!
//! On `χ ≥ 0` the function is a sequence of half-cosine segments. Segment
//! `n ≥ 1` covers `[χ_{n-1}, χ_n)`, has length `b^{n-1}·T·π` and value
//!
//! ```text
//! N(χ) = (-1)^{n-1} · a · cos((χ - χ_{n-1}) / (b^{n-1}·T))
//! ```
//!
//! so the gain never leaves `[-a, a]` while the integral
//! `G(χ) = ∫₀^χ N` swings with amplitude `a·T·b^{n-1}` on segment `n`.
//! `N` is extended evenly and `G` oddly to `χ < 0`.
//!
//! Segment boundaries are found by walking the segments one at a time rather
//! than inverting the geometric sum with a logarithm; for chains where `b` is
//! as large as `3^16` the logarithm loses the low bits that decide which side
//! of a boundary a point falls on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{invalid, NussbaumError, NussbaumFunction};

/// Default number of segments searched before giving up.
pub const DEFAULT_SEGMENT_HORIZON: u32 = 64;

fn default_horizon() -> u32 {
    DEFAULT_SEGMENT_HORIZON
}

/// Parameters `(a, b, T, M)` of one agent's saturated Nussbaum function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturatedNussbaumParams {
    /// Gain amplitude, `a > 0`.
    pub a: f64,
    /// Half-period growth ratio between consecutive segments, `b > 1`.
    pub b: f64,
    /// Base half-period scale, `T > 0`.
    pub t: f64,
    /// Frequency subdivision factor relative to the next agent, `M ≥ 4`.
    pub m: u32,
    /// Number of segments searched before reporting the horizon as exceeded.
    #[serde(default = "default_horizon")]
    pub horizon: u32,
}

/// Where an argument falls among the segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPosition {
    /// 1-based segment index `n`.
    pub index: u32,
    /// `|χ| - χ_{n-1}`.
    pub offset: f64,
    /// Left boundary `χ_{n-1}`.
    pub start: f64,
    /// Right boundary `χ_n`.
    pub end: f64,
    /// `b^{n-1}·T`; the segment spans `scale·π`.
    pub scale: f64,
}

impl SaturatedNussbaumParams {
    pub fn new(a: f64, b: f64, t: f64, m: u32) -> Result<Self, NussbaumError> {
        let params = Self {
            a,
            b,
            t,
            m,
            horizon: DEFAULT_SEGMENT_HORIZON,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_horizon(mut self, horizon: u32) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn validate(&self) -> Result<(), NussbaumError> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(invalid("a", format!("must be positive and finite, got {}", self.a)));
        }
        if !(self.b.is_finite() && self.b > 1.0) {
            return Err(invalid("b", format!("must exceed 1, got {}", self.b)));
        }
        if !(self.t.is_finite() && self.t > 0.0) {
            return Err(invalid("t", format!("must be positive and finite, got {}", self.t)));
        }
        if self.m < 4 {
            return Err(invalid("m", format!("must be at least 4, got {}", self.m)));
        }
        if self.horizon == 0 {
            return Err(invalid("horizon", "must be at least 1"));
        }
        Ok(())
    }

    /// Boundary `χ_n = T·π·Σ_{m=1}^{n} b^{m-1}`, with `χ_0 = 0`.
    pub fn boundary(&self, n: u32) -> Result<f64, NussbaumError> {
        if n == 0 {
            return Ok(0.0);
        }
        let mut end = 0.0;
        let mut scale = self.t;
        for index in 1..=n {
            end += scale * PI;
            if !end.is_finite() {
                return Err(NussbaumError::HorizonExceeded {
                    chi: f64::INFINITY,
                    segments: index,
                    overflow: true,
                });
            }
            if index < n {
                scale *= self.b;
            }
        }
        Ok(end)
    }

    /// Segment scale `b^{n-1}·T` for `n ≥ 1`.
    pub fn scale(&self, n: u32) -> Result<f64, NussbaumError> {
        if n == 0 {
            return Err(invalid("n", "segments are numbered from 1"));
        }
        let mut scale = self.t;
        for index in 1..n {
            scale *= self.b;
            if !scale.is_finite() {
                return Err(NussbaumError::HorizonExceeded {
                    chi: f64::INFINITY,
                    segments: index + 1,
                    overflow: true,
                });
            }
        }
        Ok(scale)
    }

    /// Extremum magnitude of the integral on segment `n`: `a·T·b^{n-1}`.
    pub fn extremum(&self, n: u32) -> Result<f64, NussbaumError> {
        Ok(self.a * self.scale(n)?)
    }

    /// Locates `|chi|` among the segments.
    pub fn locate(&self, chi: f64) -> Result<SegmentPosition, NussbaumError> {
        if !chi.is_finite() {
            return Err(NussbaumError::NonFinite(chi));
        }
        let target = chi.abs();
        let mut start = 0.0;
        let mut scale = self.t;
        for index in 1..=self.horizon {
            let end = start + scale * PI;
            if !end.is_finite() {
                return Err(NussbaumError::HorizonExceeded {
                    chi,
                    segments: index,
                    overflow: true,
                });
            }
            if target < end {
                return Ok(SegmentPosition {
                    index,
                    offset: target - start,
                    start,
                    end,
                    scale,
                });
            }
            start = end;
            scale *= self.b;
        }
        Err(NussbaumError::HorizonExceeded {
            chi,
            segments: self.horizon,
            overflow: false,
        })
    }

    /// The Nussbaum gain `N(χ)`.
    pub fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        let pos = self.locate(chi)?;
        let value = self.a * (pos.offset / pos.scale).cos();
        Ok(if pos.index % 2 == 1 { value } else { -value })
    }

    /// The integral `G(χ) = ∫₀^χ N(τ) dτ` in closed form.
    pub fn integral(&self, chi: f64) -> Result<f64, NussbaumError> {
        let pos = self.locate(chi)?;
        let magnitude = self.a * pos.scale * (pos.offset / pos.scale).sin();
        let value = if pos.index % 2 == 1 {
            magnitude
        } else {
            -magnitude
        };
        Ok(if chi < 0.0 { -value } else { value })
    }
}

impl NussbaumFunction for SaturatedNussbaumParams {
    fn gain(&self, chi: f64) -> Result<f64, NussbaumError> {
        SaturatedNussbaumParams::gain(self, chi)
    }

    fn gain_bound(&self) -> Option<f64> {
        Some(self.a)
    }
}

/// Free-function form of [`SaturatedNussbaumParams::boundary`].
pub fn segment_boundary(params: &SaturatedNussbaumParams, n: u32) -> Result<f64, NussbaumError> {
    params.boundary(n)
}
