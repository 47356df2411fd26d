//! Communication graph, agent plants and the distributed adaptive laws.
//!
//! Each agent obeys `ẋ_i = ϱ_i·u_i + ψ_i(x_i)ᵀθ_i` with unknown `ϱ_i` (of
//! either sign) and unknown `θ_i`. The controller only uses its own regressor
//! and the combined error `e_i = Σ_j a_ij (x_i − x_j)`:
//!
//! ```text
//! u_Ni = e_i + ψ_iᵀθ̂_i        u_i = −N_i(χ_i)·u_Ni
//! θ̂̇_i = ζ_i·ψ_i·e_i           χ̇_i = γ_i·e_i·u_Ni
//! ```

mod agent;
mod control;
mod graph;
mod regressor;

use thiserror::Error;

use crate::nussbaum::NussbaumError;

pub use agent::{AgentSpec, GainBounds};
pub use control::{closed_loop_derivative, control_step, ControlOutputs, SystemState};
pub use graph::Graph;
pub use regressor::Regressor;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("graph: {0}")]
    Graph(String),
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    Dimension {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("agent {agent}: {source}")]
    Gain {
        agent: usize,
        #[source]
        source: NussbaumError,
    },
    #[error("agent {agent}: {reason}")]
    Agent { agent: usize, reason: String },
}

pub(crate) fn expect_len(what: &'static str, got: usize, expected: usize) -> Result<(), DynamicsError> {
    if got == expected {
        Ok(())
    } else {
        Err(DynamicsError::Dimension { what, got, expected })
    }
}
