//! Adaptive average consensus for first-order, linearly parameterized agents
//! whose control directions are unknown and may differ from agent to agent.
//!
//! The crate is organised bottom-up:
//!
//! - [`nussbaum`]: the saturated time-elongation Nussbaum family, its closed
//!   form integral, the inter-agent parameter chain, the exponential baseline
//!   family, interval certification helpers and the parameter-constraint
//!   validator.
//! - [`consensus`]: graph, plant and the distributed control/adaptation laws.
//! - [`sim`]: deterministic fixed-step integration and trajectory recording.
//! - [`analysis`]: metrics (MAI, settling), Lyapunov residual traces and
//!   numeric certification of the function-family properties.
//! - [`scenario`]: the JSON scenario schema and the bundled reference
//!   scenarios.

pub mod analysis;
pub mod consensus;
pub mod nussbaum;
pub mod scenario;
pub mod sim;

pub use scenario::{Scenario, ScenarioConfig};
