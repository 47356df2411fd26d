//! Scenario configuration: graph, agents, gain scheme and sim settings.
//!
//! Configs are JSON documents with a `schema_version` field. Parsing errors
//! and semantic validation errors both carry the offending field path.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::consensus::{AgentSpec, GainBounds, Graph};
use crate::nussbaum::{
    build_chain, validate_theorem_params, GainFunction, NussbaumChain, NussbaumError,
    TheoremConstraintReport, TraditionalNussbaumParams, DEFAULT_EXPONENT_CAP,
};
use crate::sim::SimConfig;

pub const SCHEMA_VERSION: u32 = 1;

const BUNDLED: &[(&str, &str)] = &[
    ("reference_saturated", include_str!("../configs/reference_saturated.json")),
    ("reference_traditional", include_str!("../configs/reference_traditional.json")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeConfig {
    /// 1-based node index.
    pub from: usize,
    pub to: usize,
    #[serde(default = "unit")]
    pub weight: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub nodes: usize,
    pub edges: Vec<EdgeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum GainScheme {
    /// Saturated family; `(a_n, b_n, t_n)` belong to the fastest (last)
    /// agent and the rest of the chain is derived.
    Saturated {
        a_n: f64,
        b_n: f64,
        t_n: f64,
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<u32>,
    },
    /// Exponential baseline; agent `i` uses frequency `1/β^i`.
    Traditional {
        alpha: f64,
        beta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent_cap: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    pub graph: GraphConfig,
    pub agents: Vec<AgentSpec>,
    pub gain_scheme: GainScheme,
    pub gain_bounds: GainBounds,
    #[serde(default)]
    pub sim: SimConfig,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("parse error at `{path}`: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown bundled scenario `{0}`")]
    UnknownBundled(String),
}

fn invalid(path: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|err| ConfigError::Parse {
            path: err.path().to_string(),
            source: err.into_inner(),
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, as lowercase hex.
    pub fn sha256(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn build_graph(&self) -> Result<Graph, ConfigError> {
        let n = self.graph.nodes;
        if n == 0 {
            return Err(invalid("graph.nodes", "need at least one node"));
        }
        let mut edges = Vec::with_capacity(self.graph.edges.len());
        for (k, edge) in self.graph.edges.iter().enumerate() {
            let path = format!("graph.edges[{k}]");
            if edge.from == 0 || edge.from > n || edge.to == 0 || edge.to > n {
                return Err(invalid(path, format!("endpoints must lie in 1..={n}")));
            }
            if edge.from == edge.to {
                return Err(invalid(path, "self-edges are not allowed"));
            }
            if !(edge.weight > 0.0 && edge.weight.is_finite()) {
                return Err(invalid(format!("{path}.weight"), "must be positive"));
            }
            edges.push((edge.from - 1, edge.to - 1, edge.weight));
        }
        let graph = Graph::from_edges(n, &edges).map_err(|e| invalid("graph", e))?;
        if !graph.is_connected() {
            return Err(invalid("graph", "graph is not connected"));
        }
        Ok(graph)
    }

    fn build_gains(&self) -> Result<Vec<GainFunction>, ConfigError> {
        let n = self.agents.len();
        let wrap = |e: NussbaumError| invalid("gain_scheme", e);
        match self.gain_scheme {
            GainScheme::Saturated {
                a_n,
                b_n,
                t_n,
                m,
                horizon,
            } => {
                let chain = build_chain(n, a_n, b_n, t_n, m).map_err(wrap)?;
                Ok(chain
                    .params()
                    .iter()
                    .map(|p| match horizon {
                        Some(h) => p.with_horizon(h),
                        None => *p,
                    })
                    .map(GainFunction::Saturated)
                    .collect())
            }
            GainScheme::Traditional {
                alpha,
                beta,
                exponent_cap,
            } => (1..=n as u32)
                .map(|i| {
                    let p = TraditionalNussbaumParams::new(alpha, beta, i)?
                        .with_exponent_cap(exponent_cap.unwrap_or(DEFAULT_EXPONENT_CAP));
                    p.validate()?;
                    Ok(GainFunction::Traditional(p))
                })
                .collect::<Result<_, _>>()
                .map_err(wrap),
        }
    }
}

/// A validated, ready-to-simulate scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    config: ScenarioConfig,
    graph: Graph,
    gains: Vec<GainFunction>,
}

impl Scenario {
    pub fn from_config(config: ScenarioConfig) -> Result<Self, ConfigError> {
        if config.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", config.schema_version),
            ));
        }
        let graph = config.build_graph()?;
        if config.agents.len() != config.graph.nodes {
            return Err(invalid(
                "agents",
                format!("{} agents for {} graph nodes", config.agents.len(), config.graph.nodes),
            ));
        }
        let b = config.gain_bounds;
        if !(b.rho_min > 0.0 && b.rho_min <= b.rho_max && b.rho_max.is_finite()) {
            return Err(invalid("gain_bounds", "need 0 < rho_min <= rho_max"));
        }
        for (i, agent) in config.agents.iter().enumerate() {
            agent.validate(i + 1, Some(&b)).map_err(|e| invalid(format!("agents[{i}]"), e))?;
        }
        config
            .sim
            .validate()
            .map_err(|e| invalid("sim", e))?;
        let gains = config.build_gains()?;
        Ok(Self {
            config,
            graph,
            gains,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Self::from_config(ScenarioConfig::from_json(text)?)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Names of the configs shipped with the library.
    pub fn bundled_names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(name, _)| *name)
    }

    pub fn bundled_json(name: &str) -> Option<&'static str> {
        BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
    }

    pub fn bundled(name: &str) -> Result<Self, ConfigError> {
        let text = Self::bundled_json(name).ok_or_else(|| ConfigError::UnknownBundled(name.to_string()))?;
        Self::from_json(text)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.config.agents
    }

    pub fn gains(&self) -> &[GainFunction] {
        &self.gains
    }

    pub fn sim_config(&self) -> SimConfig {
        self.config.sim
    }

    pub fn chain(&self) -> Option<NussbaumChain> {
        match self.config.gain_scheme {
            GainScheme::Saturated { a_n, b_n, t_n, m, .. } => {
                build_chain(self.agents().len(), a_n, b_n, t_n, m).ok()
            }
            GainScheme::Traditional { .. } => None,
        }
    }

    /// Bounds and `η̄` as they enter the parameter constraints.
    ///
    /// The adaptive law scales `χ̇_i` by `γ_i`, so the coefficients seen by the
    /// constraints are `ϱ_i/γ_i` and `η_i = 1/γ_i`.
    pub fn effective_constraint_inputs(&self) -> (f64, f64, f64) {
        let gammas = self.agents().iter().map(|a| a.gamma);
        let g_min = gammas.clone().fold(f64::INFINITY, f64::min);
        let g_max = gammas.fold(0.0, f64::max);
        let b = self.config.gain_bounds;
        (b.rho_min / g_max, b.rho_max / g_min, 1.0 / g_min)
    }

    /// Constraint report for the fastest agent's `(a_N, b_N)`; `None` for the
    /// exponential baseline, which has no such constraints.
    pub fn theorem_report(&self) -> Option<TheoremConstraintReport> {
        let GainScheme::Saturated { a_n, b_n, .. } = self.config.gain_scheme else {
            return None;
        };
        let (rho_min, rho_max, eta_bar) = self.effective_constraint_inputs();
        validate_theorem_params(self.agents().len(), rho_min, rho_max, eta_bar, a_n, b_n).ok()
    }
}
