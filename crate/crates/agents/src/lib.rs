//! Agents: built-in generative oracles used for baselines and
//! parameter-recovery studies, plus an adapter for remote text-completion
//! endpoints.

mod endpoint;
mod oracle;

pub use endpoint::{EndpointAgent, EndpointConfig, EndpointStyle, RequestAudit};
pub use oracle::{build_oracle, softmax_sample, OracleParams};

use phenolab_core::{Agent, SeededStream};
use serde::{Deserialize, Serialize};

/// Agent configuration as it appears in run configs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentSpec {
    Oracle(OracleParams),
    Endpoint(EndpointConfig),
}

impl AgentSpec {
    /// Instantiates a fresh per-episode agent. Oracle randomness comes from
    /// the supplied stream, so runs replay exactly.
    pub fn instantiate(&self, stream: SeededStream) -> Box<dyn Agent> {
        match self {
            AgentSpec::Oracle(params) => build_oracle(params.clone(), stream),
            AgentSpec::Endpoint(cfg) => Box::new(EndpointAgent::new(cfg.clone())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AgentSpec::Oracle(params) => format!("oracle:{}", params.name()),
            AgentSpec::Endpoint(cfg) => format!("endpoint:{}", cfg.model_name),
        }
    }
}
