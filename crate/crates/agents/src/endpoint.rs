//! Adapter for remote text-completion endpoints. One HTTP POST per query
//! carrying `{model, prompt, temperature, max_tokens}`; the completion text
//! is pulled out of the response by a configurable JSON pointer, which
//! covers OpenAI-style and bare completion servers alike.

use std::sync::Arc;
use std::time::Duration;

use phenolab_core::{Agent, AgentError, ChoiceQuery, PromptMode, QueryView};
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EndpointStyle {
    /// Completion text at `/choices/0/text`.
    #[default]
    OpenaiCompletions,
    /// Completion text at `/completion`.
    Bare,
}

impl EndpointStyle {
    fn default_pointer(self) -> &'static str {
        match self {
            EndpointStyle::OpenaiCompletions => "/choices/0/text",
            EndpointStyle::Bare => "/completion",
        }
    }
}

fn default_temperature() -> f64 {
    0.0
}
fn default_max_tokens_base() -> u32 {
    1
}
fn default_max_tokens_reasoning() -> u32 {
    300
}
fn default_retry_budget() -> u32 {
    3
}
fn default_timeout_s() -> u64 {
    60
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model_name: String,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    /// Completion budget for plain queries: one token forces a bare answer.
    #[serde(default = "default_max_tokens_base")]
    pub max_tokens_base: u32,
    /// Completion budget when a reasoning suffix is attached.
    #[serde(default = "default_max_tokens_reasoning")]
    pub max_tokens_reasoning: u32,
    #[serde(default = "default_retry_budget")]
    pub retry_budget: u32,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: u64,
    /// Environment variable holding the bearer token, if the endpoint needs
    /// one.
    #[serde(default)]
    pub api_key_env: Option<String>,
    /// Optional wrapper text around every prompt (provider-specific framing
    /// is deliberately not guessed).
    #[serde(default)]
    pub prompt_prefix: String,
    #[serde(default)]
    pub prompt_suffix: String,
    #[serde(default)]
    pub style: EndpointStyle,
    /// Overrides the style's JSON pointer to the completion text.
    #[serde(default)]
    pub completion_pointer: Option<String>,
}

impl EndpointConfig {
    pub fn max_tokens(&self, mode: PromptMode) -> u32 {
        match mode {
            PromptMode::Base => self.max_tokens_base,
            PromptMode::Cot | PromptMode::Sb => self.max_tokens_reasoning,
        }
    }
}

/// One line of the per-request audit trail.
#[derive(Debug, Clone, Serialize)]
pub struct RequestAudit {
    pub model: String,
    pub attempt: u32,
    pub status: String,
    pub elapsed_ms: u128,
    pub prompt_chars: usize,
}

type AuditSink = Arc<dyn Fn(&RequestAudit) + Send + Sync>;

/// Stateless endpoint agent; cheap to clone per episode.
#[derive(Clone)]
pub struct EndpointAgent {
    cfg: EndpointConfig,
    client: reqwest::blocking::Client,
    audit: Option<AuditSink>,
}

impl EndpointAgent {
    pub fn new(cfg: EndpointConfig) -> Self {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_s))
            .build()
            .expect("client construction");
        EndpointAgent { cfg, client, audit: None }
    }

    pub fn with_audit(mut self, sink: AuditSink) -> Self {
        self.audit = Some(sink);
        self
    }

    fn record(&self, audit: RequestAudit) {
        if let Some(sink) = &self.audit {
            sink(&audit);
        }
    }

    fn request_once(&self, prompt: &str, mode: PromptMode) -> Result<String, String> {
        let body = json!({
            "model": self.cfg.model_name,
            "prompt": prompt,
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_tokens(mode),
        });
        let mut req = self.client.post(&self.cfg.base_url).json(&body);
        if let Some(var) = &self.cfg.api_key_env {
            if let Ok(key) = std::env::var(var) {
                req = req.bearer_auth(key);
            }
        }
        let response = req.send().map_err(|e| format!("transport: {e}"))?;
        let status = response.status();
        if !status.is_success() {
            return Err(format!("http status {status}"));
        }
        let value: serde_json::Value =
            response.json().map_err(|e| format!("invalid json: {e}"))?;
        let pointer = self
            .cfg
            .completion_pointer
            .as_deref()
            .unwrap_or_else(|| self.cfg.style.default_pointer());
        value
            .pointer(pointer)
            .and_then(serde_json::Value::as_str)
            .map(ToString::to_string)
            .ok_or_else(|| format!("no completion text at `{pointer}`"))
    }
}

impl Agent for EndpointAgent {
    fn name(&self) -> &str {
        &self.cfg.model_name
    }

    fn choose(
        &mut self,
        query: &ChoiceQuery,
        _view: &QueryView,
        mode: PromptMode,
    ) -> Result<String, AgentError> {
        let prompt = format!(
            "{}{}{}",
            self.cfg.prompt_prefix,
            query.full_prompt(mode),
            self.cfg.prompt_suffix
        );
        let mut last_err = String::new();
        for attempt in 0..self.cfg.retry_budget.max(1) {
            let started = std::time::Instant::now();
            match self.request_once(&prompt, mode) {
                Ok(text) => {
                    self.record(RequestAudit {
                        model: self.cfg.model_name.clone(),
                        attempt,
                        status: "ok".into(),
                        elapsed_ms: started.elapsed().as_millis(),
                        prompt_chars: prompt.len(),
                    });
                    return Ok(text);
                }
                Err(err) => {
                    self.record(RequestAudit {
                        model: self.cfg.model_name.clone(),
                        attempt,
                        status: err.clone(),
                        elapsed_ms: started.elapsed().as_millis(),
                        prompt_chars: prompt.len(),
                    });
                    last_err = err;
                    // Exponential backoff between attempts.
                    if attempt + 1 < self.cfg.retry_budget {
                        std::thread::sleep(Duration::from_millis(50 << attempt));
                    }
                }
            }
        }
        Err(AgentError::Endpoint(last_err))
    }
}
