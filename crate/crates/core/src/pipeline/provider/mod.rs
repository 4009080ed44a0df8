//! Completion backends: an OpenAI-compatible HTTP client, a replay provider
//! over recorded transcripts, and a fault injector wrapping either.

mod fault;
mod http;
mod replay;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::calc::CalcOp;

pub use fault::{FaultKind, FaultProvider, FaultSchedule};
pub use http::HttpProvider;
pub use replay::{ReplayEntry, ReplayProvider, ToolRecord};

/// Model strength; steps 1, 2 and 4 use the light model by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Light,
    Strong,
}

impl Role {
    pub fn default_for_step(step: u8) -> Role {
        match step {
            1 | 2 | 4 => Role::Light,
            _ => Role::Strong,
        }
    }
}

/// A step and optional sub-step tag, displayed as `3-1` or `5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepKey {
    pub step: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_step: Option<String>,
}

impl StepKey {
    pub fn new(step: u8) -> Self {
        StepKey { step, sub_step: None }
    }

    pub fn sub(step: u8, tag: &str) -> Self {
        StepKey {
            step,
            sub_step: Some(tag.to_string()),
        }
    }

    pub fn tag(&self) -> String {
        match &self.sub_step {
            Some(s) => s.clone(),
            None => self.step.to_string(),
        }
    }
}

impl fmt::Display for StepKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolRequest {
    pub id: String,
    pub name: String,
    pub args: Vec<f64>,
}

/// A tool invocation together with the text handed back to the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolExchange {
    pub request: ToolRequest,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToolSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [&'static str],
}

impl ToolSpec {
    pub fn calculator() -> Vec<ToolSpec> {
        CalcOp::ALL
            .iter()
            .map(|op| ToolSpec {
                name: op.name(),
                description: op.description(),
                params: if op.arity() == 1 { &["x"] } else { &["a", "b"] },
            })
            .collect()
    }
}

pub struct CompletionRequest<'a> {
    pub key: &'a StepKey,
    pub role: Role,
    pub model: &'a str,
    pub prompt: &'a str,
    pub tools: &'a [ToolSpec],
    /// Tool calls already answered in this step, oldest first.
    pub history: &'a [ToolExchange],
    /// Trial index, used by fault injection.
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reply {
    Final(String),
    Tool(ToolRequest),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProviderError {
    #[error("no recorded completion for step {key} (prompt {hash})")]
    NoRecording { key: String, hash: String },
    #[error("several recordings match step {0}")]
    AmbiguousRecording(String),
    #[error("cannot load replay data {path}: {message}")]
    Replay { path: String, message: String },
    #[error("environment variable {0} is not set")]
    MissingCredentials(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed provider response: {0}")]
    BadResponse(String),
    #[error("injected provider fault")]
    Injected,
    #[error("invalid provider setting: {0}")]
    Config(String),
}

impl ProviderError {
    /// Configuration errors abort a run instead of being recorded in it.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            ProviderError::MissingCredentials(_)
                | ProviderError::Config(_)
                | ProviderError::Replay { .. }
        )
    }
}

/// One completion turn. Implementations must be safe to call from several
/// threads at once.
pub trait Provider: Send + Sync {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError>;
}

impl<P: Provider + ?Sized> Provider for &P {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        (**self).complete(req)
    }
}

impl<P: Provider + ?Sized> Provider for Box<P> {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        (**self).complete(req)
    }
}

impl<P: Provider + ?Sized> Provider for std::sync::Arc<P> {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        (**self).complete(req)
    }
}

pub fn prompt_hash(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub light_model: String,
    pub strong_model: String,
    /// Role per step, index 0 is step 1.
    pub roles: [Role; 6],
    pub base_url: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub retries: u32,
    pub temperature: f64,
    /// Upper bound on tool calls within one step.
    pub max_tool_calls: usize,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig {
            light_model: "gpt-3.5-turbo".into(),
            strong_model: "gpt-4".into(),
            roles: [1, 2, 3, 4, 5, 6].map(Role::default_for_step),
            base_url: "https://api.openai.com/v1".into(),
            api_key_env: "OPENAI_API_KEY".into(),
            timeout_secs: 120,
            retries: 2,
            temperature: 0.0,
            max_tool_calls: 64,
        }
    }
}

impl ProviderConfig {
    pub fn role(&self, step: u8) -> Role {
        self.roles
            .get(usize::from(step.saturating_sub(1)))
            .copied()
            .unwrap_or(Role::Strong)
    }

    pub fn model(&self, role: Role) -> &str {
        match role {
            Role::Light => &self.light_model,
            Role::Strong => &self.strong_model,
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

/// Textual provider selection: `live`, `replay:<path>` or
/// `fault:<schedule>[@<inner>]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProviderSpec {
    Live,
    Replay(PathBuf),
    Fault {
        schedule: FaultSchedule,
        inner: Option<Box<ProviderSpec>>,
    },
}

impl FromStr for ProviderSpec {
    type Err = ProviderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "live" {
            return Ok(ProviderSpec::Live);
        }
        if let Some(path) = s.strip_prefix("replay:") {
            if path.is_empty() {
                return Err(ProviderError::Config("replay needs a path".into()));
            }
            return Ok(ProviderSpec::Replay(PathBuf::from(path)));
        }
        if let Some(rest) = s.strip_prefix("fault:") {
            let (sched, inner) = match rest.split_once('@') {
                Some((a, b)) => (a, Some(Box::new(b.parse()?))),
                None => (rest, None),
            };
            return Ok(ProviderSpec::Fault {
                schedule: sched.parse()?,
                inner,
            });
        }
        Err(ProviderError::Config(format!("unknown provider {s:?}")))
    }
}

impl ProviderSpec {
    /// Builds the backend. `default_replay` stands in for a fault spec
    /// without an inner provider.
    pub fn build(
        &self,
        config: &ProviderConfig,
        default_replay: Option<&std::path::Path>,
    ) -> Result<Box<dyn Provider>, ProviderError> {
        match self {
            ProviderSpec::Live => Ok(Box::new(HttpProvider::from_env(config)?)),
            ProviderSpec::Replay(path) => Ok(Box::new(ReplayProvider::load(path)?)),
            ProviderSpec::Fault { schedule, inner } => {
                let inner = match inner {
                    Some(spec) => spec.build(config, default_replay)?,
                    None => match default_replay {
                        Some(p) => Box::new(ReplayProvider::load(p)?),
                        None => {
                            return Err(ProviderError::Config(
                                "fault provider needs an inner provider (fault:<schedule>@<provider>)"
                                    .into(),
                            ))
                        }
                    },
                };
                Ok(Box::new(FaultProvider::new(inner, schedule.clone())))
            }
        }
    }
}
