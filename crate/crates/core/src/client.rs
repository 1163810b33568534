//! Text-completion clients: the abstract contract, a scripted test double and
//! an HTTP implementation.

use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const SCRIPT_SCHEMA: &str = "client-script.v1";
pub const API_KEY_ENV: &str = "QGEN_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClientParams {
    pub max_output_tokens: u32,
    pub temperature: f64,
    pub timeout_ms: u64,
    pub max_retries: u32,
}

impl Default for ClientParams {
    fn default() -> Self {
        ClientParams {
            max_output_tokens: 1024,
            temperature: 0.7,
            timeout_ms: 30_000,
            max_retries: 3,
        }
    }
}

impl ClientParams {
    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    pub fn check(&self) -> Result<()> {
        if self.max_output_tokens == 0 {
            return Err(Error::InvalidRequest("max_output_tokens must be positive".into()));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(Error::InvalidRequest("temperature must be >= 0".into()));
        }
        Ok(())
    }
}

/// Anything that turns a prompt into raw text.
///
/// Implementations must tolerate concurrent calls from independent requests.
pub trait CompletionClient: Send + Sync {
    fn complete(&self, prompt: &str, params: &ClientParams) -> Result<String>;

    /// Identical prompts and params produce identical output.
    fn is_deterministic(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptedResponse {
    Text(String),
    Failure { error: String },
}

/// A `client-script.v1` transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientScript {
    pub schema: String,
    pub responses: Vec<ScriptedResponse>,
}

/// Replays one scripted response per call. Once the script is exhausted the
/// last response repeats.
#[derive(Debug)]
pub struct ScriptedClient {
    responses: Vec<ScriptedResponse>,
    calls: Mutex<Vec<String>>,
}

impl ScriptedClient {
    pub fn new<I, S>(responses: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_responses(responses.into_iter().map(|r| ScriptedResponse::Text(r.into())).collect())
    }

    pub fn from_responses(responses: Vec<ScriptedResponse>) -> Self {
        ScriptedClient { responses, calls: Mutex::new(Vec::new()) }
    }

    pub fn from_script(script: ClientScript) -> Result<Self> {
        if script.schema != SCRIPT_SCHEMA {
            return Err(Error::Schema(format!("expected `{SCRIPT_SCHEMA}`, found `{}`", script.schema)));
        }
        if script.responses.is_empty() {
            return Err(Error::Schema("client script has no responses".into()));
        }
        Ok(Self::from_responses(script.responses))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let script: ClientScript = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_script(script)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&crate::error::read_file(path)?)
    }

    /// Prompts received so far, in call order.
    pub fn prompts(&self) -> Vec<String> {
        self.calls.lock().expect("scripted client lock").clone()
    }

    pub fn call_count(&self) -> usize {
        self.calls.lock().expect("scripted client lock").len()
    }
}

impl CompletionClient for ScriptedClient {
    fn complete(&self, prompt: &str, _params: &ClientParams) -> Result<String> {
        let mut calls = self.calls.lock().expect("scripted client lock");
        let idx = calls.len().min(self.responses.len().saturating_sub(1));
        calls.push(prompt.to_string());
        match self.responses.get(idx) {
            Some(ScriptedResponse::Text(text)) => Ok(text.clone()),
            Some(ScriptedResponse::Failure { error }) => Err(Error::ClientFailure(error.clone())),
            None => Err(Error::ClientFailure("empty script".into())),
        }
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

/// Request/response body layout of the remote completion endpoint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProviderProfile {
    /// `{model, messages:[{role, content}], max_tokens, temperature}` answered
    /// with `choices[0].message.content`.
    #[default]
    OpenaiChat,
    /// `{model, prompt, max_tokens, temperature}` answered with `{text}`.
    Plain,
}

impl ProviderProfile {
    fn request_body(self, model: &str, prompt: &str, params: &ClientParams) -> Value {
        match self {
            ProviderProfile::OpenaiChat => json!({
                "model": model,
                "messages": [{"role": "user", "content": prompt}],
                "max_tokens": params.max_output_tokens,
                "temperature": params.temperature,
            }),
            ProviderProfile::Plain => json!({
                "model": model,
                "prompt": prompt,
                "max_tokens": params.max_output_tokens,
                "temperature": params.temperature,
            }),
        }
    }

    fn extract_text(self, body: &Value) -> Option<String> {
        let text = match self {
            ProviderProfile::OpenaiChat => body.pointer("/choices/0/message/content"),
            ProviderProfile::Plain => body.get("text"),
        };
        text.and_then(Value::as_str).map(str::to_string)
    }
}

#[derive(Debug, Clone)]
pub struct HttpCompletionClient {
    endpoint: String,
    model: String,
    profile: ProviderProfile,
    api_key: Option<String>,
}

impl HttpCompletionClient {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, profile: ProviderProfile) -> Self {
        HttpCompletionClient {
            endpoint: endpoint.into(),
            model: model.into(),
            profile,
            api_key: None,
        }
    }

    pub fn with_api_key(mut self, key: Option<String>) -> Self {
        self.api_key = key;
        self
    }

    /// Reads the credential from `QGEN_API_KEY`.
    pub fn with_env_key(self) -> Self {
        let key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        self.with_api_key(key)
    }
}

impl CompletionClient for HttpCompletionClient {
    fn complete(&self, prompt: &str, params: &ClientParams) -> Result<String> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(params.timeout()))
            .build()
            .into();
        let body = self.profile.request_body(&self.model, prompt, params).to_string();
        let mut request = agent.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request
            .send(body.as_str())
            .map_err(|e| Error::ClientFailure(e.to_string()))?;
        let raw = response
            .body_mut()
            .read_to_string()
            .map_err(|e| Error::ClientFailure(e.to_string()))?;
        let value: Value =
            serde_json::from_str(&raw).map_err(|e| Error::ClientFailure(format!("response is not JSON: {e}")))?;
        self.profile
            .extract_text(&value)
            .ok_or_else(|| Error::ClientFailure("response has no completion text".into()))
    }
}
