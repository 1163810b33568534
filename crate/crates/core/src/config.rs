//! Runtime configuration read from the file named by `QGEN_CONFIG`.
//!
//! ```toml
//! extension = "verbs.json"
//!
//! [client]
//! endpoint = "https://api.example.com/v1/chat/completions"
//! model = "gpt-4o-mini"
//! profile = "openai-chat"
//! timeout_ms = 30000
//! max_retries = 3
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::client::{ClientParams, HttpCompletionClient, ProviderProfile};
use crate::error::{Error, Result};
use crate::taxonomy::{load_registry, ExtensionConfig, Taxonomy};

pub const CONFIG_ENV: &str = "QGEN_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub extension: Option<PathBuf>,
    #[serde(default)]
    pub client: ClientConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClientConfig {
    #[serde(default)]
    pub endpoint: Option<String>,
    #[serde(default)]
    pub model: String,
    #[serde(default)]
    pub profile: ProviderProfile,
    #[serde(flatten)]
    pub params: ClientParams,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schema(format!("config: {e}")))
    }

    /// Loads the file and resolves a relative extension path against the
    /// config file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut config = Self::from_toml(&crate::error::read_file(path)?)?;
        if let (Some(ext), Some(dir)) = (&config.extension, path.parent()) {
            if ext.is_relative() {
                config.extension = Some(dir.join(ext));
            }
        }
        Ok(config)
    }

    /// `QGEN_CONFIG` if set, otherwise defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Self::from_file(Path::new(&path)),
            _ => Ok(Config::default()),
        }
    }

    pub fn taxonomy(&self) -> Result<Taxonomy> {
        match &self.extension {
            Some(path) => {
                let text = crate::error::read_file(path)?;
                load_registry(Some(&ExtensionConfig::from_json(&text)?))
            }
            None => load_registry(None),
        }
    }

    pub fn http_client(&self) -> Result<HttpCompletionClient> {
        let endpoint = self
            .client
            .endpoint
            .clone()
            .ok_or_else(|| Error::InvalidRequest(format!("no client endpoint configured (set {CONFIG_ENV})")))?;
        Ok(HttpCompletionClient::new(endpoint, &self.client.model, self.client.profile).with_env_key())
    }
}
