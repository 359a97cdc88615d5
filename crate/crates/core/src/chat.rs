//! Chat-completions-style HTTP client with retry and backoff.
//!
//! The wire format is a JSON POST body `{model, temperature, max_tokens,
//! messages:[{role, content:[{type:"text"|"image", ...}]}]}` with an
//! optional bearer token read from a configured environment variable.
//! Replies are read from `choices[0].message.content`.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One content part of a chat message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ContentPart {
    Text { text: String },
    Image { data: String, media_type: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: Vec<ContentPart>,
}

impl ChatMessage {
    pub fn user_text(text: impl Into<String>) -> Self {
        ChatMessage { role: "user".into(), content: vec![ContentPart::Text { text: text.into() }] }
    }

    /// The concatenated text parts of the message.
    pub fn text(&self) -> String {
        self.content
            .iter()
            .filter_map(|part| match part {
                ContentPart::Text { text } => Some(text.as_str()),
                ContentPart::Image { .. } => None,
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// A complete request payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub messages: Vec<ChatMessage>,
}

/// Configuration for one external model endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEndpoint {
    /// Full URL the request is POSTed to.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_env: Option<String>,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default)]
    pub supports_images: bool,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
}

fn default_max_tokens() -> u32 {
    1024
}

fn default_timeout_secs() -> u64 {
    120
}

fn default_max_retries() -> u32 {
    3
}

fn default_backoff_ms() -> u64 {
    500
}

impl ModelEndpoint {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        ModelEndpoint {
            base_url: base_url.into(),
            model: model.into(),
            token_env: None,
            temperature: 0.0,
            max_tokens: default_max_tokens(),
            supports_images: true,
            timeout_secs: default_timeout_secs(),
            max_retries: default_max_retries(),
            backoff_ms: default_backoff_ms(),
        }
    }

    /// Stable identity string for cache keys; never includes the token.
    pub fn identity(&self) -> String {
        format!("{}|{}", self.base_url, self.model)
    }
}

/// Anything that can answer a chat request. Implemented by the HTTP client
/// and by in-process test endpoints.
pub trait ModelClient: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<String>;
}

/// Blocking HTTP client for chat-completions-compatible endpoints.
pub struct HttpChatClient {
    endpoint: ModelEndpoint,
    token: Option<String>,
    http: reqwest::blocking::Client,
}

impl HttpChatClient {
    pub fn new(endpoint: ModelEndpoint) -> Result<Self> {
        let token = match &endpoint.token_env {
            Some(var) => Some(std::env::var(var).map_err(|_| {
                Error::Config(format!("token environment variable {var} is not set"))
            })?),
            None => None,
        };
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(endpoint.timeout_secs))
            .build()
            .map_err(|e| Error::Transport(e.to_string()))?;
        Ok(HttpChatClient { endpoint, token, http })
    }

    pub fn endpoint(&self) -> &ModelEndpoint {
        &self.endpoint
    }

    fn attempt(&self, request: &ChatRequest) -> std::result::Result<String, (bool, String)> {
        let mut builder = self
            .http
            .post(&self.endpoint.base_url)
            .header("content-type", "application/json");
        if let Some(token) = &self.token {
            builder = builder.header("authorization", format!("Bearer {token}"));
        }
        let response = builder
            .json(request)
            .send()
            .map_err(|e| (true, format!("request failed: {e}")))?;
        let status = response.status();
        if status.as_u16() == 429 || status.is_server_error() {
            return Err((true, format!("endpoint returned {status}")));
        }
        if !status.is_success() {
            return Err((false, format!("endpoint returned {status}")));
        }
        let body: serde_json::Value = response
            .json()
            .map_err(|e| (false, format!("bad response body: {e}")))?;
        body.pointer("/choices/0/message/content")
            .and_then(serde_json::Value::as_str)
            .map(str::to_string)
            .ok_or((false, "response missing choices[0].message.content".to_string()))
    }
}

impl ModelClient for HttpChatClient {
    fn complete(&self, request: &ChatRequest) -> Result<String> {
        let mut last_error = String::new();
        for attempt in 0..=self.endpoint.max_retries {
            if attempt > 0 {
                let backoff = self.endpoint.backoff_ms.saturating_mul(1 << (attempt - 1));
                std::thread::sleep(Duration::from_millis(backoff));
            }
            match self.attempt(request) {
                Ok(reply) => return Ok(reply),
                Err((retryable, message)) => {
                    last_error = message;
                    if !retryable {
                        break;
                    }
                }
            }
        }
        Err(Error::Transport(last_error))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_serializes_to_the_wire_shape() {
        let request = ChatRequest {
            model: "m".into(),
            temperature: 0.0,
            max_tokens: 64,
            messages: vec![ChatMessage {
                role: "user".into(),
                content: vec![
                    ContentPart::Text { text: "hi".into() },
                    ContentPart::Image { data: "aGk=".into(), media_type: "image/svg+xml".into() },
                ],
            }],
        };
        let json = serde_json::to_value(&request).unwrap();
        assert_eq!(json["messages"][0]["content"][0]["type"], "text");
        assert_eq!(json["messages"][0]["content"][1]["type"], "image");
        assert_eq!(json["messages"][0]["content"][1]["data"], "aGk=");
        assert_eq!(json["temperature"], 0.0);
    }

    #[test]
    fn endpoint_defaults_are_conservative() {
        let endpoint: ModelEndpoint =
            serde_json::from_str(r#"{"base_url":"http://localhost/x","model":"m"}"#).unwrap();
        assert_eq!(endpoint.temperature, 0.0);
        assert_eq!(endpoint.max_retries, 3);
        assert!(!endpoint.supports_images);
    }

    #[test]
    fn missing_token_env_is_a_config_error() {
        let mut endpoint = ModelEndpoint::new("http://localhost/x", "m");
        endpoint.token_env = Some("GVBENCH_TEST_TOKEN_THAT_DOES_NOT_EXIST".into());
        assert!(matches!(HttpChatClient::new(endpoint), Err(Error::Config(_))));
    }
}
