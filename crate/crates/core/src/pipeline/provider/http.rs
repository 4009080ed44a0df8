//! OpenAI-compatible chat-completions client with function calling.

use std::time::Duration;

use serde_json::{json, Value};

use super::{CompletionRequest, Provider, ProviderConfig, ProviderError, Reply, ToolRequest, ToolSpec};

pub struct HttpProvider {
    client: reqwest::blocking::Client,
    endpoint: String,
    api_key: String,
    temperature: f64,
}

impl HttpProvider {
    pub fn new(base_url: &str, api_key: String, timeout: Duration, temperature: f64) -> Result<Self, ProviderError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| ProviderError::Config(e.to_string()))?;
        Ok(HttpProvider {
            client,
            endpoint: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key,
            temperature,
        })
    }

    /// Reads the API key from the environment variable named in the config.
    pub fn from_env(config: &ProviderConfig) -> Result<Self, ProviderError> {
        let key = std::env::var(&config.api_key_env)
            .map_err(|_| ProviderError::MissingCredentials(config.api_key_env.clone()))?;
        Self::new(&config.base_url, key, config.timeout(), config.temperature)
    }

    fn tool_defs(tools: &[ToolSpec]) -> Value {
        Value::Array(
            tools
                .iter()
                .map(|t| {
                    let props: serde_json::Map<String, Value> = t
                        .params
                        .iter()
                        .map(|p| (p.to_string(), json!({"type": "number"})))
                        .collect();
                    json!({
                        "type": "function",
                        "function": {
                            "name": t.name,
                            "description": t.description,
                            "parameters": {
                                "type": "object",
                                "properties": props,
                                "required": t.params,
                            }
                        }
                    })
                })
                .collect(),
        )
    }

    pub fn request_body(req: &CompletionRequest<'_>, temperature: f64) -> Value {
        let mut messages = vec![json!({"role": "user", "content": req.prompt})];
        for ex in req.history {
            let spec = req.tools.iter().find(|t| t.name == ex.request.name);
            let args: serde_json::Map<String, Value> = match spec {
                Some(t) => t
                    .params
                    .iter()
                    .zip(&ex.request.args)
                    .map(|(p, v)| (p.to_string(), json!(v)))
                    .collect(),
                None => [("args".to_string(), json!(ex.request.args))].into_iter().collect(),
            };
            messages.push(json!({
                "role": "assistant",
                "content": Value::Null,
                "tool_calls": [{
                    "id": ex.request.id,
                    "type": "function",
                    "function": {"name": ex.request.name, "arguments": Value::Object(args).to_string()}
                }]
            }));
            messages.push(json!({"role": "tool", "tool_call_id": ex.request.id, "content": ex.result}));
        }
        let mut body = json!({
            "model": req.model,
            "messages": messages,
            "temperature": temperature,
        });
        if !req.tools.is_empty() {
            body["tools"] = Self::tool_defs(req.tools);
        }
        body
    }

    pub fn parse_reply(body: &Value, tools: &[ToolSpec]) -> Result<Reply, ProviderError> {
        let bad = |m: &str| ProviderError::BadResponse(m.to_string());
        let message = body
            .pointer("/choices/0/message")
            .ok_or_else(|| bad("missing choices[0].message"))?;
        if let Some(call) = message
            .get("tool_calls")
            .and_then(Value::as_array)
            .and_then(|c| c.first())
        {
            let name = call
                .pointer("/function/name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("tool call without name"))?;
            let raw = call
                .pointer("/function/arguments")
                .and_then(Value::as_str)
                .unwrap_or("{}");
            let parsed: Value = serde_json::from_str(raw).map_err(|_| bad("tool arguments are not JSON"))?;
            let args = match (&parsed, tools.iter().find(|t| t.name == name)) {
                (Value::Object(m), Some(t)) if t.params.iter().all(|p| m.contains_key(*p)) => t
                    .params
                    .iter()
                    .map(|p| m[*p].as_f64())
                    .collect::<Option<Vec<f64>>>(),
                (Value::Object(m), _) => m
                    .get("args")
                    .and_then(Value::as_array)
                    .map(|a| a.iter().filter_map(Value::as_f64).collect()),
                (Value::Array(a), _) => Some(a.iter().filter_map(Value::as_f64).collect()),
                _ => None,
            }
            .ok_or_else(|| bad("tool arguments are not numbers"))?;
            let id = call.get("id").and_then(Value::as_str).unwrap_or("call").to_string();
            return Ok(Reply::Tool(ToolRequest {
                id,
                name: name.to_string(),
                args,
            }));
        }
        message
            .get("content")
            .and_then(Value::as_str)
            .map(|s| Reply::Final(s.to_string()))
            .ok_or_else(|| bad("message has neither content nor tool calls"))
    }
}

impl Provider for HttpProvider {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        let body = Self::request_body(req, self.temperature);
        let resp = self
            .client
            .post(&self.endpoint)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| ProviderError::Transport(e.to_string()))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| ProviderError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(ProviderError::Status {
                status: status.as_u16(),
                body: text.chars().take(500).collect(),
            });
        }
        let value: Value =
            serde_json::from_str(&text).map_err(|e| ProviderError::BadResponse(e.to_string()))?;
        Self::parse_reply(&value, req.tools)
    }
}
