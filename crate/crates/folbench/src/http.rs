//! Chat-completions backend over HTTP.

use std::time::{Duration, Instant};

use folbench_core::pipeline::{Backend, BackendError, BackendRequest, BackendResponse};
use serde::{Deserialize, Serialize};

pub const ATTEMPTS: u32 = 3;

pub struct HttpBackend {
    url: String,
    model: String,
    token: Option<String>,
    agent: ureq::Agent,
    backoff: Duration,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [Message<'a>; 1],
    temperature: f64,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    stop: &'a [String],
}

#[derive(Serialize)]
struct Message<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    #[serde(default)]
    content: Option<String>,
}

#[derive(Deserialize)]
struct Usage {
    prompt_tokens: Option<u64>,
    completion_tokens: Option<u64>,
}

impl HttpBackend {
    pub fn new(url: impl Into<String>, model: impl Into<String>, token: Option<String>, timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder().timeout_global(Some(timeout)).build();
        HttpBackend {
            url: url.into(),
            model: model.into(),
            token,
            agent: ureq::Agent::new_with_config(config),
            backoff: Duration::from_millis(500),
        }
    }

    /// Delay before the second attempt; it doubles for each later one.
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    fn once(&self, req: &BackendRequest) -> Result<BackendResponse, String> {
        let body = ChatRequest {
            model: &self.model,
            messages: [Message { role: "user", content: &req.prompt }],
            temperature: req.temperature,
            stop: &req.stop,
        };
        let start = Instant::now();
        let mut call = self.agent.post(&self.url).header("Content-Type", "application/json");
        if let Some(token) = &self.token {
            call = call.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = call.send_json(&body).map_err(|e| e.to_string())?;
        let parsed: ChatResponse = resp.body_mut().read_json().map_err(|e| e.to_string())?;
        let text = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| "response has no message content".to_string())?;
        let usage = parsed.usage.unwrap_or(Usage { prompt_tokens: None, completion_tokens: None });
        Ok(BackendResponse {
            text,
            prompt_tokens: usage.prompt_tokens,
            completion_tokens: usage.completion_tokens,
            latency_ms: start.elapsed().as_millis() as u64,
        })
    }
}

impl Backend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn complete(&self, req: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let mut delay = self.backoff;
        let mut last = String::new();
        for attempt in 0..ATTEMPTS {
            if attempt > 0 {
                std::thread::sleep(delay);
                delay *= 2;
            }
            match self.once(req) {
                Ok(r) => return Ok(r),
                Err(e) => last = e,
            }
        }
        Err(BackendError::Unavailable(format!("{} after {ATTEMPTS} attempts: {last}", self.url)))
    }
}
