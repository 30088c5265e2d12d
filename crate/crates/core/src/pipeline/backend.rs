use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::prompt::render_formalisation;
use super::{Format, SampleResult};
use crate::ast::{Answer, Problem};
use crate::perturb::{PerturbedSample, Variant};
use crate::syntax::SyntaxId;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendRequest {
    pub sample_id: String,
    pub variant: Variant,
    /// 0 for the first call on a sample, then one more per refinement.
    pub attempt: usize,
    pub prompt: String,
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stop: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendResponse {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_tokens: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion_tokens: Option<u64>,
    #[serde(default)]
    pub latency_ms: u64,
}

impl BackendResponse {
    pub fn text(text: impl Into<String>) -> BackendResponse {
        BackendResponse { text: text.into(), ..BackendResponse::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("mock script exhausted for sample '{sample_id}' at attempt {attempt}")]
    ScriptExhausted { sample_id: String, attempt: usize },
    #[error("no gold annotation for sample '{0}'")]
    NoGold(String),
}

/// A language model endpoint. Implementations must be callable from several
/// worker threads at once.
pub trait Backend: Send + Sync {
    fn name(&self) -> &str;
    fn complete(&self, req: &BackendRequest) -> Result<BackendResponse, BackendError>;
}

/// Replays scripted responses. The script maps a sample id to its responses
/// by attempt; a key `id@VARIANT` takes precedence over the bare id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MockBackend {
    pub script: BTreeMap<String, Vec<String>>,
}

impl MockBackend {
    pub fn new(script: BTreeMap<String, Vec<String>>) -> MockBackend {
        MockBackend { script }
    }

    /// A mock that answers exactly as recorded in a result's transcript.
    pub fn from_transcript(r: &SampleResult) -> MockBackend {
        let key = format!("{}@{}", r.id, r.variant);
        let responses = r.transcript.iter().map(|t| t.response.text.clone()).collect();
        MockBackend { script: BTreeMap::from([(key, responses)]) }
    }
}

impl Backend for MockBackend {
    fn name(&self) -> &str {
        "mock"
    }

    fn complete(&self, req: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let keyed = format!("{}@{}", req.sample_id, req.variant);
        let responses = self.script.get(&keyed).or_else(|| self.script.get(&req.sample_id));
        responses
            .and_then(|r| r.get(req.attempt))
            .map(|t| BackendResponse::text(t.clone()))
            .ok_or_else(|| BackendError::ScriptExhausted { sample_id: req.sample_id.clone(), attempt: req.attempt })
    }
}

/// Answers every request with the ideal response built from the gold
/// annotation: the label for informal formats, the gold formalisation for
/// the formal one.
#[derive(Clone, Debug)]
pub struct OracleBackend {
    format: Format,
    syntax: SyntaxId,
    gold: BTreeMap<(String, Variant), (Answer, Option<Problem>)>,
}

impl OracleBackend {
    pub fn new<'a>(format: Format, syntax: SyntaxId, samples: impl IntoIterator<Item = &'a PerturbedSample>) -> Self {
        let gold =
            samples.into_iter().map(|s| ((s.base_id.clone(), s.variant), (s.label, s.gold_problem.clone()))).collect();
        OracleBackend { format, syntax, gold }
    }
}

fn capitalized(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "Yes",
        Answer::No => "No",
    }
}

impl Backend for OracleBackend {
    fn name(&self) -> &str {
        "oracle"
    }

    fn complete(&self, req: &BackendRequest) -> Result<BackendResponse, BackendError> {
        let missing = || BackendError::NoGold(req.sample_id.clone());
        let (label, problem) = self.gold.get(&(req.sample_id.clone(), req.variant)).ok_or_else(missing)?;
        let text = match self.format {
            Format::Direct => format!("Answer: {}", capitalized(*label)),
            Format::CoT => format!("Reasoning steps: taken from the gold annotation.\nAnswer: {}", capitalized(*label)),
            Format::Formal => render_formalisation(problem.as_ref().ok_or_else(missing)?, self.syntax),
        };
        Ok(BackendResponse::text(text))
    }
}
