//! Prompting, answer extraction and the formalise, check, refine loop.
//!
//! Three formats are supported. `Direct` and `CoT` ask for the answer in
//! text. `Formal` asks for a formalisation, parses it, lints it and hands it
//! to the prover. When parsing fails the configured [`Recovery`] strategy
//! decides what feedback (if any) is sent back for another attempt.

mod backend;
mod extract;
pub mod prompt;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ast::{Answer, Problem};
use crate::lint::{lint, Warning};
use crate::perturb::{sample_seed, PerturbedSample, Variant};
use crate::prover::{decide, Decision, ProverBudget};
use crate::syntax::{extract_problem, SyntaxId};

pub use backend::{Backend, BackendError, BackendRequest, BackendResponse, MockBackend, OracleBackend};
pub use extract::{extract_cot, extract_direct, ExtractionFailure};
pub use prompt::build_prompt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Direct,
    CoT,
    Formal,
}

impl core::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Format::Direct),
            "cot" => Ok(Format::CoT),
            "formal" => Ok(Format::Formal),
            other => Err(format!("unknown format '{other}' (expected direct, cot or formal)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recovery {
    NoRecovery,
    ErrorType,
    ErrorMessage,
    Warning,
}

impl Recovery {
    pub const ALL: [Recovery; 4] =
        [Recovery::NoRecovery, Recovery::ErrorType, Recovery::ErrorMessage, Recovery::Warning];
}

impl core::str::FromStr for Recovery {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "no_recovery" | "none" => Ok(Recovery::NoRecovery),
            "error_type" => Ok(Recovery::ErrorType),
            "error_message" => Ok(Recovery::ErrorMessage),
            "warning" => Ok(Recovery::Warning),
            other => Err(format!("unknown recovery strategy '{other}'")),
        }
    }
}

/// Feedback sent under [`Recovery::ErrorType`].
pub const ERROR_TYPE_FEEDBACK: &str = "parsing error";
pub const REFINE_INSTRUCTION: &str = "Please output the corrected formalisation in the same format.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub format: Format,
    pub syntax: SyntaxId,
    pub recovery: Recovery,
    pub max_refinements: usize,
    pub temperature: f64,
    pub fallback_seed: u64,
    pub backend: String,
    pub prover_budget: ProverBudget,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: Format::Formal,
            syntax: SyntaxId::Fol,
            recovery: Recovery::NoRecovery,
            max_refinements: 3,
            temperature: 1.0,
            fallback_seed: 0,
            backend: "mock".into(),
            prover_budget: ProverBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("recovery strategy {0:?} needs the formal format")]
    RecoveryNeedsFormal(Recovery),
    #[error("temperature must be a finite non-negative number")]
    BadTemperature,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.recovery != Recovery::NoRecovery && self.format != Format::Formal {
            return Err(ConfigError::RecoveryNeedsFormal(self.recovery));
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(ConfigError::BadTemperature);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseStatus {
    NotApplicable,
    Parsed,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub request: BackendRequest,
    pub response: BackendResponse,
    /// Parse error, extraction failure or rendered warnings for this response.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub id: String,
    pub variant: Variant,
    pub predicted: Answer,
    pub parse_status: ParseStatus,
    pub used_fallback: bool,
    pub refinement_rounds: usize,
    #[serde(default)]
    pub warnings: Vec<Warning>,
    /// Prover outcome for formal runs that parsed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prover_status: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcript: Vec<TranscriptEntry>,
}

impl SampleResult {
    /// Whether the sample counts towards the execution rate.
    pub fn parsed(&self) -> bool {
        match self.parse_status {
            ParseStatus::Parsed => true,
            ParseStatus::NotApplicable => !self.used_fallback,
            ParseStatus::Failed => false,
        }
    }
}

/// The seeded coin used when no answer can be obtained. It depends only on
/// the seed, the sample id and the variant.
pub fn fallback_answer(seed: u64, id: &str, variant: Variant) -> Answer {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, &format!("{id}@{variant}")));
    Answer::from_bool(rng.gen_bool(0.5))
}

/// Prompt for the next attempt: everything so far, the rejected output and
/// the feedback.
pub fn refinement_prompt(prompt: &str, response: &str, feedback: &str) -> String {
    format!("{prompt}{}\nFeedback: {feedback}\n{REFINE_INSTRUCTION}\n", response.trim_end())
}

fn render_warnings(ws: &[Warning]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("\n")
}

struct Run<'a> {
    s: &'a PerturbedSample,
    cfg: &'a RunConfig,
    backend: &'a dyn Backend,
    transcript: Vec<TranscriptEntry>,
}

impl Run<'_> {
    fn call(&mut self, prompt: &str) -> Result<BackendResponse, BackendError> {
        let request = BackendRequest {
            sample_id: self.s.base_id.clone(),
            variant: self.s.variant,
            attempt: self.transcript.len(),
            prompt: prompt.into(),
            temperature: self.cfg.temperature,
            stop: Vec::new(),
        };
        let response = self.backend.complete(&request)?;
        self.transcript.push(TranscriptEntry { request, response: response.clone(), diagnostic: None });
        Ok(response)
    }

    fn diagnose(&mut self, text: String) {
        if let Some(last) = self.transcript.last_mut() {
            last.diagnostic = Some(text);
        }
    }

    fn result(self, predicted: Answer, parse_status: ParseStatus, used_fallback: bool) -> SampleResult {
        SampleResult {
            id: self.s.base_id.clone(),
            variant: self.s.variant,
            predicted,
            parse_status,
            used_fallback,
            refinement_rounds: self.transcript.len().saturating_sub(1),
            warnings: Vec::new(),
            prover_status: None,
            transcript: self.transcript,
        }
    }

    fn fallback(&self) -> Answer {
        fallback_answer(self.cfg.fallback_seed, &self.s.base_id, self.s.variant)
    }
}

/// Runs one sample, proving with the clause budget only.
pub fn run_sample(s: &PerturbedSample, cfg: &RunConfig, backend: &dyn Backend) -> Result<SampleResult, BackendError> {
    let budget = cfg.prover_budget.clone();
    run_sample_with(s, cfg, backend, &|p: &Problem| decide(p, &budget))
}

/// Runs one sample with a caller-supplied prover, which is how a wall-clock
/// limit or an external prover is plugged in.
pub fn run_sample_with(
    s: &PerturbedSample,
    cfg: &RunConfig,
    backend: &dyn Backend,
    prove: &dyn Fn(&Problem) -> Decision,
) -> Result<SampleResult, BackendError> {
    let mut run = Run { s, cfg, backend, transcript: Vec::new() };
    let prompt = build_prompt(&s.context, &s.question, cfg.format, cfg.syntax);
    match cfg.format {
        Format::Direct | Format::CoT => {
            let response = run.call(&prompt)?;
            let extracted =
                if cfg.format == Format::Direct { extract_direct(&response.text) } else { extract_cot(&response.text) };
            Ok(match extracted {
                Ok(a) => run.result(a, ParseStatus::NotApplicable, false),
                Err(e) => {
                    run.diagnose(e.to_string());
                    let a = run.fallback();
                    run.result(a, ParseStatus::NotApplicable, true)
                }
            })
        }
        Format::Formal => formal(run, prompt, prove),
    }
}

fn formal(
    mut run: Run<'_>,
    mut prompt: String,
    prove: &dyn Fn(&Problem) -> Decision,
) -> Result<SampleResult, BackendError> {
    let cfg = run.cfg;
    let mut warned = false;
    loop {
        let response = run.call(&prompt)?;
        let rounds = run.transcript.len() - 1;
        let can_refine = cfg.recovery != Recovery::NoRecovery && rounds < cfg.max_refinements;
        match extract_problem(&response.text, cfg.syntax) {
            Err(e) => {
                let message = e.message();
                run.diagnose(message.clone());
                if !can_refine {
                    let a = run.fallback();
                    return Ok(run.result(a, ParseStatus::Failed, true));
                }
                let feedback = if cfg.recovery == Recovery::ErrorType { ERROR_TYPE_FEEDBACK.into() } else { message };
                prompt = refinement_prompt(&prompt, &response.text, &feedback);
            }
            Ok(problem) => {
                let warnings = lint(&problem);
                if !warnings.is_empty() {
                    run.diagnose(render_warnings(&warnings));
                }
                if cfg.recovery == Recovery::Warning && !warnings.is_empty() && !warned && can_refine {
                    warned = true;
                    prompt = refinement_prompt(&prompt, &response.text, &render_warnings(&warnings));
                    continue;
                }
                let decision = prove(&problem);
                let mut r = run.result(decision.answer, ParseStatus::Parsed, false);
                r.warnings = warnings;
                r.prover_status = Some(decision.outcome.status().into());
                return Ok(r);
            }
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Direct => "direct",
            Format::CoT => "cot",
            Format::Formal => "formal",
        })
    }
}

#[cfg(test)]
mod tests;
