//! TOML run configuration.
//!
//! ```toml
//! schema_version = 1
//!
//! [run]
//! format = "formal"          # direct | cot | formal
//! syntax = "fol"             # fol | rfol | tptp
//! recovery = "error_message" # no_recovery | error_type | error_message | warning
//! max_refinements = 3
//! temperature = 1.0
//! fallback_seed = 0
//! backend = "mock"           # mock | oracle | http
//!
//! [prover]
//! max_clauses = 100000
//! max_time_ms = 10000
//! external = "vampire --mode casc -t {timeout} {file}"
//!
//! [backend]
//! url = "http://localhost:8000/v1/chat/completions"
//! model = "some-model"
//! token_env = "FOLBENCH_API_KEY"
//! mock_script = "script.json"
//!
//! [data]
//! dataset = "suite.jsonl"
//! results = "results.jsonl"
//!
//! [corpora]
//! encyclopedic = "encyclopedic.txt"
//! logical = "logical.txt"
//!
//! [runner]
//! parallelism = 4
//! elide_transcript = false
//! ```
//!
//! Every key is optional. Relative paths are resolved against the directory
//! holding the config file. `FOLBENCH_ENDPOINT` and `FOLBENCH_MODEL` supply
//! the backend URL and model when the file leaves them out.

use std::path::{Path, PathBuf};
use std::time::Duration;

use folbench_core::pipeline::{Format, Recovery, RunConfig};
use folbench_core::prover::ProverBudget;
use folbench_core::SyntaxId;
use serde::{Deserialize, Serialize};

use crate::SCHEMA_VERSION;

pub const ENDPOINT_ENV: &str = "FOLBENCH_ENDPOINT";
pub const MODEL_ENV: &str = "FOLBENCH_MODEL";
pub const DEFAULT_TOKEN_ENV: &str = "FOLBENCH_API_KEY";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: unsupported schema_version {found}")]
    Version { path: String, found: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub run: RunSection,
    pub prover: ProverSection,
    pub backend: BackendSection,
    pub data: DataSection,
    pub corpora: CorporaSection,
    pub runner: RunnerSection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            schema_version: SCHEMA_VERSION,
            run: RunSection::default(),
            prover: ProverSection::default(),
            backend: BackendSection::default(),
            data: DataSection::default(),
            corpora: CorporaSection::default(),
            runner: RunnerSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub format: Format,
    pub syntax: SyntaxId,
    pub recovery: Recovery,
    pub max_refinements: usize,
    pub temperature: f64,
    pub fallback_seed: u64,
    pub backend: String,
}

impl Default for RunSection {
    fn default() -> Self {
        let d = RunConfig::default();
        RunSection {
            format: d.format,
            syntax: d.syntax,
            recovery: d.recovery,
            max_refinements: d.max_refinements,
            temperature: d.temperature,
            fallback_seed: d.fallback_seed,
            backend: d.backend,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProverSection {
    pub max_clauses: usize,
    pub max_time_ms: u64,
    /// Command template for an external TPTP prover. `{file}` and
    /// `{timeout}` (whole seconds) are substituted.
    pub external: Option<String>,
}

impl Default for ProverSection {
    fn default() -> Self {
        let b = ProverBudget::default();
        ProverSection { max_clauses: b.max_clauses, max_time_ms: b.max_time.as_millis() as u64, external: None }
    }
}

impl ProverSection {
    pub fn budget(&self) -> ProverBudget {
        ProverBudget { max_clauses: self.max_clauses, max_time: Duration::from_millis(self.max_time_ms) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendSection {
    pub url: Option<String>,
    pub model: Option<String>,
    /// Name of the environment variable holding the bearer token.
    pub token_env: String,
    pub timeout_ms: u64,
    pub mock_script: Option<PathBuf>,
}

impl Default for BackendSection {
    fn default() -> Self {
        BackendSection {
            url: None,
            model: None,
            token_env: DEFAULT_TOKEN_ENV.into(),
            timeout_ms: 120_000,
            mock_script: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub dataset: Option<PathBuf>,
    pub results: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorporaSection {
    pub encyclopedic: Option<PathBuf>,
    pub logical: Option<PathBuf>,
    /// Defaults to the shipped tautology corpus.
    pub tautological: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunnerSection {
    pub parallelism: usize,
    pub elide_transcript: bool,
}

impl Default for RunnerSection {
    fn default() -> Self {
        RunnerSection { parallelism: 4, elide_transcript: false }
    }
}

impl Config {
    pub fn from_toml(text: &str, origin: &str) -> Result<Config, ConfigError> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| ConfigError::Parse { path: origin.into(), message: e.to_string() })?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Version { path: origin.into(), found: cfg.schema_version });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: origin.clone(), source })?;
        let mut cfg = Config::from_toml(&text, &origin)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let paths = [
            &mut self.backend.mock_script,
            &mut self.data.dataset,
            &mut self.data.results,
            &mut self.corpora.encyclopedic,
            &mut self.corpora.logical,
            &mut self.corpora.tautological,
        ];
        for p in paths.into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    /// Fills backend settings the file leaves unset from `env`.
    pub fn apply_env(&mut self, env: impl Fn(&str) -> Option<String>) {
        if self.backend.url.is_none() {
            self.backend.url = env(ENDPOINT_ENV);
        }
        if self.backend.model.is_none() {
            self.backend.model = env(MODEL_ENV);
        }
    }

    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            format: self.run.format,
            syntax: self.run.syntax,
            recovery: self.run.recovery,
            max_refinements: self.run.max_refinements,
            temperature: self.run.temperature,
            fallback_seed: self.run.fallback_seed,
            backend: self.run.backend.clone(),
            prover_budget: self.prover.budget(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_run_config() {
        let cfg = Config::from_toml("schema_version = 1", "x").unwrap();
        assert_eq!(cfg.run_config(), RunConfig::default());
        assert_eq!(cfg.runner.parallelism, 4);
    }

    #[test]
    fn sections_parse() {
        let cfg = Config::from_toml(
            "schema_version = 1\n[run]\nformat = \"cot\"\nrecovery = \"no_recovery\"\nsyntax = \"tptp\"\n[prover]\nmax_time_ms = 50\n",
            "x",
        )
        .unwrap();
        assert_eq!(cfg.run.format, Format::CoT);
        assert_eq!(cfg.run.syntax, SyntaxId::Tptp);
        assert_eq!(cfg.run_config().prover_budget.max_time, Duration::from_millis(50));
    }

    #[test]
    fn rejects_typos_and_versions() {
        assert!(matches!(
            Config::from_toml("schema_version = 1\n[run]\nformt = \"cot\"", "x"),
            Err(ConfigError::Parse { .. })
        ));
        assert!(matches!(Config::from_toml("schema_version = 2", "x"), Err(ConfigError::Version { found: 2, .. })));
    }

    #[test]
    fn file_overrides_environment() {
        let mut cfg = Config::from_toml("schema_version = 1\n[backend]\nmodel = \"from-file\"", "x").unwrap();
        cfg.apply_env(|k| Some(format!("env:{k}")));
        assert_eq!(cfg.backend.model.as_deref(), Some("from-file"));
        assert_eq!(cfg.backend.url.as_deref(), Some("env:FOLBENCH_ENDPOINT"));
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "schema_version = 1\n[data]\ndataset = \"d.jsonl\"\nresults = \"/abs/r.jsonl\"").unwrap();
        let cfg = Config::load(&path).unwrap();
        assert_eq!(cfg.data.dataset.unwrap(), dir.path().join("d.jsonl"));
        assert_eq!(cfg.data.results.unwrap(), PathBuf::from("/abs/r.jsonl"));
    }
}
