//! Noise corpora stored as one sentence per line.

use std::path::Path;

use folbench_core::perturb::{NoiseCorpus, NoiseKind, PerturbError};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Invalid { path: String, source: PerturbError },
}

pub fn load_corpus(kind: NoiseKind, path: &Path) -> Result<NoiseCorpus, CorpusError> {
    let name = || path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: name(), source })?;
    NoiseCorpus::from_lines(kind, &text).map_err(|source| CorpusError::Invalid { path: name(), source })
}
