use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    apply_counterfactual, inject_noise, sample_seed, NoiseCorpus, NoiseKind, PerturbError, PerturbedSample, Sample,
    Variant,
};
use crate::ast::Answer;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Noise sentences per sample.
    pub k: usize,
    /// Seed per noise variant.
    pub seeds: BTreeMap<Variant, u64>,
    /// At most one corpus per kind; variants without a corpus are skipped.
    pub corpora: Vec<NoiseCorpus>,
    pub counterfactual: bool,
}

impl SuiteConfig {
    /// Derives a seed for every noise variant from `seed`.
    pub fn new(seed: u64, k: usize, corpora: Vec<NoiseCorpus>) -> SuiteConfig {
        let seeds = Variant::ALL
            .into_iter()
            .filter(|v| v.noise().is_some())
            .map(|v| (v, sample_seed(seed, v.name())))
            .collect();
        SuiteConfig { k, seeds, corpora, counterfactual: true }
    }

    fn corpus(&self, kind: NoiseKind) -> Option<&NoiseCorpus> {
        self.corpora.iter().find(|c| c.kind == kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub dataset_size: usize,
    pub k: usize,
    pub seeds: BTreeMap<String, u64>,
    pub counts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suite {
    pub variants: BTreeMap<Variant, Vec<PerturbedSample>>,
    pub manifest: Manifest,
}

/// One sample per (rule, context) pair of a counterfactual-capable rule,
/// in dataset order, picking a `yes` sample for even positions and a `no`
/// sample for odd ones when the group has one.
fn counterfactual_selection(dataset: &[Sample]) -> Vec<&Sample> {
    let mut groups: Vec<Vec<&Sample>> = Vec::new();
    let mut index: BTreeMap<(super::RuleTag, Vec<String>), usize> = BTreeMap::new();
    for s in dataset.iter().filter(|s| s.rule.supports_counterfactual()) {
        let key = (s.rule, s.context.clone());
        let i = *index.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[i].push(s);
    }
    let mut position: BTreeMap<super::RuleTag, usize> = BTreeMap::new();
    groups
        .iter()
        .map(|g| {
            let pos = position.entry(g[0].rule).or_default();
            let want = if pos.is_multiple_of(2) { Answer::Yes } else { Answer::No };
            *pos += 1;
            g.iter().copied().find(|s| s.label == want).unwrap_or(g[0])
        })
        .collect()
}

/// Builds `O`, `O_C` and every noise variant whose corpus is configured.
pub fn build_suite(dataset: &[Sample], cfg: &SuiteConfig) -> Result<Suite, PerturbError> {
    let mut ids = BTreeSet::new();
    for s in dataset {
        s.validate()?;
        if !ids.insert(s.id.as_str()) {
            return Err(PerturbError::DuplicateId(s.id.clone()));
        }
    }
    let mut variants: BTreeMap<Variant, Vec<PerturbedSample>> = BTreeMap::new();
    variants.insert(Variant::O, dataset.iter().map(PerturbedSample::original).collect());
    if cfg.counterfactual {
        let oc =
            counterfactual_selection(dataset).into_iter().map(apply_counterfactual).collect::<Result<Vec<_>, _>>()?;
        variants.insert(Variant::OC, oc);
    }
    for v in Variant::ALL {
        let Some(kind) = v.noise() else { continue };
        let Some(corpus) = cfg.corpus(kind) else { continue };
        let base = if v.is_counterfactual() { Variant::OC } else { Variant::O };
        let Some(base) = variants.get(&base) else { continue };
        let seed = cfg.seeds.get(&v).copied().unwrap_or_default();
        let out = base.iter().map(|s| inject_noise(s, corpus, cfg.k, seed)).collect::<Result<Vec<_>, _>>()?;
        variants.insert(v, out);
    }
    let manifest = Manifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        dataset_size: dataset.len(),
        k: cfg.k,
        seeds: cfg.seeds.iter().filter(|(v, _)| variants.contains_key(v)).map(|(v, s)| (v.name().into(), *s)).collect(),
        counts: variants.iter().map(|(v, s)| (v.name().into(), s.len())).collect(),
    };
    Ok(Suite { variants, manifest })
}
