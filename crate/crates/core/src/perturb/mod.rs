//! Perturbed variants of deduction datasets.
//!
//! Noise variants prepend `k` distractor sentences to the context and keep
//! the label. Counterfactual variants negate one term of one premise, both
//! in the text (replayed from per-sample annotations) and in the gold logical
//! form, and flip the label.

mod counterfactual;
mod suite;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ast::{Answer, Problem};

pub use counterfactual::{apply_counterfactual, apply_spans, negate_premises, negate_schema, validate_flip, Schema};
pub use suite::{build_suite, Manifest, Suite, SuiteConfig, MANIFEST_SCHEMA_VERSION};

/// The nine first-order inference rules of the source benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleTag {
    ModusPonens,
    ModusTollens,
    HypotheticalSyllogism,
    DisjunctiveSyllogism,
    ConstructiveDilemma,
    DestructiveDilemma,
    BidirectionalDilemma,
    ExistentialGeneralization,
    UniversalInstantiation,
}

impl RuleTag {
    pub const ALL: [RuleTag; 9] = [
        RuleTag::ModusPonens,
        RuleTag::ModusTollens,
        RuleTag::HypotheticalSyllogism,
        RuleTag::DisjunctiveSyllogism,
        RuleTag::ConstructiveDilemma,
        RuleTag::DestructiveDilemma,
        RuleTag::BidirectionalDilemma,
        RuleTag::ExistentialGeneralization,
        RuleTag::UniversalInstantiation,
    ];

    /// Rules with a counterfactual negation schema.
    pub const COUNTERFACTUAL: [RuleTag; 8] = [
        RuleTag::ModusPonens,
        RuleTag::ModusTollens,
        RuleTag::HypotheticalSyllogism,
        RuleTag::DisjunctiveSyllogism,
        RuleTag::ConstructiveDilemma,
        RuleTag::BidirectionalDilemma,
        RuleTag::ExistentialGeneralization,
        RuleTag::UniversalInstantiation,
    ];

    pub fn supports_counterfactual(self) -> bool {
        self != RuleTag::DestructiveDilemma
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::ModusPonens => "modus_ponens",
            RuleTag::ModusTollens => "modus_tollens",
            RuleTag::HypotheticalSyllogism => "hypothetical_syllogism",
            RuleTag::DisjunctiveSyllogism => "disjunctive_syllogism",
            RuleTag::ConstructiveDilemma => "constructive_dilemma",
            RuleTag::DestructiveDilemma => "destructive_dilemma",
            RuleTag::BidirectionalDilemma => "bidirectional_dilemma",
            RuleTag::ExistentialGeneralization => "existential_generalization",
            RuleTag::UniversalInstantiation => "universal_instantiation",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A text edit inside one context sentence. Offsets count Unicode scalar
/// values; `start == end` is an insertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegationSpan {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub replacement: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub context: Vec<String>,
    pub question: String,
    pub label: Answer,
    pub rule: RuleTag,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "problem_text")]
    pub gold_problem: Option<Problem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negation_spans: Option<Vec<NegationSpan>>,
}

impl Sample {
    pub fn validate(&self) -> Result<(), PerturbError> {
        if self.context.is_empty() {
            return Err(PerturbError::EmptyContext(self.id.clone()));
        }
        Ok(())
    }
}

/// Gold problems are stored as FOL template text so dataset files stay
/// readable; a JSON AST is accepted on input as well.
mod problem_text {
    use alloc::string::String;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::ast::Problem;
    use crate::syntax::{parse, print_template, SourceDoc, SyntaxId};

    pub fn serialize<S: Serializer>(p: &Option<Problem>, s: S) -> Result<S::Ok, S::Error> {
        p.as_ref().map(|p| print_template(p, SyntaxId::Fol)).serialize(s)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Ast(Problem),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Problem>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Ast(p)) => Ok(Some(p)),
            Some(Repr::Text(t)) => parse(&SourceDoc::new(t, SyntaxId::Fol))
                .map(Some)
                .map_err(|e| D::Error::custom(alloc::format!("gold_problem: {e}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    O,
    E,
    L,
    T,
    #[serde(rename = "O_C")]
    OC,
    #[serde(rename = "E_C")]
    EC,
    #[serde(rename = "L_C")]
    LC,
    #[serde(rename = "T_C")]
    TC,
}

impl Variant {
    /// Report column order.
    pub const ALL: [Variant; 8] =
        [Variant::O, Variant::E, Variant::L, Variant::T, Variant::OC, Variant::EC, Variant::LC, Variant::TC];

    pub fn name(self) -> &'static str {
        match self {
            Variant::O => "O",
            Variant::E => "E",
            Variant::L => "L",
            Variant::T => "T",
            Variant::OC => "O_C",
            Variant::EC => "E_C",
            Variant::LC => "L_C",
            Variant::TC => "T_C",
        }
    }

    pub fn is_counterfactual(self) -> bool {
        matches!(self, Variant::OC | Variant::EC | Variant::LC | Variant::TC)
    }

    pub fn noise(self) -> Option<NoiseKind> {
        match self {
            Variant::E | Variant::EC => Some(NoiseKind::Encyclopedic),
            Variant::L | Variant::LC => Some(NoiseKind::Logical),
            Variant::T | Variant::TC => Some(NoiseKind::Tautological),
            Variant::O | Variant::OC => None,
        }
    }

    pub fn with_noise(kind: Option<NoiseKind>, counterfactual: bool) -> Variant {
        match (kind, counterfactual) {
            (None, false) => Variant::O,
            (Some(NoiseKind::Encyclopedic), false) => Variant::E,
            (Some(NoiseKind::Logical), false) => Variant::L,
            (Some(NoiseKind::Tautological), false) => Variant::T,
            (None, true) => Variant::OC,
            (Some(NoiseKind::Encyclopedic), true) => Variant::EC,
            (Some(NoiseKind::Logical), true) => Variant::LC,
            (Some(NoiseKind::Tautological), true) => Variant::TC,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s) || v.name().replace('_', "").eq_ignore_ascii_case(s))
            .ok_or_else(|| alloc::format!("unknown variant '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Encyclopedic,
    Logical,
    Tautological,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseCorpus {
    pub kind: NoiseKind,
    pub sentences: Vec<String>,
}

const TAUTOLOGIES: &str = include_str!("../../data/tautologies.txt");

impl NoiseCorpus {
    /// Builds a corpus from newline-separated text, skipping blank lines.
    /// Every sentence must end with a period.
    pub fn from_lines(kind: NoiseKind, text: &str) -> Result<NoiseCorpus, PerturbError> {
        let mut sentences = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if !line.ends_with('.') {
                return Err(PerturbError::NotASentence { line: i + 1, text: line.into() });
            }
            sentences.push(String::from(line));
        }
        if sentences.is_empty() {
            return Err(PerturbError::EmptyCorpus(kind));
        }
        Ok(NoiseCorpus { kind, sentences })
    }

    /// The 22 shipped tautologies.
    pub fn tautological() -> NoiseCorpus {
        NoiseCorpus::from_lines(NoiseKind::Tautological, TAUTOLOGIES).expect("shipped corpus is well-formed")
    }

    /// Raw bytes of the shipped tautology file.
    pub fn tautology_file() -> &'static str {
        TAUTOLOGIES
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    /// Seed the noise was sampled with (after mixing in the sample id).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Corpus line indices of the prepended sentences, in prepended order.
    #[serde(default)]
    pub injected: Vec<usize>,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedSample {
    pub base_id: String,
    pub variant: Variant,
    pub context: Vec<String>,
    pub question: String,
    pub label: Answer,
    pub rule: RuleTag,
    pub provenance: PerturbationRecord,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "problem_text")]
    pub gold_problem: Option<Problem>,
}

impl PerturbedSample {
    /// The unperturbed variant `O` of a sample.
    pub fn original(s: &Sample) -> PerturbedSample {
        PerturbedSample {
            base_id: s.id.clone(),
            variant: Variant::O,
            context: s.context.clone(),
            question: s.question.clone(),
            label: s.label,
            rule: s.rule,
            provenance: PerturbationRecord::default(),
            gold_problem: s.gold_problem.clone(),
        }
    }

    /// Context sentences joined with single spaces.
    pub fn context_text(&self) -> String {
        self.context.join(" ")
    }
}

impl From<&Sample> for PerturbedSample {
    fn from(s: &Sample) -> Self {
        PerturbedSample::original(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    #[error("noise count must be 1, 2 or 4 (got {0})")]
    InvalidCount(usize),
    #[error("corpus has {available} sentences, {requested} requested")]
    CorpusTooSmall { available: usize, requested: usize },
    #[error("{0:?} corpus is empty")]
    EmptyCorpus(NoiseKind),
    #[error("corpus line {line} is not a sentence ending with a period: {text}")]
    NotASentence { line: usize, text: String },
    #[error("duplicate sample id '{0}'")]
    DuplicateId(String),
    #[error("sample '{0}' has an empty context")]
    EmptyContext(String),
    #[error("noise of kind {0:?} cannot produce variant {1}")]
    VariantMismatch(NoiseKind, Variant),
    #[error("rule {0} has no counterfactual schema")]
    UnsupportedRule(RuleTag),
    #[error("sample '{0}' has no negation annotation")]
    MissingAnnotation(String),
    #[error("sample '{id}': span {index} is out of range")]
    SpanOutOfRange { id: String, index: usize },
    #[error("sample '{0}': no term to negate in the gold problem")]
    NoNegationSite(String),
    #[error("sample '{id}': prover answers {got} on the {which} gold problem, expected {expected}")]
    LabelMismatch { id: String, which: &'static str, got: Answer, expected: Answer },
}

/// FNV-1a over the base seed and the sample id, so every sample draws from
/// its own stream regardless of processing order.
pub fn sample_seed(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed.to_le_bytes().iter().chain(id.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Prepends `k` distinct corpus sentences, drawn without replacement.
/// Applied to an `O` sample this yields the plain noise variant, applied to an
/// `O_C` sample the counterfactual one.
pub fn inject_noise(
    s: &PerturbedSample,
    corpus: &NoiseCorpus,
    k: usize,
    seed: u64,
) -> Result<PerturbedSample, PerturbError> {
    if ![1, 2, 4].contains(&k) {
        return Err(PerturbError::InvalidCount(k));
    }
    if corpus.sentences.len() < k {
        return Err(PerturbError::CorpusTooSmall { available: corpus.sentences.len(), requested: k });
    }
    let variant = Variant::with_noise(Some(corpus.kind), s.variant.is_counterfactual());
    if s.variant.noise().is_some() {
        return Err(PerturbError::VariantMismatch(corpus.kind, s.variant));
    }
    let mixed = sample_seed(seed, &s.base_id);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let picked: Vec<usize> = rand::seq::index::sample(&mut rng, corpus.sentences.len(), k).into_vec();
    debug_assert_eq!(picked.iter().collect::<BTreeSet<_>>().len(), k);
    let mut context: Vec<String> = picked.iter().map(|&i| corpus.sentences[i].clone()).collect();
    context.extend(s.context.iter().cloned());
    Ok(PerturbedSample {
        base_id: s.base_id.clone(),
        variant,
        context,
        question: s.question.clone(),
        label: s.label,
        rule: s.rule,
        provenance: PerturbationRecord { seed: Some(mixed), injected: picked, negated: s.provenance.negated },
        gold_problem: s.gold_problem.clone(),
    })
}
