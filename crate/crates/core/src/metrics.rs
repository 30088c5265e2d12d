//! Accuracy, execution rate and valid accuracy.
//!
//! A sample is *parsed* when its formalisation parsed (formal format) or an
//! answer could be extracted (informal formats). Fallback answers count
//! towards accuracy but not towards the execution rate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::ast::Answer;
use crate::perturb::{PerturbedSample, Variant};
use crate::pipeline::SampleResult;

pub const METRICS_SCHEMA_VERSION: u32 = 1;

/// Counts and the three rates derived from them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub n: u64,
    pub correct: u64,
    pub parsed: u64,
    pub correct_parsed: u64,
    pub accuracy: f64,
    pub execution_rate: f64,
    /// `None` when nothing parsed.
    pub valid_accuracy: Option<f64>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Score {
    pub fn from_counts(n: u64, correct: u64, parsed: u64, correct_parsed: u64) -> Score {
        Score {
            n,
            correct,
            parsed,
            correct_parsed,
            accuracy: ratio(correct, n),
            execution_rate: ratio(parsed, n),
            valid_accuracy: (parsed > 0).then(|| ratio(correct_parsed, parsed)),
        }
    }

    fn add(&mut self, correct: bool, parsed: bool) {
        *self = Score::from_counts(
            self.n + 1,
            self.correct + u64::from(correct),
            self.parsed + u64::from(parsed),
            self.correct_parsed + u64::from(correct && parsed),
        );
    }

    pub fn accuracy_ratio(&self) -> Ratio {
        Ratio::new(self.correct, self.n)
    }

    pub fn execution_ratio(&self) -> Ratio {
        Ratio::new(self.parsed, self.n)
    }

    pub fn valid_ratio(&self) -> Option<Ratio> {
        (self.parsed > 0).then(|| Ratio::new(self.correct_parsed, self.parsed))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub schema_version: u32,
    #[serde(flatten)]
    pub overall: Score,
    pub per_variant: BTreeMap<Variant, Score>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("no gold sample for result '{id}' ({variant})")]
    MissingGold { id: String, variant: Variant },
    #[error("duplicate result for '{id}' ({variant})")]
    DuplicateResult { id: String, variant: Variant },
}

/// Scores results against the gold labels, matched on (id, variant).
pub fn evaluate(results: &[SampleResult], gold: &[PerturbedSample]) -> Result<Metrics, MetricsError> {
    let labels: BTreeMap<(&str, Variant), Answer> =
        gold.iter().map(|s| ((s.base_id.as_str(), s.variant), s.label)).collect();
    let mut seen = BTreeSet::new();
    let mut m = Metrics { schema_version: METRICS_SCHEMA_VERSION, ..Metrics::default() };
    m.overall = Score::from_counts(0, 0, 0, 0);
    for r in results {
        let key = (r.id.as_str(), r.variant);
        let label =
            labels.get(&key).ok_or_else(|| MetricsError::MissingGold { id: r.id.clone(), variant: r.variant })?;
        if !seen.insert(key) {
            return Err(MetricsError::DuplicateResult { id: r.id.clone(), variant: r.variant });
        }
        let correct = r.predicted == *label;
        m.overall.add(correct, r.parsed());
        m.per_variant.entry(r.variant).or_default().add(correct, r.parsed());
    }
    Ok(m)
}

/// An exact non-negative fraction, used so rounding never depends on
/// floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        Ratio { num: num.into(), den: den.into() }.reduced()
    }

    fn reduced(self) -> Ratio {
        match gcd(self.num, self.den) {
            0 | 1 => self,
            g => Ratio { num: self.num / g, den: self.den / g },
        }
    }

    pub fn plus(self, other: Ratio) -> Ratio {
        Ratio { num: self.num * other.den + other.num * self.den, den: self.den * other.den }.reduced()
    }

    pub fn div_int(self, k: u64) -> Ratio {
        Ratio { num: self.num, den: self.den * u128::from(k) }.reduced()
    }

    /// Hundredths, rounded half-up. `None` for a zero denominator.
    pub fn hundredths(self) -> Option<u128> {
        (self.den != 0).then(|| (self.num * 200 + self.den) / (self.den * 2))
    }

    /// Two decimals, rounded half-up, e.g. `0.70`.
    pub fn to_fixed2(self) -> Option<String> {
        self.hundredths().map(|h| format!("{}.{:02}", h / 100, h % 100))
    }

    /// The mean of `ratios`, or `None` if there are none.
    pub fn mean(ratios: &[Ratio]) -> Option<Ratio> {
        let (first, rest) = ratios.split_first()?;
        Some(rest.iter().fold(*first, |acc, r| acc.plus(*r)).div_int(ratios.len() as u64))
    }
}
