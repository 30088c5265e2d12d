//! Converter from the public LogicBench BQA layout.
//!
//! Input is one JSON document per inference rule:
//!
//! ```json
//! {"type": "first_order_logic", "axiom": "modus_ponens",
//!  "samples": [{"id": 1, "context": "...",
//!               "qa_pairs": [{"question": "...", "answer": "yes"}]}]}
//! ```
//!
//! Each question becomes one [`Sample`]:
//!
//! | LogicBench              | Sample     |
//! |-------------------------|------------|
//! | `axiom`                 | `rule`     |
//! | `context`, split into sentences | `context` |
//! | `qa_pairs[i].question`  | `question` |
//! | `qa_pairs[i].answer`    | `label`    |
//! | `{axiom}-{id}-{i}`      | `id`       |
//!
//! Unknown fields are ignored. Gold formalisations and negation spans are
//! not part of the source and stay empty.

use folbench_core::perturb::{RuleTag, Sample};
use folbench_core::Answer;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConvertError {
    #[error("invalid LogicBench JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown axiom '{0}'")]
    UnknownAxiom(String),
    #[error("sample {id}: answer '{answer}' is not yes or no")]
    BadAnswer { id: String, answer: String },
    #[error("sample {0}: empty context")]
    EmptyContext(String),
}

#[derive(Deserialize)]
struct File {
    axiom: String,
    samples: Vec<Entry>,
}

#[derive(Deserialize)]
struct Entry {
    id: Value,
    context: String,
    qa_pairs: Vec<Qa>,
}

#[derive(Deserialize)]
struct Qa {
    question: String,
    answer: String,
}

/// Splits after `.`, `!` or `?` when followed by whitespace.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let boundary = matches!(c, '.' | '!' | '?') && chars.peek().is_none_or(|(_, n)| n.is_whitespace());
        if boundary {
            let end = i + c.len_utf8();
            let s = text[start..end].trim();
            if !s.is_empty() {
                out.push(s.to_string());
            }
            start = end;
        }
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
    out
}

pub fn convert(json: &str) -> Result<Vec<Sample>, ConvertError> {
    let file: File = serde_json::from_str(json)?;
    let axiom = file.axiom.trim().to_ascii_lowercase().replace([' ', '-'], "_");
    let rule: RuleTag = serde_json::from_value(Value::String(axiom.clone()))
        .map_err(|_| ConvertError::UnknownAxiom(file.axiom.clone()))?;
    let mut out = Vec::new();
    for entry in file.samples {
        let sid = match &entry.id {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let context = split_sentences(&entry.context);
        if context.is_empty() {
            return Err(ConvertError::EmptyContext(sid));
        }
        for (i, qa) in entry.qa_pairs.iter().enumerate() {
            let id = format!("{axiom}-{sid}-{i}");
            let label: Answer = qa
                .answer
                .trim()
                .parse()
                .map_err(|_| ConvertError::BadAnswer { id: id.clone(), answer: qa.answer.clone() })?;
            out.push(Sample {
                id,
                context: context.clone(),
                question: qa.question.trim().to_string(),
                label,
                rule,
                gold_problem: None,
                negation_spans: None,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentences() {
        assert_eq!(
            split_sentences("If it rains, he stays. It rains!  Does he?"),
            ["If it rains, he stays.", "It rains!", "Does he?"]
        );
        assert_eq!(split_sentences("Version 1.5 is out"), ["Version 1.5 is out"]);
        assert!(split_sentences("  ").is_empty());
    }

    #[test]
    fn converts_and_ignores_unknown_fields() {
        let json = r#"{"type":"first_order_logic","axiom":"modus_tollens","extra":1,
            "samples":[{"id":3,"context":"A. B.","note":"x","qa_pairs":[
              {"question":"Q1?","answer":"Yes"},{"question":"Q2?","answer":"no","why":"-"}]}]}"#;
        let samples = convert(json).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[1].id, "modus_tollens-3-1");
        assert_eq!(samples[0].context, ["A.", "B."]);
        assert_eq!(samples[1].label, Answer::No);
        assert_eq!(samples[0].rule, RuleTag::ModusTollens);
    }

    #[test]
    fn rejects_bad_values() {
        let bad_axiom = r#"{"axiom":"abduction","samples":[]}"#;
        assert!(matches!(convert(bad_axiom), Err(ConvertError::UnknownAxiom(_))));
        let bad_answer = r#"{"axiom":"modus_ponens","samples":[{"id":"a","context":"A.","qa_pairs":[{"question":"?","answer":"maybe"}]}]}"#;
        assert!(matches!(convert(bad_answer), Err(ConvertError::BadAnswer { .. })));
    }
}
