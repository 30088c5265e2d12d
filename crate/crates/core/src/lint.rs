//! Heuristic warnings that hint at semantic mistakes in a formalisation.
//!
//! Three checks run over a parsed [`Problem`]:
//!
//! * a predicate or individual that only the conclusion mentions, which
//!   usually means the context was formalised incompletely;
//! * a predicate used with more than one arity;
//! * two predicates (or two individuals) whose names are within a small edit
//!   distance of each other, e.g. `drinkWater` and `drinksWater`.
//!
//! Warnings never block; they are rendered as feedback text.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::ast::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WarningKind {
    QueryOnlySymbol,
    ArityMismatch,
    SimilarNames,
}

impl WarningKind {
    pub fn name(self) -> &'static str {
        match self {
            WarningKind::QueryOnlySymbol => "QueryOnlySymbol",
            WarningKind::ArityMismatch => "ArityMismatch",
            WarningKind::SimilarNames => "SimilarNames",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub subjects: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WARN {}: {} — {}", self.kind.name(), self.subjects.join(", "), self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintConfig {
    /// Largest edit distance still reported as similar.
    pub similarity_threshold: usize,
    /// Names shorter than this are never compared for similarity.
    pub min_length: usize,
    /// Lowercase both names before comparing.
    pub case_insensitive: bool,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig { similarity_threshold: 1, min_length: 4, case_insensitive: true }
    }
}

/// Levenshtein distance over Unicode scalar values.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Default)]
struct Symbols {
    /// name -> set of arities
    predicates: BTreeMap<String, BTreeSet<usize>>,
    constants: BTreeSet<String>,
}

impl Symbols {
    fn add(&mut self, f: &crate::ast::Formula) {
        for (name, arity) in f.predicates() {
            self.predicates.entry(name).or_default().insert(arity);
        }
        self.constants.extend(f.constants());
    }
}

/// Runs all three checks with the default configuration.
pub fn lint(p: &Problem) -> Vec<Warning> {
    lint_with(p, &LintConfig::default())
}

pub fn lint_with(p: &Problem, cfg: &LintConfig) -> Vec<Warning> {
    let mut context = Symbols::default();
    for f in p.premise_formulas() {
        context.add(f);
    }
    let mut query = Symbols::default();
    if let Some(c) = &p.conclusion {
        query.add(&c.formula);
    }

    let mut out = Vec::new();

    for name in query.predicates.keys() {
        if !context.predicates.contains_key(name) {
            out.push(Warning {
                kind: WarningKind::QueryOnlySymbol,
                subjects: vec![name.clone()],
                detail: format!("predicate '{name}' appears only in the conclusion"),
            });
        }
    }
    for name in &query.constants {
        if !context.constants.contains(name) {
            out.push(Warning {
                kind: WarningKind::QueryOnlySymbol,
                subjects: vec![name.clone()],
                detail: format!("individual '{name}' appears only in the conclusion"),
            });
        }
    }

    let mut all = Symbols::default();
    for f in p.formulas() {
        all.add(f);
    }
    for d in &p.predicates {
        all.predicates.entry(d.name.clone()).or_default().insert(d.arity);
    }
    for (name, arities) in &all.predicates {
        if arities.len() > 1 {
            let list: Vec<String> = arities.iter().map(|a| format!("{a}")).collect();
            out.push(Warning {
                kind: WarningKind::ArityMismatch,
                subjects: vec![name.clone()],
                detail: format!("predicate '{name}' is used with arities {}", list.join(", ")),
            });
        }
    }

    let norm = |s: &str| if cfg.case_insensitive { s.to_lowercase() } else { String::from(s) };
    let mut similar = BTreeSet::new();
    let mut pairs = |names: &mut dyn Iterator<Item = &String>, what: &str| {
        let names: Vec<&String> = names.collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                if a.chars().count() < cfg.min_length || b.chars().count() < cfg.min_length {
                    continue;
                }
                let d = edit_distance(&norm(a), &norm(b));
                if d <= cfg.similarity_threshold {
                    let (x, y) = if a <= b { (*a, *b) } else { (*b, *a) };
                    similar.insert((x.clone(), y.clone(), format!("{what} names differ by edit distance {d}")));
                }
            }
        }
    };
    pairs(&mut all.predicates.keys(), "predicate");
    pairs(&mut all.constants.iter(), "individual");
    for pred in all.predicates.keys() {
        for c in &all.constants {
            if norm(pred) == norm(c) {
                similar.insert((
                    pred.clone(),
                    c.clone(),
                    format!("'{pred}' is used both as a predicate and as an individual (edit distance 0)"),
                ));
            }
        }
    }
    for (a, b, detail) in similar {
        out.push(Warning { kind: WarningKind::SimilarNames, subjects: vec![a, b], detail });
    }

    out.sort_by(|x, y| (x.kind, &x.subjects[0]).cmp(&(y.kind, &y.subjects[0])));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SourceDoc, SyntaxId};

    fn problem(text: &str) -> Problem {
        parse(&SourceDoc::new(text, SyntaxId::Fol)).unwrap()
    }

    /// Full (m+1)x(n+1) table, filled cell by cell from the recurrence.
    #[allow(clippy::needless_range_loop)]
    fn table_distance(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in t.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            t[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
                t[i][j] = (t[i - 1][j] + 1).min(t[i][j - 1] + 1).min(t[i - 1][j - 1] + cost);
            }
        }
        t[a.len()][b.len()]
    }

    #[test]
    fn distance_examples() {
        assert_eq!(edit_distance("abc", "abc"), 0);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("drinkWater", "drinksWater"), 1);
        assert_eq!(table_distance("drinkWater", "drinksWater"), 1);
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("abc", ""), 3);
    }

    #[test]
    fn query_only_symbol() {
        let p = problem("Premises:\n∀x (man(x) → mortal(x))\nman(socrates)\nConclusion:\nimmortal(socrates)\n");
        let w = lint(&p);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, WarningKind::QueryOnlySymbol);
        assert_eq!(w[0].subjects, vec![String::from("immortal")]);
    }

    #[test]
    fn arity_mismatch() {
        let p = problem("Premises:\npred(a)\npred(a, b)\nConclusion:\npred(a)\n");
        let w = lint(&p);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, WarningKind::ArityMismatch);
        assert_eq!(w[0].subjects, vec![String::from("pred")]);
    }

    #[test]
    fn similar_names() {
        let p =
            problem("Premises:\n∀x (drinkWater(x) → hydrated(x))\ndrinksWater(john)\nConclusion:\nhydrated(john)\n");
        let w = lint(&p);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, WarningKind::SimilarNames);
        assert_eq!(w[0].subjects, vec![String::from("drinkWater"), String::from("drinksWater")]);
    }

    #[test]
    fn cross_category_shadowing() {
        let p = problem("Premises:\nman(man)\nConclusion:\nman(man)\n");
        let w = lint(&p);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].kind, WarningKind::SimilarNames);
        assert!(w[0].detail.contains("edit distance 0"));
    }

    #[test]
    fn short_names_are_not_compared() {
        let p = problem("Premises:\ncat(a)\ncar(a)\nConclusion:\ncat(a)\n");
        assert!(lint(&p).is_empty());
    }

    #[test]
    fn rendering() {
        let w = Warning {
            kind: WarningKind::ArityMismatch,
            subjects: vec!["p".into()],
            detail: "predicate 'p' is used with arities 1, 2".into(),
        };
        assert_eq!(format!("{w}"), "WARN ArityMismatch: p — predicate 'p' is used with arities 1, 2");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn matches_table(a in "[a-cA-C]{0,8}", b in "[a-cA-C]{0,8}") {
                prop_assert_eq!(edit_distance(&a, &b), table_distance(&a, &b));
                prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
            }

            #[test]
            fn invariant_under_premise_reordering(seed in 0u64..1000) {
                let lines = [
                    "∀x (drinkWater(x) → hydrated(x))",
                    "drinksWater(john)",
                    "pred(a, b)",
                    "pred(john)",
                    "happy(jon)",
                ];
                let mut order: Vec<usize> = (0..lines.len()).collect();
                // deterministic shuffle from the seed
                let mut s = seed;
                for i in (1..order.len()).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    order.swap(i, (s >> 33) as usize % (i + 1));
                }
                let mut text = String::from("Premises:\n");
                for i in &order {
                    text.push_str(lines[*i]);
                    text.push('\n');
                }
                text.push_str("Conclusion:\nsad(mary)\n");
                let base = {
                    let mut t = String::from("Premises:\n");
                    for l in lines { t.push_str(l); t.push('\n'); }
                    t.push_str("Conclusion:\nsad(mary)\n");
                    t
                };
                prop_assert_eq!(lint(&problem(&text)), lint(&problem(&base)));
            }
        }
    }
}
