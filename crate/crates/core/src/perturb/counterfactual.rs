use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{PerturbError, PerturbationRecord, PerturbedSample, RuleTag, Sample, Variant};
use crate::ast::{Answer, Formula, Problem, Term};
use crate::prover::{decide, ProverBudget};
use crate::syntax::{parse_formula, SyntaxId};

/// An inference rule as an entailment over `p`, `q`, `r`, `s` and the
/// constant `a`, before and after the counterfactual negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub rule: RuleTag,
    pub original: Problem,
    pub negated: Problem,
    /// The label of a fixed question flips between the two forms.
    pub label_flip: bool,
}

impl Schema {
    /// Both forms with the constant `a` renamed to `constant`.
    pub fn instantiate(&self, constant: &str) -> Schema {
        Schema {
            rule: self.rule,
            original: rename_in_problem(&self.original, "a", constant),
            negated: rename_in_problem(&self.negated, "a", constant),
            label_flip: self.label_flip,
        }
    }
}

// (premise, conclusion) pairs, original then negated.
fn schema_text(rule: RuleTag) -> Option<[(&'static str, &'static str); 2]> {
    use RuleTag::*;
    Some(match rule {
        BidirectionalDilemma => [
            ("∀x (p(x) → q(x)) ∧ (r(x) → s(x)) ∧ (p(a) ∨ ¬s(a))", "q(a) ∨ ¬r(a)"),
            ("∀x (p(x) → ¬q(x)) ∧ (r(x) → s(x)) ∧ (p(a) ∨ ¬s(a))", "¬q(a) ∨ ¬r(a)"),
        ],
        ConstructiveDilemma => [
            ("∀x ((p(x) → q(x)) ∧ (r(x) → s(x))) ∧ (p(a) ∨ r(a))", "q(a) ∨ s(a)"),
            ("∀x ((p(x) → ¬q(x)) ∧ (r(x) → s(x))) ∧ (p(a) ∨ r(a))", "¬q(a) ∨ s(a)"),
        ],
        // the negated premise no longer yields q(a); ¬q(a) is what follows
        DisjunctiveSyllogism => [("∀x (p(x) ∨ q(x)) ∧ ¬p(a)", "q(a)"), ("∀x (p(x) ∨ ¬q(x)) ∧ ¬p(a)", "¬q(a)")],
        ExistentialGeneralization => [("p(a)", "∃x p(x)"), ("¬p(a)", "∃x ¬p(x)")],
        HypotheticalSyllogism => {
            [("∀x (p(x) → q(x)) ∧ (q(x) → r(x))", "p(a) → r(a)"), ("∀x (¬p(x) → q(x)) ∧ (q(x) → r(x))", "¬p(a) → r(a)")]
        }
        ModusPonens => [("∀x (p(x) → q(x)) ∧ p(a)", "q(a)"), ("∀x (p(x) → ¬q(x)) ∧ p(a)", "¬q(a)")],
        ModusTollens => [("∀x (p(x) → q(x)) ∧ ¬q(a)", "¬p(a)"), ("∀x (¬p(x) → q(x)) ∧ ¬q(a)", "p(a)")],
        UniversalInstantiation => [("∀x p(x)", "p(a)"), ("∀x ¬p(x)", "¬p(a)")],
        DestructiveDilemma => return None,
    })
}

/// The original and negated entailment schemas of `rule`.
pub fn negate_schema(rule: RuleTag) -> Result<Schema, PerturbError> {
    let [orig, neg] = schema_text(rule).ok_or(PerturbError::UnsupportedRule(rule))?;
    let build = |(premise, conclusion): (&str, &str)| {
        let f = |s: &str| parse_formula(s, SyntaxId::Fol).expect("schema text parses");
        Problem::from_formulas(alloc::vec![f(premise)], Some(f(conclusion)))
    };
    Ok(Schema { rule, original: build(orig), negated: build(neg), label_flip: true })
}

fn rename_term(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Constant(c) if c == from => Term::Constant(to.into()),
        Term::Function(f, args) => Term::Function(f.clone(), args.iter().map(|a| rename_term(a, from, to)).collect()),
        _ => t.clone(),
    }
}

fn rename_constant(f: &Formula, from: &str, to: &str) -> Formula {
    let r = |g: &Formula| Box::new(rename_constant(g, from, to));
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| rename_term(a, from, to)).collect()),
        Formula::Not(g) => Formula::Not(r(g)),
        Formula::And(a, b) => Formula::And(r(a), r(b)),
        Formula::Or(a, b) => Formula::Or(r(a), r(b)),
        Formula::Xor(a, b) => Formula::Xor(r(a), r(b)),
        Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), r(g)),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), r(g)),
    }
}

fn rename_in_problem(p: &Problem, from: &str, to: &str) -> Problem {
    let mut out = p.clone();
    for prem in &mut out.premises {
        prem.formula = rename_constant(&prem.formula, from, to);
    }
    if let Some(c) = &mut out.conclusion {
        c.formula = rename_constant(&c.formula, from, to);
    }
    out
}

fn toggle(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => (**g).clone(),
        _ => Formula::not(f.clone()),
    }
}

#[derive(Clone, Copy)]
enum Site {
    Consequent,
    Antecedent,
    RightDisjunct,
    UniversalBody,
}

fn site(rule: RuleTag) -> Option<Site> {
    use RuleTag::*;
    match rule {
        ModusPonens | ConstructiveDilemma | BidirectionalDilemma => Some(Site::Consequent),
        ModusTollens | HypotheticalSyllogism => Some(Site::Antecedent),
        DisjunctiveSyllogism => Some(Site::RightDisjunct),
        UniversalInstantiation => Some(Site::UniversalBody),
        ExistentialGeneralization | DestructiveDilemma => None,
    }
}

/// Negates the first matching subformula, searching through universal
/// quantifiers and conjunctions left to right.
fn negate_at(f: &Formula, site: Site) -> Option<Formula> {
    match (f, site) {
        (Formula::Forall(v, body), Site::UniversalBody) => match negate_at(body, site) {
            Some(g) => Some(Formula::Forall(v.clone(), Box::new(g))),
            None => Some(Formula::Forall(v.clone(), Box::new(toggle(body)))),
        },
        (Formula::Forall(v, body), _) => negate_at(body, site).map(|g| Formula::Forall(v.clone(), Box::new(g))),
        (Formula::And(a, b), _) => match negate_at(a, site) {
            Some(g) => Some(Formula::And(Box::new(g), b.clone())),
            None => negate_at(b, site).map(|g| Formula::And(a.clone(), Box::new(g))),
        },
        (Formula::Implies(a, b), Site::Consequent) => Some(Formula::Implies(a.clone(), Box::new(toggle(b)))),
        (Formula::Implies(a, b), Site::Antecedent) => Some(Formula::Implies(Box::new(toggle(a)), b.clone())),
        (Formula::Or(a, b), Site::RightDisjunct) => Some(Formula::Or(a.clone(), Box::new(toggle(b)))),
        _ => None,
    }
}

fn is_ground_literal(f: &Formula) -> bool {
    match f {
        Formula::Atom(_, args) => args.iter().all(Term::is_ground),
        Formula::Not(g) => matches!(**g, Formula::Atom(..)) && is_ground_literal(g),
        _ => false,
    }
}

/// Applies the rule's negation to the gold premises: the consequent of the
/// first implication (MP, CD, BD), its antecedent (MT, HS), the right
/// disjunct of the first disjunction (DS), the body of the first universal
/// (UI) or the first ground literal premise (EG). The conclusion is kept.
pub fn negate_premises(p: &Problem, rule: RuleTag, id: &str) -> Result<Problem, PerturbError> {
    if !rule.supports_counterfactual() {
        return Err(PerturbError::UnsupportedRule(rule));
    }
    let mut out = p.clone();
    let hit = match site(rule) {
        Some(site) => out.premises.iter_mut().find_map(|prem| {
            let g = negate_at(&prem.formula, site)?;
            prem.formula = g;
            Some(())
        }),
        None => out.premises.iter_mut().find(|prem| is_ground_literal(&prem.formula)).map(|prem| {
            prem.formula = toggle(&prem.formula);
        }),
    };
    hit.map(|_| out).ok_or_else(|| PerturbError::NoNegationSite(id.into()))
}

/// Applies text edits to `context`. Offsets are in characters; edits are
/// applied back to front so earlier offsets stay valid.
pub fn apply_spans(id: &str, context: &[String], spans: &[super::NegationSpan]) -> Result<Vec<String>, PerturbError> {
    let mut out: Vec<String> = context.to_vec();
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&i| (spans[i].sentence, spans[i].start, spans[i].end));
    let out_of_range = |index| PerturbError::SpanOutOfRange { id: id.into(), index };
    for w in order.windows(2) {
        let (a, b) = (&spans[w[0]], &spans[w[1]]);
        if a.sentence == b.sentence && a.end > b.start {
            return Err(out_of_range(w[1]));
        }
    }
    for &i in order.iter().rev() {
        let span = &spans[i];
        let sentence = out.get_mut(span.sentence).ok_or_else(|| out_of_range(i))?;
        let len = sentence.chars().count();
        if span.start > span.end || span.end > len {
            return Err(out_of_range(i));
        }
        let byte = |c: usize| sentence.char_indices().nth(c).map_or(sentence.len(), |(b, _)| b);
        let (from, to) = (byte(span.start), byte(span.end));
        sentence.replace_range(from..to, &span.replacement);
    }
    Ok(out)
}

/// Checks that the prover answers `label` on `gold` and its flip on `negated`.
pub fn validate_flip(id: &str, gold: &Problem, negated: &Problem, label: Answer) -> Result<(), PerturbError> {
    let budget = ProverBudget::default();
    for (which, p, expected) in [("original", gold, label), ("negated", negated, label.flip())] {
        let got = decide(p, &budget).answer;
        if got != expected {
            return Err(PerturbError::LabelMismatch { id: id.into(), which, got, expected });
        }
    }
    Ok(())
}

/// Builds the `O_C` variant of a sample: replays the recorded text edits,
/// negates the gold premises, flips the label and checks the flip with the
/// prover when a gold problem is present.
pub fn apply_counterfactual(s: &Sample) -> Result<PerturbedSample, PerturbError> {
    s.validate()?;
    if !s.rule.supports_counterfactual() {
        return Err(PerturbError::UnsupportedRule(s.rule));
    }
    let spans = match &s.negation_spans {
        Some(spans) if !spans.is_empty() => spans,
        _ => return Err(PerturbError::MissingAnnotation(s.id.clone())),
    };
    let context = apply_spans(&s.id, &s.context, spans)?;
    let gold_problem = match &s.gold_problem {
        Some(gold) => {
            let negated = negate_premises(gold, s.rule, &s.id)?;
            validate_flip(&s.id, gold, &negated, s.label)?;
            Some(negated)
        }
        None => None,
    };
    Ok(PerturbedSample {
        base_id: s.id.clone(),
        variant: Variant::OC,
        context,
        question: s.question.clone(),
        label: s.label.flip(),
        rule: s.rule,
        provenance: PerturbationRecord { seed: None, injected: Vec::new(), negated: true },
        gold_problem,
    })
}
