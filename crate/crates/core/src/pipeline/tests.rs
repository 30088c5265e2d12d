use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::prompt::{formal_template, grammar_block, render_formalisation, COT, DIRECT, FORMAL_FOL};
use super::*;
use crate::perturb::{PerturbationRecord, RuleTag};
use crate::syntax::{parse, SourceDoc};

const GOLD: &str = "Predicates:\nLeaveLate(x) ::: x leaves late.\nMissTrain(x) ::: x misses their train.\nPremises:\n∀x (LeaveLate(x) → MissTrain(x)) ::: If a person leaves late, they will miss their train.\nLeaveLate(james) ::: James leaves late.\nConclusion:\nMissTrain(james) ::: James misses his train.\n";

fn sample(id: &str, label: Answer) -> PerturbedSample {
    PerturbedSample {
        base_id: id.into(),
        variant: Variant::O,
        context: vec!["If a person leaves late, they will miss their train.".into(), "James left late.".into()],
        question: "Does James miss his train?".into(),
        label,
        rule: RuleTag::ModusPonens,
        provenance: PerturbationRecord::default(),
        gold_problem: Some(parse(&SourceDoc::new(GOLD, SyntaxId::Fol)).unwrap()),
    }
}

fn cfg(format: Format, recovery: Recovery) -> RunConfig {
    RunConfig { format, recovery, ..RunConfig::default() }
}

fn mock(id: &str, responses: &[&str]) -> MockBackend {
    MockBackend::new(BTreeMap::from([(id.to_string(), responses.iter().map(|s| s.to_string()).collect())]))
}

const BROKEN: &str = "Premises:\nman ∧ mortal(Socrates)\nConclusion:\nmortal(Socrates)\n";

#[test]
fn prompts_contain_the_template_phrases() {
    let ctx = vec!["A.".to_string()];
    let direct = build_prompt(&ctx, "Q?", Format::Direct, SyntaxId::Fol);
    assert!(direct.contains("Answer the question ONLY in 'yes' or 'no'"));
    assert!(direct.ends_with("----\nContext: A.\nQuestion: Q?\n"));
    let cot = build_prompt(&ctx, "Q?", Format::CoT, SyntaxId::Fol);
    assert!(cot.contains("Reasoning steps: [generate step-by-step"));
    let formal = build_prompt(&ctx, "Q?", Format::Formal, SyntaxId::Fol);
    for line in ["1) logical conjunction of expr1 and expr2: expr1 ∧ expr2", "7) logical universal quantification: ∀x"]
    {
        assert!(formal.contains(line));
    }
    assert!(formal.ends_with("----\nProblem: A.\nQuestion: Q?\n"));
    assert_eq!(DIRECT.matches("----\n").count(), 4);
    assert_eq!(COT.matches("----\n").count(), 4);
}

#[test]
fn fol_grammar_block_matches_the_template() {
    assert!(FORMAL_FOL.contains(&grammar_block(SyntaxId::Fol)));
    assert_eq!(formal_template(SyntaxId::Fol), FORMAL_FOL);
}

#[test]
fn translated_examples_keep_their_meaning() {
    let chunks = |t: &str| t.split("----\n").skip(1).filter(|c| !c.is_empty()).map(String::from).collect::<Vec<_>>();
    let fol = chunks(FORMAL_FOL);
    assert_eq!(fol.len(), 3);
    for syntax in [SyntaxId::Rfol, SyntaxId::Tptp] {
        let t = formal_template(syntax);
        assert!(t.starts_with("Task Description: Given a problem description and a question."));
        assert!(t.contains(&grammar_block(syntax)));
        let other = chunks(&t);
        assert_eq!(other.len(), 3);
        for (a, b) in fol.iter().zip(&other) {
            let pa = extract_problem(a, SyntaxId::Fol).unwrap();
            let pb = extract_problem(b, syntax).unwrap();
            assert!(pa.alpha_equal(&pb), "{syntax:?}\n{b}");
            assert_eq!(
                pa.premises.iter().map(|p| &p.gloss).collect::<Vec<_>>(),
                pb.premises.iter().map(|p| &p.gloss).collect::<Vec<_>>()
            );
        }
    }
    assert!(formal_template(SyntaxId::Tptp).contains("fof(a0,axiom,![X]:('GoesToOffice'(X) | 'GoesHome'(X))). ::: Either someone goes to the office or someone goes home."));
    assert!(formal_template(SyntaxId::Rfol).contains("∀?x (LeaveLate(?x) → MissTrain(?x))"));
}

#[test]
fn third_example_extracts() {
    let third = FORMAL_FOL.split("----\n").nth(3).unwrap();
    let p = extract_problem(third, SyntaxId::Fol).unwrap();
    assert_eq!(p.premises.len(), 2);
    let c = p.conclusion.unwrap();
    assert_eq!(c.formula, crate::syntax::parse_formula("GoesHome(jill)", SyntaxId::Fol).unwrap());
    assert_eq!(c.gloss, "Jill goes home.");
}

#[test]
fn oracle_tptp_emits_fof_units() {
    let s = sample("s1", Answer::Yes);
    let text = render_formalisation(s.gold_problem.as_ref().unwrap(), SyntaxId::Tptp);
    assert!(text.contains("fof(a0,axiom,![X]:('LeaveLate'(X) => 'MissTrain'(X))). ::: If a person leaves late"));
    assert!(text.contains("Conclusion:\nfof(goal,conjecture,'MissTrain'(james))."));
}

#[test]
fn oracle_identity_in_every_format_and_syntax() {
    for label in [Answer::Yes, Answer::No] {
        let mut s = sample("s", label);
        if label == Answer::No {
            let p = s.gold_problem.as_mut().unwrap();
            p.conclusion.as_mut().unwrap().formula =
                crate::syntax::parse_formula("¬MissTrain(james)", SyntaxId::Fol).unwrap();
        }
        for syntax in SyntaxId::ALL {
            for format in [Format::Direct, Format::CoT, Format::Formal] {
                let c = RunConfig { syntax, ..cfg(format, Recovery::NoRecovery) };
                let oracle = OracleBackend::new(format, syntax, [&s]);
                let r = run_sample(&s, &c, &oracle).unwrap();
                assert_eq!(r.predicted, label, "{format:?} {syntax:?}");
                assert!(r.parsed());
                assert!(!r.used_fallback);
                assert_eq!(r.parse_status == ParseStatus::NotApplicable, format != Format::Formal);
            }
        }
    }
}

#[test]
fn no_recovery_falls_back() {
    let s = sample("s1", Answer::Yes);
    let r = run_sample(&s, &cfg(Format::Formal, Recovery::NoRecovery), &mock("s1", &[BROKEN])).unwrap();
    assert!(r.used_fallback);
    assert_eq!(r.parse_status, ParseStatus::Failed);
    assert_eq!(r.refinement_rounds, 0);
    assert_eq!(r.predicted, fallback_answer(0, "s1", Variant::O));
    assert_eq!(r.transcript[0].diagnostic.as_deref(), Some("mismatched input '∧' expecting '('"));
}

#[test]
fn one_failure_then_recovered() {
    let s = sample("s1", Answer::Yes);
    let backend = mock("s1", &[BROKEN, GOLD]);
    let r = run_sample(&s, &cfg(Format::Formal, Recovery::ErrorMessage), &backend).unwrap();
    assert_eq!(r.parse_status, ParseStatus::Parsed);
    assert_eq!(r.refinement_rounds, 1);
    assert_eq!(r.predicted, Answer::Yes);
    assert_eq!(r.prover_status.as_deref(), Some("entailed"));
    let second = &r.transcript[1].request.prompt;
    assert!(second.starts_with(&r.transcript[0].request.prompt));
    assert!(second
        .ends_with(&format!("mortal(Socrates)\nFeedback: mismatched input '∧' expecting '('\n{REFINE_INSTRUCTION}\n")));

    let r = run_sample(&s, &cfg(Format::Formal, Recovery::ErrorType), &backend).unwrap();
    assert!(r.transcript[1].request.prompt.contains("\nFeedback: parsing error\n"));
}

#[test]
fn refinements_are_capped() {
    let s = sample("s1", Answer::Yes);
    let backend = mock("s1", &[BROKEN; 10]);
    for max in [0, 1, 3] {
        let c = RunConfig { max_refinements: max, ..cfg(Format::Formal, Recovery::ErrorMessage) };
        let r = run_sample(&s, &c, &backend).unwrap();
        assert_eq!(r.refinement_rounds, max);
        assert_eq!(r.transcript.len(), max + 1);
        assert!(r.used_fallback);
    }
}

#[test]
fn warnings_trigger_one_extra_round() {
    let s = sample("s1", Answer::Yes);
    // `Mortal` only occurs in the conclusion
    let warned = "Premises:\n∀x (man(x) → mortal(x))\nman(socrates)\nConclusion:\nMortal(socrates)\n";
    let backend = mock("s1", &[warned, warned, GOLD]);
    let r = run_sample(&s, &cfg(Format::Formal, Recovery::Warning), &backend).unwrap();
    assert_eq!(r.refinement_rounds, 1);
    assert_eq!(r.parse_status, ParseStatus::Parsed);
    assert!(!r.used_fallback);
    assert!(!r.warnings.is_empty());
    assert!(r.transcript[1].request.prompt.contains("Feedback: WARN QueryOnlySymbol"));
    // other strategies record the warnings without acting on them
    let r = run_sample(&s, &cfg(Format::Formal, Recovery::ErrorMessage), &backend).unwrap();
    assert_eq!(r.refinement_rounds, 0);
    assert!(!r.warnings.is_empty());
}

#[test]
fn informal_extraction_failure_falls_back() {
    let s = sample("s1", Answer::Yes);
    let r = run_sample(&s, &cfg(Format::CoT, Recovery::NoRecovery), &mock("s1", &["The answer is unclear."])).unwrap();
    assert!(r.used_fallback);
    assert_eq!(r.parse_status, ParseStatus::NotApplicable);
    assert!(!r.parsed());
}

#[test]
fn exhausted_script_is_an_error() {
    let s = sample("s1", Answer::Yes);
    let e = run_sample(&s, &cfg(Format::Formal, Recovery::ErrorMessage), &mock("s1", &[BROKEN])).unwrap_err();
    assert_eq!(e, BackendError::ScriptExhausted { sample_id: "s1".into(), attempt: 1 });
    let e = run_sample(&s, &cfg(Format::Direct, Recovery::NoRecovery), &mock("other", &["yes"])).unwrap_err();
    assert!(matches!(e, BackendError::ScriptExhausted { attempt: 0, .. }));
}

#[test]
fn variant_keys_take_precedence() {
    let mut s = sample("s1", Answer::Yes);
    s.variant = Variant::TC;
    let mut script = BTreeMap::new();
    script.insert("s1".to_string(), vec!["yes".to_string()]);
    script.insert("s1@T_C".to_string(), vec!["no".to_string()]);
    let r = run_sample(&s, &cfg(Format::Direct, Recovery::NoRecovery), &MockBackend::new(script)).unwrap();
    assert_eq!(r.predicted, Answer::No);
}

#[test]
fn transcripts_replay_exactly() {
    let s = sample("s1", Answer::Yes);
    let c = cfg(Format::Formal, Recovery::ErrorMessage);
    let r = run_sample(&s, &c, &mock("s1", &[BROKEN, BROKEN, GOLD])).unwrap();
    let again = run_sample(&s, &c, &MockBackend::from_transcript(&r)).unwrap();
    assert_eq!(r, again);
}

#[test]
fn config_validation() {
    assert!(cfg(Format::Direct, Recovery::ErrorType).validate().is_err());
    assert!(cfg(Format::Formal, Recovery::ErrorType).validate().is_ok());
    let bad = RunConfig { temperature: f64::NAN, ..RunConfig::default() };
    assert_eq!(bad.validate(), Err(ConfigError::BadTemperature));
    assert_eq!("error-message".parse::<Recovery>(), Ok(Recovery::ErrorMessage));
    assert_eq!("CoT".parse::<Format>(), Ok(Format::CoT));
}

#[test]
fn fallback_is_per_sample() {
    let answers: Vec<Answer> = (0..64).map(|i| fallback_answer(5, &format!("s{i}"), Variant::O)).collect();
    let again: Vec<Answer> = (0..64).rev().map(|i| fallback_answer(5, &format!("s{i}"), Variant::O)).collect();
    assert_eq!(answers, again.into_iter().rev().collect::<Vec<_>>());
    assert!(answers.contains(&Answer::Yes) && answers.contains(&Answer::No));
}
