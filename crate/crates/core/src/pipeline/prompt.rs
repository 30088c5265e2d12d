use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::Format;
use crate::ast::Problem;
use crate::syntax::{parse, print_formula, print_template, SourceDoc, SyntaxId};

pub const DIRECT: &str = include_str!("../../data/prompts/direct.txt");
pub const COT: &str = include_str!("../../data/prompts/cot.txt");
/// The autoformalisation prompt with its FOL grammar block and examples.
pub const FORMAL_FOL: &str = include_str!("../../data/prompts/formal_fol.txt");

const SEPARATOR: &str = "----\n";
const GRAMMAR_HEADER: &str = "The grammar of the first-order logic formular is defined as follows:";

const GRAMMAR_ITEMS: [&str; 8] = [
    "logical conjunction of expr1 and expr2: ",
    "logical disjunction of expr1 and expr2: ",
    "logical exclusive disjunction of expr1 and expr2: ",
    "logical negation of expr1: ",
    "expr1 implies expr2: ",
    "expr1 if and only if expr2: ",
    "logical universal quantification: ",
    "logical existential quantification: ",
];

fn grammar_forms(syntax: SyntaxId) -> [&'static str; 8] {
    match syntax {
        SyntaxId::Fol => {
            ["expr1 ∧ expr2", "expr1 ∨ expr2", "expr1 ⊕ expr2", "¬expr1", "expr1 → expr2", "expr1 ↔ expr2", "∀x", "∃x"]
        }
        SyntaxId::Rfol => [
            "expr1 ∧ expr2",
            "expr1 ∨ expr2",
            "expr1 ⊕ expr2",
            "¬expr1",
            "expr1 → expr2",
            "expr1 ↔ expr2",
            "∀?x",
            "∃?x",
        ],
        SyntaxId::Tptp => [
            "expr1 & expr2",
            "expr1 | expr2",
            "expr1 <~> expr2",
            "~expr1",
            "expr1 => expr2",
            "expr1 <=> expr2",
            "![X]:",
            "?[X]:",
        ],
    }
}

/// The numbered operator list shown to the formalizer.
pub fn grammar_block(syntax: SyntaxId) -> String {
    let mut out = format!("{GRAMMAR_HEADER}\n");
    for (i, (item, form)) in GRAMMAR_ITEMS.iter().zip(grammar_forms(syntax)).enumerate() {
        out.push_str(&format!("{}) {item}{form}\n", i + 1));
    }
    out
}

fn is_lower_word(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn gloss_tail(gloss: &str) -> String {
    if gloss.is_empty() {
        String::new()
    } else {
        format!(" ::: {gloss}")
    }
}

/// A problem in the Predicates / Premises / Conclusion layout. Under TPTP
/// each premise and the conclusion is a complete `fof` unit.
pub fn render_formalisation(p: &Problem, syntax: SyntaxId) -> String {
    if syntax != SyntaxId::Tptp {
        return print_template(p, syntax);
    }
    let full = print_template(p, syntax);
    let mut out = String::new();
    if let Some(end) = full.find("Premises:\n") {
        out.push_str(&full[..end]);
    }
    out.push_str("Premises:\n");
    for (i, prem) in p.premises.iter().enumerate() {
        let name = if is_lower_word(&prem.label) { prem.label.clone() } else { format!("a{i}") };
        let f = print_formula(&prem.formula, syntax);
        out.push_str(&format!("fof({name},axiom,{f}).{}\n", gloss_tail(&prem.gloss)));
    }
    if let Some(c) = &p.conclusion {
        let f = print_formula(&c.formula, syntax);
        out.push_str(&format!("Conclusion:\nfof(goal,conjecture,{f}).{}\n", gloss_tail(&c.gloss)));
    }
    out
}

/// The autoformalisation prompt for `syntax`. FOL is the template as is; the
/// other syntaxes get their own operator list and the examples translated.
pub fn formal_template(syntax: SyntaxId) -> String {
    if syntax == SyntaxId::Fol {
        return FORMAL_FOL.into();
    }
    let mut chunks = FORMAL_FOL.split(SEPARATOR).filter(|c| !c.is_empty());
    let head = chunks.next().unwrap_or_default();
    let task = head.lines().next().unwrap_or_default();
    let mut out = format!("{task}\n{}{SEPARATOR}", grammar_block(syntax));
    for chunk in chunks {
        let split = chunk.find("Predicates:").unwrap_or(chunk.len());
        let (preamble, body) = chunk.split_at(split);
        let problem = parse(&SourceDoc::new(body, SyntaxId::Fol)).expect("shipped examples parse");
        out.push_str(preamble);
        out.push_str(&render_formalisation(&problem, syntax));
        out.push_str(SEPARATOR);
    }
    out
}

/// Template text for a format, ending with the separator line.
pub fn template(format: Format, syntax: SyntaxId) -> String {
    match format {
        Format::Direct => DIRECT.into(),
        Format::CoT => COT.into(),
        Format::Formal => formal_template(syntax),
    }
}

/// The full prompt: template followed by the test context and question.
pub fn build_prompt(context: &[String], question: &str, format: Format, syntax: SyntaxId) -> String {
    let label = if format == Format::Formal { "Problem" } else { "Context" };
    let context: Vec<&str> = context.iter().map(|s| s.trim()).collect();
    format!("{}{label}: {}\nQuestion: {}\n", template(format, syntax), context.join(" "), question.trim())
}
