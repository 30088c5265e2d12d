use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use super::lexer::{lex, Comment};
use super::parser::{at_fof, Parser};
use super::printer::print_problem;
use super::{SyntaxError, SyntaxId};
use crate::ast::{Conclusion, Formula, PredicateDecl, Premise, Problem};

const PREDICATES: &str = "Predicates:";
const PREMISES: &str = "Premises:";
const CONCLUSION: &str = "Conclusion:";
/// Lines that end a section without opening one of ours.
const STOPS: [&str; 3] = ["Problem:", "Question:", "----"];

/// Byte spans of the section bodies of a template document. A body starts
/// right after its header's colon and ends before the next header line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SectionMap {
    pub predicates: Option<Range<usize>>,
    pub premises: Option<Range<usize>>,
    pub conclusion: Option<Range<usize>>,
}

impl SectionMap {
    pub fn is_template(&self) -> bool {
        self.premises.is_some() || self.conclusion.is_some()
    }

    /// Locates the first Premises header, the Predicates header closest
    /// before it and the first Conclusion header after it. Anything before
    /// the Predicates header (a conversational preamble, an echoed problem)
    /// is ignored.
    pub fn scan(raw: &str) -> SectionMap {
        let lines = split_lines(raw);
        let header_at = |idx: usize, name: &str| lines[idx].text.trim_start().starts_with(name);
        let is_boundary = |idx: usize| {
            let t = lines[idx].text.trim_start();
            [PREDICATES, PREMISES, CONCLUSION].iter().chain(STOPS.iter()).any(|h| t.starts_with(h))
        };
        let body = |idx: usize, name: &str| -> Range<usize> {
            let line = &lines[idx];
            let lead = line.text.len() - line.text.trim_start().len();
            let start = line.start + lead + name.len();
            let end = (idx + 1..lines.len()).find(|&j| is_boundary(j)).map(|j| lines[j].start).unwrap_or(raw.len());
            start..end.max(start)
        };

        let premises = (0..lines.len()).find(|&i| header_at(i, PREMISES));
        let (predicates, conclusion) = match premises {
            Some(p) => (
                (0..p).rev().find(|&i| header_at(i, PREDICATES)),
                (p + 1..lines.len()).find(|&i| header_at(i, CONCLUSION)),
            ),
            None => {
                let c = (0..lines.len()).find(|&i| header_at(i, CONCLUSION));
                let upto = c.unwrap_or(lines.len());
                ((0..upto).rev().find(|&i| header_at(i, PREDICATES)), c)
            }
        };
        SectionMap {
            predicates: predicates.map(|i| body(i, PREDICATES)),
            premises: premises.map(|i| body(i, PREMISES)),
            conclusion: conclusion.map(|i| body(i, CONCLUSION)),
        }
    }
}

/// Raw text tagged with the syntax it is written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceDoc {
    pub raw: String,
    pub syntax: SyntaxId,
    pub sections: SectionMap,
}

impl SourceDoc {
    pub fn new(raw: impl Into<String>, syntax: SyntaxId) -> SourceDoc {
        let raw = raw.into();
        let sections = SectionMap::scan(&raw);
        SourceDoc { raw, syntax, sections }
    }
}

struct Line<'a> {
    start: usize,
    number: usize,
    text: &'a str,
}

fn split_lines(raw: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, piece) in raw.split_inclusive('\n').enumerate() {
        let text = piece.strip_suffix('\n').unwrap_or(piece);
        let text = text.strip_suffix('\r').unwrap_or(text);
        out.push(Line { start, number: i + 1, text });
        start += piece.len();
    }
    out
}

/// One content line: 1-based line number, 1-based column of `text`, formula
/// text and the gloss after `:::`.
struct Entry<'a> {
    line: usize,
    column: usize,
    text: &'a str,
    gloss: String,
}

fn is_noise_line(text: &str) -> bool {
    let t = text.trim();
    t.is_empty() || t.starts_with("```")
}

fn entries<'a>(raw: &'a str, span: Range<usize>) -> Vec<Entry<'a>> {
    let mut out = Vec::new();
    for line in split_lines(raw) {
        let line_end = line.start + line.text.len();
        if line_end < span.start || line.start >= span.end {
            continue;
        }
        let from = span.start.max(line.start) - line.start;
        let to = span.end.min(line_end).max(line.start + from) - line.start;
        let text = &line.text[from..to];
        if is_noise_line(text) {
            continue;
        }
        let (formula, gloss) = match text.find(":::") {
            Some(k) => (&text[..k], text[k + 3..].trim()),
            None => (text, ""),
        };
        let lead = formula.len() - formula.trim_start().len();
        let column = line.text[..from + lead].chars().count() + 1;
        out.push(Entry { line: line.number, column, text: formula.trim(), gloss: gloss.into() });
    }
    out
}

/// Parses a single formula; positions are reported relative to `line`/`column`.
fn formula_at(text: &str, syntax: SyntaxId, line: usize, column: usize) -> Result<Formula, SyntaxError> {
    let lexed = lex(text, syntax, line, column)?;
    let mut p = Parser::new(&lexed.tokens, syntax);
    p.formula().and_then(|f| p.end().map(|_| f))
}

/// A `Name(X, Y)` declaration line, where TPTP argument placeholders are
/// variables no quantifier binds.
fn declaration_at(e: &Entry<'_>, syntax: SyntaxId) -> Result<Formula, SyntaxError> {
    let lexed = lex(e.text, syntax, e.line, e.column)?;
    let mut p = Parser::new(&lexed.tokens, syntax);
    p.free_variables = true;
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

/// Parses one formula in the given syntax.
pub fn parse_formula(text: &str, syntax: SyntaxId) -> Result<Formula, SyntaxError> {
    formula_at(text, syntax, 1, 1)
}

/// A template line: a bare formula, or under TPTP optionally a whole `fof` unit.
fn entry_formula(e: &Entry<'_>, syntax: SyntaxId) -> Result<(Option<String>, Formula), SyntaxError> {
    if syntax == SyntaxId::Tptp {
        let lexed = lex(e.text, syntax, e.line, e.column)?;
        if at_fof(&lexed.tokens) {
            let mut p = Parser::new(&lexed.tokens, syntax);
            let (name, _, f, _) = p.fof_unit()?;
            p.end()?;
            return Ok((Some(name), f));
        }
    }
    Ok((None, formula_at(e.text, syntax, e.line, e.column)?))
}

fn eof_error(raw: &str) -> SyntaxError {
    let lines = split_lines(raw);
    let (line, column) = lines.last().map(|l| (l.number, l.text.chars().count() + 1)).unwrap_or((1, 1));
    SyntaxError {
        line,
        column,
        offending: "<EOF>".into(),
        expected: "formula".into(),
        message: "mismatched input '<EOF>' expecting 'formula'".into(),
    }
}

fn parse_template(doc: &SourceDoc) -> Result<Problem, SyntaxError> {
    let raw = doc.raw.as_str();
    let syntax = doc.syntax;
    let mut problem = Problem::default();

    if let Some(span) = doc.sections.predicates.clone() {
        for e in entries(raw, span) {
            let f = declaration_at(&e, syntax)?;
            let Formula::Atom(name, args) = f else {
                return Err(SyntaxError::custom(e.line, e.column, e.text, "expected a predicate declaration"));
            };
            if !problem.predicates.iter().any(|d| d.name == name && d.arity == args.len()) {
                problem.predicates.push(PredicateDecl { name, arity: args.len(), gloss: e.gloss });
            }
        }
    }
    if let Some(span) = doc.sections.premises.clone() {
        for e in entries(raw, span) {
            let (name, formula) = entry_formula(&e, syntax)?;
            let label = name.unwrap_or_else(|| format!("a{}", problem.premises.len()));
            if problem.premises.iter().any(|p| p.label == label) {
                return Err(SyntaxError::custom(
                    e.line,
                    e.column,
                    e.text,
                    &format!("duplicate premise name '{label}'"),
                ));
            }
            problem.premises.push(Premise { label, formula, gloss: e.gloss });
        }
    }
    if let Some(span) = doc.sections.conclusion.clone() {
        let first = entries(raw, span).into_iter().next();
        let Some(e) = first else {
            return Err(eof_error(raw));
        };
        let (_, formula) = entry_formula(&e, syntax)?;
        problem.conclusion = Some(Conclusion { formula, gloss: e.gloss });
    }
    Ok(problem)
}

fn parse_lines(doc: &SourceDoc) -> Result<Problem, SyntaxError> {
    let mut problem = Problem::default();
    for e in entries(&doc.raw, 0..doc.raw.len()) {
        let formula = formula_at(e.text, doc.syntax, e.line, e.column)?;
        let label = format!("a{}", problem.premises.len());
        problem.premises.push(Premise { label, formula, gloss: e.gloss });
    }
    Ok(problem)
}

/// `% predicate Name/arity ::: gloss`
fn predicate_comment(c: &Comment) -> Option<PredicateDecl> {
    let rest = c.text.trim().strip_prefix("predicate ")?;
    let (sig, gloss) = match rest.find(":::") {
        Some(k) => (rest[..k].trim(), rest[k + 3..].trim()),
        None => (rest.trim(), ""),
    };
    let (name, arity) = sig.rsplit_once('/')?;
    let arity = arity.trim().parse().ok()?;
    if !crate::ast::is_identifier(name.trim()) {
        return None;
    }
    Some(PredicateDecl { name: name.trim().into(), arity, gloss: gloss.into() })
}

fn parse_units(doc: &SourceDoc) -> Result<Problem, SyntaxError> {
    let lexed = lex(&doc.raw, SyntaxId::Tptp, 1, 1)?;
    let mut problem = Problem::default();
    for d in lexed.comments.iter().filter_map(predicate_comment) {
        if !problem.predicates.iter().any(|p| p.name == d.name && p.arity == d.arity) {
            problem.predicates.push(d);
        }
    }
    let mut p = Parser::new(&lexed.tokens, SyntaxId::Tptp);
    while !p.at(&super::lexer::Tok::Eof) {
        let start = p.peek().clone();
        let (name, conjecture, formula, end_line) = p.fof_unit()?;
        let gloss = lexed
            .comments
            .iter()
            .find(|c| c.line == end_line && predicate_comment(c).is_none())
            .map(|c| String::from(c.text.trim()))
            .unwrap_or_default();
        if conjecture {
            if problem.conclusion.is_some() {
                return Err(SyntaxError::custom(start.line, start.column, &start.text, "more than one conjecture"));
            }
            problem.conclusion = Some(Conclusion { formula, gloss });
        } else {
            if problem.premises.iter().any(|q| q.label == name) {
                return Err(SyntaxError::custom(
                    start.line,
                    start.column,
                    &start.text,
                    &format!("duplicate unit name '{name}'"),
                ));
            }
            problem.premises.push(Premise { label: name, formula, gloss });
        }
    }
    Ok(problem)
}

/// Parses a document: a Predicates/Premises/Conclusion template, or else one
/// formula per line (FOL, R-FOL) or a sequence of `fof` units (TPTP).
pub fn parse(doc: &SourceDoc) -> Result<Problem, SyntaxError> {
    if doc.sections.is_template() {
        parse_template(doc)
    } else if doc.syntax == SyntaxId::Tptp {
        parse_units(doc)
    } else {
        parse_lines(doc)
    }
}

/// Parses under the document's syntax and prints under `to`.
pub fn translate(doc: &SourceDoc, to: SyntaxId) -> Result<String, SyntaxError> {
    parse(doc).map(|p| print_problem(&p, to))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractError {
    MissingSection(&'static str),
    Syntax(SyntaxError),
}

impl ExtractError {
    /// Diagnostic text suitable for error-message feedback.
    pub fn message(&self) -> String {
        match self {
            ExtractError::MissingSection(name) => format!("missing section '{name}'"),
            ExtractError::Syntax(e) => e.message.clone(),
        }
    }
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::MissingSection(name) => write!(f, "missing section '{name}'"),
            ExtractError::Syntax(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ExtractError {}

/// Pulls the formalisation out of a model response: the Premises and
/// Conclusion blocks are required, Predicates is optional, and text around
/// them is ignored.
pub fn extract_problem(response: &str, syntax: SyntaxId) -> Result<Problem, ExtractError> {
    let doc = SourceDoc::new(response, syntax);
    if doc.sections.premises.is_none() {
        return Err(ExtractError::MissingSection(PREMISES));
    }
    if doc.sections.conclusion.is_none() {
        return Err(ExtractError::MissingSection(CONCLUSION));
    }
    parse_template(&doc).map_err(ExtractError::Syntax)
}
