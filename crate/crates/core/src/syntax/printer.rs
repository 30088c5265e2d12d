//! Canonical printers.
//!
//! Binary operands are parenthesized unless they are atoms or negations, the
//! operand of a negation is parenthesized unless it is an atom or another
//! negation, and a quantifier body is parenthesized only when it is a binary
//! formula. Output therefore never depends on operator precedence.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::is_keyword;
use super::SyntaxId;
use crate::ast::{fresh_name, BinaryOp, Formula, Problem, Quantifier, Term};

struct Glyphs {
    not: &'static str,
    and: &'static str,
    or: &'static str,
    xor: &'static str,
    implies: &'static str,
    iff: &'static str,
    arg_sep: &'static str,
}

const UNICODE: Glyphs =
    Glyphs { not: "¬", and: " ∧ ", or: " ∨ ", xor: " ⊕ ", implies: " → ", iff: " ↔ ", arg_sep: ", " };

const TPTP: Glyphs =
    Glyphs { not: "~", and: " & ", or: " | ", xor: " <~> ", implies: " => ", iff: " <=> ", arg_sep: "," };

fn glyphs(syntax: SyntaxId) -> &'static Glyphs {
    match syntax {
        SyntaxId::Tptp => &TPTP,
        _ => &UNICODE,
    }
}

fn is_lower_word(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Quotes a TPTP functor or unit name unless it is a plain lower word.
pub(crate) fn tptp_name(name: &str) -> String {
    if is_lower_word(name) && !is_keyword(name) {
        return name.into();
    }
    let mut out = String::from("'");
    for c in name.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

fn tptp_unit_name(name: &str) -> String {
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_digit()) {
        name.into()
    } else {
        tptp_name(name)
    }
}

struct Printer<'a> {
    syntax: SyntaxId,
    g: &'a Glyphs,
    /// (source name, printed name) of the enclosing binders, innermost last.
    scope: Vec<(String, String)>,
    /// Names a FOL binder must not take because a constant or function uses them.
    reserved: BTreeSet<String>,
    out: String,
}

impl Printer<'_> {
    fn symbol(&mut self, name: &str) {
        match self.syntax {
            SyntaxId::Tptp => self.out.push_str(&tptp_name(name)),
            _ => self.out.push_str(name),
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Variable(v) => {
                let printed = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(src, _)| src == v)
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| v.clone());
                if self.syntax == SyntaxId::Rfol {
                    self.out.push('?');
                }
                self.out.push_str(&printed);
            }
            Term::Constant(c) => self.symbol(c),
            Term::Function(f, args) => {
                self.symbol(f);
                self.args(args);
            }
        }
    }

    fn args(&mut self, args: &[Term]) {
        self.out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                self.out.push_str(self.g.arg_sep);
            }
            self.term(a);
        }
        self.out.push(')');
    }

    fn binder_name(&self, var: &str) -> String {
        // TPTP variables start upper case; FOL and R-FOL ones lower case
        let mut chars = var.chars();
        let base: String = match (chars.next(), self.syntax) {
            (Some(c), SyntaxId::Tptp) => c.to_ascii_uppercase().to_string() + chars.as_str(),
            (Some(c), _) => c.to_ascii_lowercase().to_string() + chars.as_str(),
            (None, SyntaxId::Tptp) => "X".into(),
            (None, _) => "x".into(),
        };
        let mut avoid: BTreeSet<String> = self.scope.iter().map(|(_, p)| p.clone()).collect();
        if self.syntax == SyntaxId::Fol {
            avoid.extend(self.reserved.iter().cloned());
        }
        if is_keyword(&base) {
            avoid.insert(base.clone());
        }
        fresh_name(&base, &avoid)
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Atom(p, args) => {
                self.symbol(p);
                if !args.is_empty() {
                    self.args(args);
                } else if self.syntax != SyntaxId::Tptp {
                    self.out.push_str("()");
                }
            }
            Formula::Not(g) => {
                self.out.push_str(self.g.not);
                if matches!(**g, Formula::Atom(..) | Formula::Not(_)) {
                    self.formula(g);
                } else {
                    self.parenthesized(g);
                }
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let (q, var, body) = f.as_quantified().expect("quantifier");
                let printed = self.binder_name(var);
                match (self.syntax, q) {
                    (SyntaxId::Tptp, Quantifier::Forall) => self.out.push_str(&format!("![{printed}]:")),
                    (SyntaxId::Tptp, Quantifier::Exists) => self.out.push_str(&format!("?[{printed}]:")),
                    (SyntaxId::Rfol, Quantifier::Forall) => self.out.push_str(&format!("∀?{printed} ")),
                    (SyntaxId::Rfol, Quantifier::Exists) => self.out.push_str(&format!("∃?{printed} ")),
                    (SyntaxId::Fol, Quantifier::Forall) => self.out.push_str(&format!("∀{printed} ")),
                    (SyntaxId::Fol, Quantifier::Exists) => self.out.push_str(&format!("∃{printed} ")),
                }
                self.scope.push((var.into(), printed));
                if body.as_binary().is_some() {
                    self.parenthesized(body);
                } else {
                    self.formula(body);
                }
                self.scope.pop();
            }
            _ => {
                let (op, a, b) = f.as_binary().expect("binary");
                self.operand(a);
                self.out.push_str(match op {
                    BinaryOp::And => self.g.and,
                    BinaryOp::Or => self.g.or,
                    BinaryOp::Xor => self.g.xor,
                    BinaryOp::Implies => self.g.implies,
                    BinaryOp::Iff => self.g.iff,
                });
                self.operand(b);
            }
        }
    }

    fn operand(&mut self, f: &Formula) {
        if matches!(f, Formula::Atom(..) | Formula::Not(_)) {
            self.formula(f);
        } else {
            self.parenthesized(f);
        }
    }

    fn parenthesized(&mut self, f: &Formula) {
        self.out.push('(');
        self.formula(f);
        self.out.push(')');
    }
}

/// Renders one formula. Under FOL and TPTP, where an unbound variable cannot
/// be written, free variables are universally closed first.
pub fn print_formula(f: &Formula, syntax: SyntaxId) -> String {
    let closed;
    let f = if syntax != SyntaxId::Rfol && !f.is_closed() {
        closed = f.universal_closure();
        &closed
    } else {
        f
    };
    let mut reserved: BTreeSet<String> = f.constants().into_iter().collect();
    reserved.extend(f.functions().into_iter().map(|(name, _)| name));
    let mut p = Printer { syntax, g: glyphs(syntax), scope: Vec::new(), reserved, out: String::new() };
    p.formula(f);
    p.out
}

/// Placeholder argument names for predicate declarations.
fn decl_args(arity: usize, syntax: SyntaxId) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    let args: Vec<String> = (0..arity)
        .map(|i| {
            let base = if i < NAMES.len() { NAMES[i].into() } else { format!("x{i}") };
            match syntax {
                SyntaxId::Fol => base,
                SyntaxId::Rfol => format!("?{base}"),
                SyntaxId::Tptp => base.to_ascii_uppercase(),
            }
        })
        .collect();
    args.join(glyphs(syntax).arg_sep)
}

fn clean_gloss(gloss: &str) -> String {
    gloss.split_whitespace().collect::<Vec<_>>().join(" ").replace(":::", ": : :")
}

fn with_gloss(line: String, gloss: &str) -> String {
    let gloss = clean_gloss(gloss);
    if gloss.is_empty() {
        line
    } else {
        format!("{line} ::: {gloss}")
    }
}

/// Predicates / Premises / Conclusion template with one formula per line.
pub fn print_template(p: &Problem, syntax: SyntaxId) -> String {
    let mut out = String::new();
    if !p.predicates.is_empty() {
        out.push_str("Predicates:\n");
        for d in &p.predicates {
            let head = match (syntax, d.arity) {
                (SyntaxId::Tptp, 0) => tptp_name(&d.name),
                (SyntaxId::Tptp, _) => format!("{}({})", tptp_name(&d.name), decl_args(d.arity, syntax)),
                (_, _) => format!("{}({})", d.name, decl_args(d.arity, syntax)),
            };
            out.push_str(&with_gloss(head, &d.gloss));
            out.push('\n');
        }
    }
    out.push_str("Premises:\n");
    for prem in &p.premises {
        out.push_str(&with_gloss(print_formula(&prem.formula, syntax), &prem.gloss));
        out.push('\n');
    }
    if let Some(c) = &p.conclusion {
        out.push_str("Conclusion:\n");
        out.push_str(&with_gloss(print_formula(&c.formula, syntax), &c.gloss));
        out.push('\n');
    }
    out
}

/// Canonical document rendering.
///
/// FOL and R-FOL documents without declarations or conclusion are one formula
/// per line; otherwise they use the template. TPTP documents are `fof` units,
/// with declarations and glosses carried in `%` comments.
pub fn print_problem(p: &Problem, syntax: SyntaxId) -> String {
    if syntax != SyntaxId::Tptp {
        if p.predicates.is_empty() && p.conclusion.is_none() {
            let mut out = String::new();
            for prem in &p.premises {
                out.push_str(&with_gloss(print_formula(&prem.formula, syntax), &prem.gloss));
                out.push('\n');
            }
            return out;
        }
        return print_template(p, syntax);
    }
    let mut out = String::new();
    for d in &p.predicates {
        let line = format!("% predicate {}/{}", d.name, d.arity);
        out.push_str(&with_gloss(line, &d.gloss));
        out.push('\n');
    }
    let unit = |name: &str, role: &str, f: &Formula, gloss: &str| {
        let mut line = format!("fof({},{},{}).", tptp_unit_name(name), role, print_formula(f, syntax));
        let gloss = clean_gloss(gloss);
        if !gloss.is_empty() {
            line.push_str(" % ");
            line.push_str(&gloss);
        }
        line.push('\n');
        line
    };
    for prem in &p.premises {
        out.push_str(&unit(&prem.label, "axiom", &prem.formula, &prem.gloss));
    }
    if let Some(c) = &p.conclusion {
        out.push_str(&unit("goal", "conjecture", &c.formula, &c.gloss));
    }
    out
}
