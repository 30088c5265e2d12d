//! The three interchangeable surface syntaxes and translation between them.
//!
//! * FOL: `∀x (drinkWater(x) → hydrated(x))`. An identifier is a variable iff an
//!   enclosing quantifier binds it; otherwise it is a constant.
//! * R-FOL: `∀?x (drinkWater(?x) → hydrated(?x))`. Variables carry a `?` prefix.
//! * TPTP: `fof(a0,axiom,![X]:(drinkWater(X) => hydrated(X))).` Variables start
//!   with an uppercase letter; only `fof` units with the roles `axiom` and
//!   `conjecture` are accepted.
//!
//! ASCII aliases (`&`, `|`, `~`, `->`, `<->`, `=>`, `<=>`, `forall`, `exists`,
//! `xor`) are accepted on input by every parser. Printers emit the canonical
//! glyphs only.

mod doc;
mod lexer;
mod parser;
mod printer;

use alloc::format;
use alloc::string::String;

use core::fmt;
use serde::{Deserialize, Serialize};

pub use doc::{extract_problem, parse, parse_formula, translate, ExtractError, SectionMap, SourceDoc};
pub use printer::{print_formula, print_problem as print, print_template};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntaxId {
    Fol,
    Rfol,
    Tptp,
}

impl SyntaxId {
    pub const ALL: [SyntaxId; 3] = [SyntaxId::Fol, SyntaxId::Rfol, SyntaxId::Tptp];

    pub fn name(self) -> &'static str {
        match self {
            SyntaxId::Fol => "fol",
            SyntaxId::Rfol => "rfol",
            SyntaxId::Tptp => "tptp",
        }
    }
}

impl fmt::Display for SyntaxId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for SyntaxId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fol" => Ok(SyntaxId::Fol),
            "rfol" | "r-fol" => Ok(SyntaxId::Rfol),
            "tptp" => Ok(SyntaxId::Tptp),
            other => Err(format!("unknown syntax '{other}' (expected fol, rfol or tptp)")),
        }
    }
}

/// Parser diagnostic. `message` is the text fed back to a formalizer, e.g.
/// `mismatched input '∧' expecting '('`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntaxError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column, in characters.
    pub column: usize,
    pub offending: String,
    pub expected: String,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn mismatch(token: &lexer::Token, expected: &str) -> SyntaxError {
        SyntaxError {
            line: token.line,
            column: token.column,
            offending: token.text.clone(),
            expected: expected.into(),
            message: format!("mismatched input '{}' expecting '{}'", token.text, expected),
        }
    }

    pub(crate) fn token_recognition(line: usize, column: usize, text: &str) -> SyntaxError {
        SyntaxError {
            line,
            column,
            offending: text.into(),
            expected: String::new(),
            message: format!("token recognition error at: '{text}'"),
        }
    }

    pub(crate) fn custom(line: usize, column: usize, offending: &str, message: &str) -> SyntaxError {
        SyntaxError { line, column, offending: offending.into(), expected: String::new(), message: message.into() }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}:{} {}", self.line, self.column, self.message)
    }
}

impl core::error::Error for SyntaxError {}
