use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{SyntaxError, SyntaxId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `?name` in R-FOL.
    QVar(String),
    /// `'name'` in TPTP.
    Quoted(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    Forall,
    Exists,
    /// TPTP `!` quantifier prefix.
    Bang,
    /// TPTP `?` quantifier prefix.
    Question,
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    /// Source text of the token, `<EOF>` at the end.
    pub text: String,
    pub line: usize,
    pub column: usize,
}

/// A `%` comment: line, column and text after the `%`.
#[derive(Clone, Debug)]
pub(crate) struct Comment {
    pub line: usize,
    pub text: String,
}

pub(crate) struct Lexed {
    pub tokens: Vec<Token>,
    pub comments: Vec<Comment>,
}

fn keyword(word: &str) -> Option<Tok> {
    match word {
        "forall" => Some(Tok::Forall),
        "exists" => Some(Tok::Exists),
        "xor" => Some(Tok::Xor),
        _ => None,
    }
}

pub(crate) fn is_keyword(word: &str) -> bool {
    keyword(word).is_some()
}

/// Tokenizes `src`; positions are reported relative to `line0`/`col0` so that
/// fragments of a larger document keep their real coordinates.
pub(crate) fn lex(src: &str, syntax: SyntaxId, line0: usize, col0: usize) -> Result<Lexed, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut comments = Vec::new();
    let mut i = 0;
    let mut line = line0;
    let mut column = col0;

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            let len = $len;
            let text: String = chars[i..i + len].iter().collect();
            tokens.push(Token { tok: $tok, text, line, column });
            i += len;
            column += len;
        }};
    }

    let starts = |i: usize, pat: &str| -> bool { pat.chars().enumerate().all(|(k, c)| chars.get(i + k) == Some(&c)) };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if syntax == SyntaxId::Tptp && c == '%' {
            let start = i + 1;
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            comments.push(Comment { line, text: chars[start..i].iter().collect() });
            continue;
        }
        if syntax == SyntaxId::Tptp && starts(i, "/*") {
            i += 2;
            column += 2;
            while i < chars.len() && !starts(i, "*/") {
                if chars[i] == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
                i += 1;
            }
            i = (i + 2).min(chars.len());
            column += 2;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = keyword(&word).unwrap_or(Tok::Ident(word));
            push!(tok, j - i);
            continue;
        }
        if syntax == SyntaxId::Tptp && c.is_ascii_digit() {
            // integer unit names
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            push!(Tok::Ident(word), j - i);
            continue;
        }
        if c == '\'' && syntax == SyntaxId::Tptp {
            let mut j = i + 1;
            let mut name = String::new();
            while j < chars.len() && chars[j] != '\'' && chars[j] != '\n' {
                if chars[j] == '\\' && j + 1 < chars.len() {
                    j += 1;
                }
                name.push(chars[j]);
                j += 1;
            }
            if j >= chars.len() || chars[j] != '\'' {
                return Err(SyntaxError::token_recognition(line, column, &chars[i..j].iter().collect::<String>()));
            }
            push!(Tok::Quoted(name), j + 1 - i);
            continue;
        }
        if c == '?' {
            if syntax == SyntaxId::Rfol {
                let mut j = i + 1;
                if j < chars.len() && chars[j].is_ascii_alphabetic() {
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let name: String = chars[i + 1..j].iter().collect();
                    push!(Tok::QVar(name), j - i);
                    continue;
                }
                return Err(SyntaxError::token_recognition(line, column, "?"));
            }
            if syntax == SyntaxId::Tptp {
                push!(Tok::Question, 1);
                continue;
            }
        }
        // multi-character ASCII operators, longest first
        let ascii: &[(&str, Tok)] =
            &[("<~>", Tok::Xor), ("<=>", Tok::Iff), ("<->", Tok::Iff), ("=>", Tok::Implies), ("->", Tok::Implies)];
        if let Some((pat, tok)) = ascii.iter().find(|(pat, _)| starts(i, pat)) {
            push!(tok.clone(), pat.chars().count());
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' if syntax == SyntaxId::Tptp => Tok::LBracket,
            ']' if syntax == SyntaxId::Tptp => Tok::RBracket,
            ',' => Tok::Comma,
            ':' if syntax == SyntaxId::Tptp => Tok::Colon,
            '.' if syntax == SyntaxId::Tptp => Tok::Dot,
            '!' if syntax == SyntaxId::Tptp => Tok::Bang,
            '¬' | '~' => Tok::Not,
            '∧' | '&' => Tok::And,
            '∨' | '|' => Tok::Or,
            '⊕' => Tok::Xor,
            '→' | '⟹' | '⇒' | '⟶' => Tok::Implies,
            '↔' | '⟺' | '⇔' | '⟷' => Tok::Iff,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            other => {
                return Err(SyntaxError::token_recognition(line, column, &other.to_string()));
            }
        };
        push!(tok, 1);
    }
    tokens.push(Token { tok: Tok::Eof, text: "<EOF>".into(), line, column });
    Ok(Lexed { tokens, comments })
}
