//! Recursive descent over the token stream with one token of lookahead.
//!
//! Precedence, tightest first: `¬`, `∧`, `∨`/`⊕`, `→`/`↔`. Implication and
//! equivalence associate to the right, the others to the left, and a
//! quantifier's scope extends as far right as possible.

use alloc::string::String;
use alloc::vec::Vec;

use super::lexer::{Tok, Token};
use super::{SyntaxError, SyntaxId};
use crate::ast::{Formula, Quantifier, Term};

/// Nesting bound that keeps hostile input from exhausting the stack.
pub(crate) const MAX_DEPTH: usize = 256;

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    syntax: SyntaxId,
    bound: Vec<String>,
    depth: usize,
    /// Accept unbound TPTP variables, as in predicate declarations.
    pub(crate) free_variables: bool,
}

type PResult<T> = Result<T, SyntaxError>;

pub(crate) fn is_tptp_variable(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [Token], syntax: SyntaxId) -> Self {
        Parser { toks, pos: 0, syntax, bound: Vec::new(), depth: 0, free_variables: false }
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub(crate) fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn mismatch(&self, expected: &str) -> SyntaxError {
        SyntaxError::mismatch(self.peek(), expected)
    }

    pub(crate) fn expect(&mut self, tok: Tok, display: &str) -> PResult<Token> {
        if self.at(&tok) {
            Ok(self.bump())
        } else {
            Err(self.mismatch(display))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let t = self.peek();
            return Err(SyntaxError::custom(t.line, t.column, &t.text, "nesting too deep"));
        }
        Ok(())
    }

    pub(crate) fn formula(&mut self) -> PResult<Formula> {
        self.enter()?;
        let lhs = self.disjunction()?;
        let out = match self.peek().tok {
            Tok::Implies => {
                self.bump();
                Formula::implies(lhs, self.formula()?)
            }
            Tok::Iff => {
                self.bump();
                Formula::iff(lhs, self.formula()?)
            }
            _ => lhs,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        loop {
            match self.peek().tok {
                Tok::Or => {
                    self.bump();
                    lhs = Formula::or(lhs, self.conjunction()?);
                }
                Tok::Xor => {
                    self.bump();
                    lhs = Formula::xor(lhs, self.conjunction()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.at(&Tok::And) {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        self.enter()?;
        let out = match self.peek().tok {
            Tok::Not => {
                self.bump();
                Formula::not(self.unary()?)
            }
            Tok::Forall | Tok::Exists if self.syntax != SyntaxId::Tptp => self.quantified()?,
            Tok::Bang | Tok::Question if self.syntax == SyntaxId::Tptp => self.tptp_quantified()?,
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, ")")?;
                f
            }
            _ => self.atom()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let q = match self.bump().tok {
            Tok::Forall => Quantifier::Forall,
            _ => Quantifier::Exists,
        };
        let var = match (&self.peek().tok, self.syntax) {
            (Tok::Ident(name), SyntaxId::Fol) => name.clone(),
            (Tok::QVar(name), SyntaxId::Rfol) => name.clone(),
            (Tok::Ident(_), SyntaxId::Rfol) => return Err(self.mismatch("?")),
            _ => return Err(self.mismatch("variable")),
        };
        self.bump();
        self.bound.push(var.clone());
        let body = self.formula();
        self.bound.pop();
        Ok(Formula::quantified(q, &var, body?))
    }

    fn tptp_quantified(&mut self) -> PResult<Formula> {
        let q = match self.bump().tok {
            Tok::Bang => Quantifier::Forall,
            _ => Quantifier::Exists,
        };
        self.expect(Tok::LBracket, "[")?;
        let mut vars = Vec::new();
        loop {
            match &self.peek().tok {
                Tok::Ident(name) if is_tptp_variable(name) => {
                    vars.push(name.clone());
                    self.bump();
                }
                _ => return Err(self.mismatch("variable")),
            }
            if self.at(&Tok::Comma) {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket, "]")?;
        self.expect(Tok::Colon, ":")?;
        let n = vars.len();
        self.bound.extend(vars.iter().cloned());
        let body = self.formula();
        self.bound.truncate(self.bound.len() - n);
        let body = body?;
        Ok(vars.iter().rev().fold(body, |acc, v| Formula::quantified(q, v, acc)))
    }

    fn symbol(&mut self) -> PResult<String> {
        let name = match (&self.peek().tok, self.syntax) {
            (Tok::Ident(name), SyntaxId::Tptp) if is_tptp_variable(name) => {
                return Err(self.mismatch("formula"));
            }
            (Tok::Ident(name), _) => name.clone(),
            (Tok::Quoted(name), SyntaxId::Tptp) => name.clone(),
            _ => return Err(self.mismatch("formula")),
        };
        self.bump();
        Ok(name)
    }

    fn atom(&mut self) -> PResult<Formula> {
        let pred = self.symbol()?;
        if self.syntax == SyntaxId::Tptp {
            if !self.at(&Tok::LParen) {
                return Ok(Formula::Atom(pred, Vec::new()));
            }
        } else if !self.at(&Tok::LParen) {
            return Err(self.mismatch("("));
        }
        self.bump();
        if self.syntax != SyntaxId::Tptp && self.at(&Tok::RParen) {
            self.bump();
            return Ok(Formula::Atom(pred, Vec::new()));
        }
        let args = self.arguments()?;
        Ok(Formula::Atom(pred, args))
    }

    /// Comma-separated terms up to and including the closing parenthesis.
    fn arguments(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.mismatch(")")),
            }
        }
    }

    fn term(&mut self) -> PResult<Term> {
        self.enter()?;
        let t = self.peek().clone();
        let out = match (&t.tok, self.syntax) {
            (Tok::QVar(name), SyntaxId::Rfol) => {
                self.bump();
                Term::Variable(name.clone())
            }
            (Tok::Ident(name), SyntaxId::Tptp) if is_tptp_variable(name) => {
                if !self.free_variables && !self.bound.contains(name) {
                    return Err(SyntaxError::custom(
                        t.line,
                        t.column,
                        &t.text,
                        &alloc::format!("unbound variable '{name}'"),
                    ));
                }
                self.bump();
                Term::Variable(name.clone())
            }
            (Tok::Ident(name), _) | (Tok::Quoted(name), SyntaxId::Tptp) => {
                self.bump();
                if self.at(&Tok::LParen) {
                    self.bump();
                    let args = self.arguments()?;
                    Term::Function(name.clone(), args)
                } else if self.syntax == SyntaxId::Fol && self.bound.contains(name) {
                    Term::Variable(name.clone())
                } else {
                    Term::Constant(name.clone())
                }
            }
            _ => return Err(self.mismatch("term")),
        };
        self.depth -= 1;
        Ok(out)
    }

    pub(crate) fn end(&mut self) -> PResult<()> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.mismatch("<EOF>"))
        }
    }

    /// A TPTP unit name: lower word, integer or quoted.
    fn unit_name(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(name) if !is_tptp_variable(name) => {
                let n = name.clone();
                self.bump();
                Ok(n)
            }
            Tok::Quoted(name) => {
                let n = name.clone();
                self.bump();
                Ok(n)
            }
            _ => Err(self.mismatch("name")),
        }
    }

    /// `fof(name, role, formula).` with the role restricted to `axiom` or
    /// `conjecture`. Returns the name, whether it is the conjecture, the
    /// formula and the line of the terminating dot.
    pub(crate) fn fof_unit(&mut self) -> PResult<(String, bool, Formula, usize)> {
        match &self.peek().tok {
            Tok::Ident(kw) if kw == "fof" => {
                self.bump();
            }
            _ => return Err(self.mismatch("fof")),
        }
        self.expect(Tok::LParen, "(")?;
        let name = self.unit_name()?;
        self.expect(Tok::Comma, ",")?;
        let conjecture = match &self.peek().tok {
            Tok::Ident(role) if role == "axiom" => false,
            Tok::Ident(role) if role == "conjecture" => true,
            _ => return Err(self.mismatch("axiom' or 'conjecture")),
        };
        self.bump();
        self.expect(Tok::Comma, ",")?;
        let formula = self.formula()?;
        self.expect(Tok::RParen, ")")?;
        let dot = self.expect(Tok::Dot, ".")?;
        Ok((name, conjecture, formula, dot.line))
    }
}

pub(crate) fn at_fof(toks: &[Token]) -> bool {
    matches!(toks.first().map(|t| &t.tok), Some(Tok::Ident(kw)) if kw == "fof")
        && matches!(toks.get(1).map(|t| &t.tok), Some(Tok::LParen))
}
