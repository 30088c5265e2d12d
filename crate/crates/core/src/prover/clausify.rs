//! NNF, prenex form, Skolemization and CNF.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Clause, Literal};
use crate::ast::{fresh_name, Formula, Quantifier, Term};

enum Nnf {
    Lit(bool, String, Vec<Term>),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Q(Quantifier, String, Box<Nnf>),
}

fn and(a: Nnf, b: Nnf) -> Nnf {
    Nnf::And(Box::new(a), Box::new(b))
}

fn or(a: Nnf, b: Nnf) -> Nnf {
    Nnf::Or(Box::new(a), Box::new(b))
}

/// Negation normal form of `f` (of `¬f` when `pos` is false).
fn nnf(f: &Formula, pos: bool) -> Nnf {
    match f {
        Formula::Atom(p, args) => Nnf::Lit(pos, p.clone(), args.clone()),
        Formula::Not(g) => nnf(g, !pos),
        Formula::And(a, b) if pos => and(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => or(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) if pos => or(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) => and(nnf(a, false), nnf(b, false)),
        Formula::Implies(a, b) if pos => or(nnf(a, false), nnf(b, true)),
        Formula::Implies(a, b) => and(nnf(a, true), nnf(b, false)),
        Formula::Iff(a, b) => equivalence(a, b, pos),
        Formula::Xor(a, b) => equivalence(a, b, !pos),
        Formula::Forall(v, g) => {
            let q = if pos { Quantifier::Forall } else { Quantifier::Exists };
            Nnf::Q(q, v.clone(), Box::new(nnf(g, pos)))
        }
        Formula::Exists(v, g) => {
            let q = if pos { Quantifier::Exists } else { Quantifier::Forall };
            Nnf::Q(q, v.clone(), Box::new(nnf(g, pos)))
        }
    }
}

/// `a ↔ b` as `(¬a ∨ b) ∧ (a ∨ ¬b)`, and its negation as `(a ∨ b) ∧ (¬a ∨ ¬b)`.
fn equivalence(a: &Formula, b: &Formula, pos: bool) -> Nnf {
    if pos {
        and(or(nnf(a, false), nnf(b, true)), or(nnf(a, true), nnf(b, false)))
    } else {
        and(or(nnf(a, true), nnf(b, true)), or(nnf(a, false), nnf(b, false)))
    }
}

fn rename_term(t: &Term, scope: &[(String, String)]) -> Term {
    match t {
        Term::Variable(v) => match scope.iter().rev().find(|(from, _)| from == v) {
            Some((_, to)) => Term::Variable(to.clone()),
            None => t.clone(),
        },
        Term::Constant(_) => t.clone(),
        Term::Function(f, args) => Term::Function(f.clone(), args.iter().map(|a| rename_term(a, scope)).collect()),
    }
}

/// Gives every binder a distinct name so quantifiers can be pulled out.
fn rename_apart(n: Nnf, scope: &mut Vec<(String, String)>, used: &mut BTreeSet<String>) -> Nnf {
    match n {
        Nnf::Lit(s, p, args) => Nnf::Lit(s, p, args.iter().map(|a| rename_term(a, scope)).collect()),
        Nnf::And(a, b) => and(rename_apart(*a, scope, used), rename_apart(*b, scope, used)),
        Nnf::Or(a, b) => or(rename_apart(*a, scope, used), rename_apart(*b, scope, used)),
        Nnf::Q(q, v, body) => {
            let fresh = fresh_name(&v, used);
            used.insert(fresh.clone());
            scope.push((v, fresh.clone()));
            let body = rename_apart(*body, scope, used);
            scope.pop();
            Nnf::Q(q, fresh, Box::new(body))
        }
    }
}

/// Splits off the quantifier prefix in pre-order; valid because binder names
/// are distinct and the formula is in NNF.
fn prenex(n: Nnf, prefix: &mut Vec<(Quantifier, String)>) -> Nnf {
    match n {
        Nnf::Q(q, v, body) => {
            prefix.push((q, v));
            prenex(*body, prefix)
        }
        Nnf::And(a, b) => {
            let a = prenex(*a, prefix);
            and(a, prenex(*b, prefix))
        }
        Nnf::Or(a, b) => {
            let a = prenex(*a, prefix);
            or(a, prenex(*b, prefix))
        }
        lit => lit,
    }
}

fn subst_term(t: &Term, v: &str, by: &Term) -> Term {
    match t {
        Term::Variable(w) if w == v => by.clone(),
        Term::Function(f, args) => Term::Function(f.clone(), args.iter().map(|a| subst_term(a, v, by)).collect()),
        _ => t.clone(),
    }
}

fn subst_matrix(n: Nnf, v: &str, by: &Term) -> Nnf {
    match n {
        Nnf::Lit(s, p, args) => Nnf::Lit(s, p, args.iter().map(|a| subst_term(a, v, by)).collect()),
        Nnf::And(a, b) => and(subst_matrix(*a, v, by), subst_matrix(*b, v, by)),
        Nnf::Or(a, b) => or(subst_matrix(*a, v, by), subst_matrix(*b, v, by)),
        Nnf::Q(q, w, body) => Nnf::Q(q, w, Box::new(subst_matrix(*body, v, by))),
    }
}

/// Clause set grew past the configured limit during distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct TooLarge;

type RawClause = Vec<Literal>;

fn cnf(n: Nnf, limit: usize) -> Result<Vec<RawClause>, TooLarge> {
    match n {
        Nnf::Lit(positive, predicate, args) => Ok(vec![vec![Literal { positive, predicate, args }]]),
        Nnf::And(a, b) => {
            let mut out = cnf(*a, limit)?;
            out.extend(cnf(*b, limit)?);
            if out.len() > limit {
                return Err(TooLarge);
            }
            Ok(out)
        }
        Nnf::Or(a, b) => {
            let left = cnf(*a, limit)?;
            let right = cnf(*b, limit)?;
            if left.len().saturating_mul(right.len()) > limit {
                return Err(TooLarge);
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            Ok(out)
        }
        Nnf::Q(..) => unreachable!("quantifiers are removed before CNF"),
    }
}

/// Clausifies formulas one at a time, sharing the Skolem counter.
pub(crate) struct Clausifier {
    next_skolem: usize,
    /// Function and constant names the Skolem symbols must avoid.
    reserved: BTreeSet<String>,
    limit: usize,
}

impl Clausifier {
    pub(crate) fn new<'a>(formulas: impl IntoIterator<Item = &'a Formula>, limit: usize) -> Clausifier {
        let mut reserved = BTreeSet::new();
        for f in formulas {
            reserved.extend(f.constants());
            reserved.extend(f.functions().into_iter().map(|(n, _)| n));
        }
        Clausifier { next_skolem: 0, reserved, limit }
    }

    fn skolem_name(&mut self) -> String {
        loop {
            let name = format!("sk_{}", self.next_skolem);
            self.next_skolem += 1;
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }

    /// Universally closes `f` and converts it to clauses. Repeated literals
    /// are merged and tautologies dropped.
    pub(crate) fn clauses(&mut self, f: &Formula) -> Result<Vec<Clause>, TooLarge> {
        let closed = f.universal_closure();
        let mut used = BTreeSet::new();
        let n = rename_apart(nnf(&closed, true), &mut Vec::new(), &mut used);
        let mut prefix = Vec::new();
        let mut matrix = prenex(n, &mut prefix);
        let mut universals: Vec<Term> = Vec::new();
        for (q, v) in prefix {
            match q {
                Quantifier::Forall => universals.push(Term::Variable(v)),
                Quantifier::Exists => {
                    let name = self.skolem_name();
                    let sk = if universals.is_empty() {
                        Term::Constant(name)
                    } else {
                        Term::Function(name, universals.clone())
                    };
                    matrix = subst_matrix(matrix, &v, &sk);
                }
            }
        }
        let mut out = Vec::new();
        for raw in cnf(matrix, self.limit)? {
            let mut lits: Vec<Literal> = Vec::with_capacity(raw.len());
            for l in raw {
                if !lits.contains(&l) {
                    lits.push(l);
                }
            }
            let tautology = lits.iter().enumerate().any(|(i, a)| {
                lits[i + 1..].iter().any(|b| a.positive != b.positive && a.predicate == b.predicate && a.args == b.args)
            });
            if !tautology {
                out.push(Clause { literals: lits, provenance: None });
            }
        }
        Ok(out)
    }
}
