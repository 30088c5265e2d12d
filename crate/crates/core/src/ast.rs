//! First-order terms, formulas and problems.
//!
//! All values are immutable trees; every operation here is a pure function.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Returns true for names that start with a letter and continue with
/// letters, digits or underscores.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Variable(String),
    Constant(String),
    /// Always has at least one argument; nullary symbols are constants.
    Function(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Variable(name.to_owned())
    }

    pub fn constant(name: &str) -> Term {
        Term::Constant(name.to_owned())
    }

    /// Builds a function application, collapsing to a constant when `args` is empty.
    pub fn apply(name: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Constant(name.to_owned())
        } else {
            Term::Function(name.to_owned(), args)
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::Constant(_) => true,
            Term::Function(_, args) => args.iter().all(Term::is_ground),
        }
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) => {
                out.insert(v.clone());
            }
            Term::Constant(_) => {}
            Term::Function(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    /// Variables occurring anywhere in the term.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn contains_variable(&self, name: &str) -> bool {
        match self {
            Term::Variable(v) => v == name,
            Term::Constant(_) => false,
            Term::Function(_, args) => args.iter().any(|a| a.contains_variable(name)),
        }
    }

    fn replace_variable(&self, name: &str, by: &Term) -> Term {
        match self {
            Term::Variable(v) if v == name => by.clone(),
            Term::Variable(_) | Term::Constant(_) => self.clone(),
            Term::Function(f, args) => {
                Term::Function(f.clone(), args.iter().map(|a| a.replace_variable(name, by)).collect())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinaryOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    /// Predicate application; an empty argument list is a propositional atom.
    Atom(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.to_owned(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn xor(f: Formula, g: Formula) -> Formula {
        Formula::Xor(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::Forall(var.to_owned(), Box::new(f))
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(var.to_owned(), Box::new(f))
    }

    pub fn binary(op: BinaryOp, f: Formula, g: Formula) -> Formula {
        let (f, g) = (Box::new(f), Box::new(g));
        match op {
            BinaryOp::And => Formula::And(f, g),
            BinaryOp::Or => Formula::Or(f, g),
            BinaryOp::Xor => Formula::Xor(f, g),
            BinaryOp::Implies => Formula::Implies(f, g),
            BinaryOp::Iff => Formula::Iff(f, g),
        }
    }

    pub fn quantified(q: Quantifier, var: &str, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::forall(var, body),
            Quantifier::Exists => Formula::exists(var, body),
        }
    }

    /// Splits a binary node into its operator and operands.
    pub fn as_binary(&self) -> Option<(BinaryOp, &Formula, &Formula)> {
        match self {
            Formula::And(f, g) => Some((BinaryOp::And, f, g)),
            Formula::Or(f, g) => Some((BinaryOp::Or, f, g)),
            Formula::Xor(f, g) => Some((BinaryOp::Xor, f, g)),
            Formula::Implies(f, g) => Some((BinaryOp::Implies, f, g)),
            Formula::Iff(f, g) => Some((BinaryOp::Iff, f, g)),
            _ => None,
        }
    }

    pub fn as_quantified(&self) -> Option<(Quantifier, &str, &Formula)> {
        match self {
            Formula::Forall(v, f) => Some((Quantifier::Forall, v, f)),
            Formula::Exists(v, f) => Some((Quantifier::Exists, v, f)),
            _ => None,
        }
    }

    /// Variables with at least one occurrence not bound by an enclosing quantifier.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for arg in args {
                    for v in arg.variables() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Xor(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_variables().is_empty()
    }

    fn has_free(&self, name: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|a| a.contains_variable(name)),
            Formula::Not(f) => f.has_free(name),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Xor(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => f.has_free(name) || g.has_free(name),
            Formula::Forall(v, f) | Formula::Exists(v, f) => v != name && f.has_free(name),
        }
    }

    /// Every variable name that occurs in the formula, bound, free or as a binder.
    pub fn all_variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
            Formula::Not(f) => f.collect_all_vars(out),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Xor(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                f.collect_all_vars(out);
                g.collect_all_vars(out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.clone());
                f.collect_all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution of `term` for the free occurrences of `var`.
    ///
    /// A binder that would capture a variable of `term` is renamed by appending
    /// the smallest numeric suffix that is fresh for the body, `var` and `term`.
    pub fn substitute(&self, var: &str, term: &Term) -> Formula {
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.replace_variable(var, term)).collect())
            }
            Formula::Not(f) => Formula::not(f.substitute(var, term)),
            Formula::And(..) | Formula::Or(..) | Formula::Xor(..) | Formula::Implies(..) | Formula::Iff(..) => {
                let (op, f, g) = self.as_binary().expect("binary node");
                Formula::binary(op, f.substitute(var, term), g.substitute(var, term))
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let (q, bound, body) = self.as_quantified().expect("quantified node");
                if bound == var || !body.has_free(var) {
                    return self.clone();
                }
                if term.contains_variable(bound) {
                    let mut avoid = body.all_variable_names();
                    avoid.extend(term.variables());
                    avoid.insert(var.to_owned());
                    let fresh = fresh_name(bound, &avoid);
                    let renamed = body.substitute(bound, &Term::Variable(fresh.clone()));
                    Formula::quantified(q, &fresh, renamed.substitute(var, term))
                } else {
                    Formula::quantified(q, bound, body.substitute(var, term))
                }
            }
        }
    }

    /// Equality up to consistent renaming of bound variables.
    pub fn alpha_equal(&self, other: &Formula) -> bool {
        let mut left = Vec::new();
        let mut right = Vec::new();
        alpha_eq(self, other, &mut left, &mut right)
    }

    /// Predicate symbols with the arities they are used at, in first-occurrence order.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |name, args| {
            let key = (name.to_owned(), args.len());
            if !out.contains(&key) {
                out.push(key);
            }
        });
        out
    }

    /// Calls `f` on every atom in left-to-right order.
    pub fn visit_atoms<'a>(&'a self, f: &mut dyn FnMut(&'a str, &'a [Term])) {
        match self {
            Formula::Atom(p, args) => f(p, args),
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit_atoms(f),
            Formula::And(g, h)
            | Formula::Or(g, h)
            | Formula::Xor(g, h)
            | Formula::Implies(g, h)
            | Formula::Iff(g, h) => {
                g.visit_atoms(f);
                h.visit_atoms(f);
            }
        }
    }

    /// Constant names (nullary symbols) in first-occurrence order.
    pub fn constants(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        fn walk(t: &Term, out: &mut Vec<String>) {
            match t {
                Term::Constant(c) => {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
                Term::Variable(_) => {}
                Term::Function(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        self.visit_atoms(&mut |_, args| args.iter().for_each(|a| walk(a, &mut out)));
        out
    }

    /// Function symbols with arities in first-occurrence order.
    pub fn functions(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        fn walk(t: &Term, out: &mut Vec<(String, usize)>) {
            if let Term::Function(f, args) = t {
                let key = (f.clone(), args.len());
                if !out.contains(&key) {
                    out.push(key);
                }
                args.iter().for_each(|a| walk(a, out));
            }
        }
        self.visit_atoms(&mut |_, args| args.iter().for_each(|a| walk(a, &mut out)));
        out
    }

    /// Wraps the formula in universal quantifiers for each free variable.
    pub fn universal_closure(&self) -> Formula {
        let free = self.free_variables();
        free.iter().rev().fold(self.clone(), |body, v| Formula::forall(v, body))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.depth(),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Xor(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => 1 + f.depth().max(g.depth()),
        }
    }
}

/// Appends the smallest numeric suffix that makes `base` absent from `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_owned();
    }
    let mut n = 1usize;
    loop {
        let candidate = format!("{base}{n}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

fn binder_index(stack: &[String], name: &str) -> Option<usize> {
    stack.iter().rposition(|b| b == name)
}

fn alpha_eq_term(a: &Term, b: &Term, left: &[String], right: &[String]) -> bool {
    match (a, b) {
        (Term::Variable(x), Term::Variable(y)) => match (binder_index(left, x), binder_index(right, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Constant(x), Term::Constant(y)) => x == y,
        (Term::Function(f, xs), Term::Function(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, left, right))
        }
        _ => false,
    }
}

fn alpha_eq(f: &Formula, g: &Formula, left: &mut Vec<String>, right: &mut Vec<String>) -> bool {
    match (f, g) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, left, right))
        }
        (Formula::Not(a), Formula::Not(b)) => alpha_eq(a, b, left, right),
        _ => {
            if let (Some((op1, a1, b1)), Some((op2, a2, b2))) = (f.as_binary(), g.as_binary()) {
                return op1 == op2 && alpha_eq(a1, a2, left, right) && alpha_eq(b1, b2, left, right);
            }
            if let (Some((q1, v1, body1)), Some((q2, v2, body2))) = (f.as_quantified(), g.as_quantified()) {
                if q1 != q2 {
                    return false;
                }
                left.push(v1.to_owned());
                right.push(v2.to_owned());
                let eq = alpha_eq(body1, body2, left, right);
                left.pop();
                right.pop();
                return eq;
            }
            false
        }
    }
}

/// Binary answer to a deduction question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn flip(self) -> Answer {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
        }
    }
}

impl core::fmt::Display for Answer {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Answer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" | "true" => Ok(Answer::Yes),
            "no" | "false" => Ok(Answer::No),
            other => Err(format!("expected yes or no, got '{other}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Premise {
    pub label: String,
    pub formula: Formula,
    #[serde(default)]
    pub gloss: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub formula: Formula,
    #[serde(default)]
    pub gloss: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDecl {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub gloss: String,
}

/// Context logical form (labelled premises) plus the query logical form.
///
/// The conclusion is optional so that a bare list of formulas (a single
/// translated sentence, say) is still a document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub premises: Vec<Premise>,
    pub conclusion: Option<Conclusion>,
    #[serde(default)]
    pub predicates: Vec<PredicateDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProblemError {
    #[error("duplicate premise label '{0}'")]
    DuplicateLabel(String),
    #[error("duplicate predicate declaration {0}/{1}")]
    DuplicatePredicate(String, usize),
}

impl Problem {
    /// Labels premises `a0`, `a1`, ... in order.
    pub fn from_formulas(premises: Vec<Formula>, conclusion: Option<Formula>) -> Problem {
        Problem {
            premises: premises
                .into_iter()
                .enumerate()
                .map(|(i, formula)| Premise { label: format!("a{i}"), formula, gloss: String::new() })
                .collect(),
            conclusion: conclusion.map(|formula| Conclusion { formula, gloss: String::new() }),
            predicates: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let mut labels = BTreeSet::new();
        for p in &self.premises {
            if !labels.insert(p.label.as_str()) {
                return Err(ProblemError::DuplicateLabel(p.label.clone()));
            }
        }
        let mut decls = BTreeSet::new();
        for d in &self.predicates {
            if !decls.insert((d.name.as_str(), d.arity)) {
                return Err(ProblemError::DuplicatePredicate(d.name.clone(), d.arity));
            }
        }
        Ok(())
    }

    pub fn premise_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().map(|p| &p.formula)
    }

    /// All formulas, premises first and the conclusion last.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premise_formulas().chain(self.conclusion.iter().map(|c| &c.formula))
    }

    /// Alpha-equivalence of the logical content: premise formulas in order, the
    /// conclusion, and the declared predicate signatures. Labels and glosses are
    /// metadata and not compared.
    pub fn alpha_equal(&self, other: &Problem) -> bool {
        self.premises.len() == other.premises.len()
            && self.premises.iter().zip(&other.premises).all(|(a, b)| a.formula.alpha_equal(&b.formula))
            && match (&self.conclusion, &other.conclusion) {
                (Some(a), Some(b)) => a.formula.alpha_equal(&b.formula),
                (None, None) => true,
                _ => false,
            }
            && self.predicates.len() == other.predicates.len()
            && self.predicates.iter().zip(&other.predicates).all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(args: &[Term]) -> Formula {
        Formula::atom("p", args.to_vec())
    }

    /// Nameless rendering used as an independent alpha-equivalence oracle.
    fn de_bruijn(f: &Formula, env: &mut Vec<String>) -> String {
        fn term(t: &Term, env: &[String]) -> String {
            match t {
                Term::Variable(v) => match env.iter().rposition(|b| b == v) {
                    Some(i) => format!("#{}", env.len() - 1 - i),
                    None => format!("free:{v}"),
                },
                Term::Constant(c) => format!("c:{c}"),
                Term::Function(g, args) => {
                    let inner: Vec<String> = args.iter().map(|a| term(a, env)).collect();
                    format!("f:{g}({})", inner.join(","))
                }
            }
        }
        match f {
            Formula::Atom(q, args) => {
                let inner: Vec<String> = args.iter().map(|a| term(a, env)).collect();
                format!("{q}({})", inner.join(","))
            }
            Formula::Not(g) => format!("~{}", de_bruijn(g, env)),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let tag = if matches!(f, Formula::Forall(..)) { "A" } else { "E" };
                env.push(v.clone());
                let s = format!("{tag}.{}", de_bruijn(g, env));
                env.pop();
                s
            }
            _ => {
                let (op, a, b) = f.as_binary().unwrap();
                format!("({:?} {} {})", op, de_bruijn(a, env), de_bruijn(b, env))
            }
        }
    }

    /// Free variables by scanning every occurrence with its binder path.
    fn occurrence_scan(f: &Formula) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(_, args) => {
                    for a in args {
                        for v in a.variables() {
                            if !bound.contains(&v) {
                                out.insert(v);
                            }
                        }
                    }
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    go(g, bound, out);
                    bound.pop();
                }
                _ => {
                    let (_, a, b) = f.as_binary().unwrap();
                    go(a, bound, out);
                    go(b, bound, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(f, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("drinkWater"));
        assert!(is_identifier("sk_0"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("1a"));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn free_variables_examples() {
        let x = Term::var("x");
        assert!(Formula::forall("x", p(core::slice::from_ref(&x))).free_variables().is_empty());
        let f = Formula::and(p(core::slice::from_ref(&x)), Formula::atom("q", vec![Term::constant("a")]));
        assert_eq!(f.free_variables(), BTreeSet::from(["x".into()]));
        let g = Formula::forall("x", p(&[x, Term::var("y")]));
        assert_eq!(g.free_variables(), BTreeSet::from(["y".into()]));
        assert_eq!(g.free_variables(), occurrence_scan(&g));
    }

    #[test]
    fn substitute_examples() {
        let f = p(&[Term::var("x")]);
        assert_eq!(f.substitute("x", &Term::constant("socrates")), p(&[Term::constant("socrates")]));
        let bound = Formula::forall("x", p(&[Term::var("x")]));
        assert_eq!(bound.substitute("x", &Term::constant("a")), bound);

        let g = Formula::forall("y", p(&[Term::var("x"), Term::var("y")]));
        let fy = Term::Function("f".into(), vec![Term::var("y")]);
        let out = g.substitute("x", &fy);
        let expected = Formula::forall("y1", p(&[fy.clone(), Term::var("y1")]));
        assert_eq!(out, expected);
        assert!(out.alpha_equal(&Formula::forall("z", p(&[fy, Term::var("z")]))));
        // the substituted y stays free, the binder no longer captures it
        assert_eq!(occurrence_scan(&out), BTreeSet::from(["y".into()]));
    }

    #[test]
    fn alpha_equal_examples() {
        let a = Formula::forall("x", p(&[Term::var("x")]));
        let b = Formula::forall("y", p(&[Term::var("y")]));
        assert!(a.alpha_equal(&b));
        assert!(!p(&[Term::constant("a")]).alpha_equal(&p(&[Term::constant("b")])));
        let r = |u: &str, v: &str| Formula::atom("r", vec![Term::var(u), Term::var(v)]);
        let c = Formula::forall("x", Formula::exists("y", r("x", "y")));
        let d = Formula::forall("y", Formula::exists("x", r("y", "x")));
        assert!(c.alpha_equal(&d));
        assert_eq!(de_bruijn(&c, &mut Vec::new()), de_bruijn(&d, &mut Vec::new()));
        // swapped binding is not alpha-equal
        let e = Formula::forall("x", Formula::exists("y", r("y", "x")));
        assert!(!c.alpha_equal(&e));
        assert_ne!(de_bruijn(&c, &mut Vec::new()), de_bruijn(&e, &mut Vec::new()));
        // variable vs constant of the same name
        assert!(!p(&[Term::var("a")]).alpha_equal(&p(&[Term::constant("a")])));
    }

    #[test]
    fn problem_validation() {
        let mut prob = Problem::from_formulas(vec![p(&[]), p(&[])], None);
        assert!(prob.validate().is_ok());
        prob.premises[1].label = "a0".into();
        assert_eq!(prob.validate(), Err(ProblemError::DuplicateLabel("a0".into())));
        let mut prob = Problem::default();
        let decl = PredicateDecl { name: "p".into(), arity: 1, gloss: String::new() };
        prob.predicates = vec![decl.clone(), decl];
        assert_eq!(prob.validate(), Err(ProblemError::DuplicatePredicate("p".into(), 1)));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(crate) fn arb_term() -> impl Strategy<Value = Term> {
            let leaf = prop_oneof![
                prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
                prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
            ];
            leaf.prop_recursive(2, 6, 2, |inner| {
                prop::collection::vec(inner, 1..3).prop_map(|args| Term::Function("f".into(), args))
            })
        }

        pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
            let atom = (prop::sample::select(vec!["p", "q"]), prop::collection::vec(arb_term(), 0..3))
                .prop_map(|(name, args)| Formula::atom(name, args));
            atom.prop_recursive(5, 48, 2, |inner| {
                let var = prop::sample::select(vec!["x", "y", "z"]);
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                    (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                    (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)),
                    (var, inner).prop_map(|(v, b)| Formula::exists(v, b)),
                ]
            })
        }

        proptest! {
            #[test]
            fn substitute_identity(f in arb_formula(), v in prop::sample::select(vec!["x", "y", "z"])) {
                prop_assert!(f.substitute(v, &Term::var(v)).alpha_equal(&f));
            }

            #[test]
            fn substitute_constant_removes_var(f in arb_formula(), v in prop::sample::select(vec!["x", "y", "z"])) {
                prop_assume!(f.free_variables().contains(v));
                let mut expected = f.free_variables();
                expected.remove(v);
                prop_assert_eq!(f.substitute(v, &Term::constant("c")).free_variables(), expected);
            }

            #[test]
            fn free_variables_match_scanner(f in arb_formula()) {
                prop_assert_eq!(f.free_variables(), occurrence_scan(&f));
            }

            #[test]
            fn substitution_never_captures(f in arb_formula(), t in arb_term()) {
                // variables of t stay free after substitution whenever x was free
                prop_assume!(f.free_variables().contains("x"));
                let out = f.substitute("x", &t);
                let free = out.free_variables();
                for v in t.variables() {
                    prop_assert!(free.contains(&v));
                }
            }

            #[test]
            fn alpha_equal_agrees_with_de_bruijn(f in arb_formula(), g in arb_formula()) {
                let oracle = de_bruijn(&f, &mut Vec::new()) == de_bruijn(&g, &mut Vec::new());
                prop_assert_eq!(f.alpha_equal(&g), oracle);
                prop_assert!(f.alpha_equal(&f));
            }

            #[test]
            fn alpha_equal_is_equivalence(f in arb_formula(), v in prop::sample::select(vec!["x", "y", "z"])) {
                // a renamed copy gives non-trivial pairs for symmetry and transitivity
                let g = match &f {
                    Formula::Forall(b, body) => Formula::forall("w", body.substitute(b, &Term::var("w"))),
                    _ => Formula::forall(v, f.clone()),
                };
                let h = match &g {
                    Formula::Forall(b, body) => Formula::forall("u", body.substitute(b, &Term::var("u"))),
                    _ => g.clone(),
                };
                prop_assert!(f.alpha_equal(&f));
                prop_assert_eq!(f.alpha_equal(&g), g.alpha_equal(&f));
                if f.alpha_equal(&g) && g.alpha_equal(&h) {
                    prop_assert!(f.alpha_equal(&h));
                }
                prop_assert!(g.alpha_equal(&h));
            }
        }
    }
}
