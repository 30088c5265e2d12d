//! Seeded random generators for formulas and problems, used by property
//! tests, the acceptance suite and fuzzing.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ast::{Conclusion, Formula, PredicateDecl, Premise, Problem, Term};

const PREDICATES: [&str; 7] = ["p", "q", "r", "drinkWater", "GoesHome", "hydrated", "is_tall"];
const CONSTANTS: [&str; 6] = ["a", "b", "socrates", "jill", "Alice", "x"];
const FUNCTIONS: [&str; 3] = ["f", "g", "fatherOf"];
const VARIABLES: [&str; 4] = ["x", "y", "z", "u"];

/// Knobs for [`formula`] and [`problem`].
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_premises: usize,
    pub max_arity: usize,
    /// Allow function terms.
    pub functions: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_depth: 6, max_premises: 8, max_arity: 2, functions: true }
    }
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or("p")
}

fn term<R: Rng>(rng: &mut R, cfg: &GenConfig, bound: &[String], depth: usize) -> Term {
    let roll = rng.gen_range(0..10);
    if roll < 4 && !bound.is_empty() {
        Term::Variable(bound.choose(rng).cloned().unwrap_or_default())
    } else if roll < 6 && cfg.functions && depth > 0 {
        let n = rng.gen_range(1..=2);
        let args = (0..n).map(|_| term(rng, cfg, bound, depth - 1)).collect();
        Term::apply(pick(rng, &FUNCTIONS), args)
    } else {
        Term::constant(pick(rng, &CONSTANTS))
    }
}

fn atom<R: Rng>(rng: &mut R, cfg: &GenConfig, bound: &[String]) -> Formula {
    let arity = rng.gen_range(0..=cfg.max_arity);
    let args = (0..arity).map(|_| term(rng, cfg, bound, 1)).collect();
    Formula::atom(pick(rng, &PREDICATES), args)
}

fn formula_in<R: Rng>(rng: &mut R, cfg: &GenConfig, bound: &mut Vec<String>, depth: usize) -> Formula {
    if depth <= 1 || rng.gen_range(0..4) == 0 {
        return atom(rng, cfg, bound);
    }
    match rng.gen_range(0..9) {
        0 => Formula::not(formula_in(rng, cfg, bound, depth - 1)),
        k @ 1..=5 => {
            let a = formula_in(rng, cfg, bound, depth - 1);
            let b = formula_in(rng, cfg, bound, depth - 1);
            match k {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                3 => Formula::xor(a, b),
                4 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
        k => {
            let v = String::from(pick(rng, &VARIABLES));
            bound.push(v.clone());
            let body = formula_in(rng, cfg, bound, depth - 1);
            bound.pop();
            if k == 8 {
                Formula::exists(&v, body)
            } else {
                Formula::forall(&v, body)
            }
        }
    }
}

/// A closed formula of depth at most `cfg.max_depth`.
pub fn formula<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Formula {
    formula_in(rng, cfg, &mut Vec::new(), cfg.max_depth)
}

fn gloss<R: Rng>(rng: &mut R) -> String {
    const WORDS: [&str; 6] = ["every", "person", "drinks", "water", "is", "tall"];
    if rng.gen_bool(0.5) {
        return String::new();
    }
    let n = rng.gen_range(1..5);
    let words: Vec<&str> = (0..n).map(|_| pick(rng, &WORDS)).collect();
    format!("{}.", words.join(" "))
}

/// A problem with up to `cfg.max_premises` closed premises, an optional
/// conclusion and a few predicate declarations.
pub fn problem<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Problem {
    let n = rng.gen_range(0..=cfg.max_premises);
    let premises =
        (0..n).map(|i| Premise { label: format!("a{i}"), formula: formula(rng, cfg), gloss: gloss(rng) }).collect();
    let conclusion = rng.gen_bool(0.8).then(|| Conclusion { formula: formula(rng, cfg), gloss: gloss(rng) });
    let mut predicates: Vec<PredicateDecl> = Vec::new();
    for _ in 0..rng.gen_range(0..3) {
        let name = pick(rng, &PREDICATES);
        let arity = rng.gen_range(0..=cfg.max_arity);
        if !predicates.iter().any(|d| d.name == name && d.arity == arity) {
            predicates.push(PredicateDecl { name: name.into(), arity, gloss: gloss(rng) });
        }
    }
    Problem { premises, conclusion, predicates }
}

/// The pool of ground atoms used by [`ground_problem`], `p0` .. `p{n-1}`
/// with mixed arities.
pub fn ground_atoms(n: usize) -> Vec<Formula> {
    (0..n)
        .map(|i| match i % 3 {
            0 => Formula::atom(&format!("p{i}"), Vec::new()),
            1 => Formula::atom(&format!("p{i}"), alloc::vec![Term::constant("a")]),
            _ => Formula::atom(&format!("p{i}"), alloc::vec![Term::constant("a"), Term::constant("b")]),
        })
        .collect()
}

fn ground<R: Rng>(rng: &mut R, atoms: &[Formula], depth: usize) -> Formula {
    if depth <= 1 || rng.gen_range(0..3) == 0 {
        return atoms.choose(rng).cloned().unwrap_or_else(|| Formula::atom("p0", Vec::new()));
    }
    let a = ground(rng, atoms, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::not(a),
        k => {
            let b = ground(rng, atoms, depth - 1);
            match k {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                3 => Formula::xor(a, b),
                4 => Formula::implies(a, b),
                _ => Formula::iff(a, b),
            }
        }
    }
}

/// A quantifier-free, variable-free problem over at most `max_atoms` atoms.
pub fn ground_problem<R: Rng>(rng: &mut R, max_atoms: usize) -> Problem {
    let atoms = ground_atoms(rng.gen_range(1..=max_atoms.max(1)));
    let n = rng.gen_range(0..=4);
    let premises = (0..n).map(|_| ground(rng, &atoms, 4)).collect();
    Problem::from_formulas(premises, Some(ground(rng, &atoms, 4)))
}
