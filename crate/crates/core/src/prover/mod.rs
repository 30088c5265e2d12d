//! Entailment by refutation.
//!
//! Premises and the negated conclusion are clausified and handed to a
//! given-clause saturation loop using binary resolution, factoring,
//! tautology deletion and forward/backward subsumption. An entailment comes
//! with a derivation of the empty clause that [`Proof::replay`] re-checks
//! step by step.

mod clausify;
mod kernel;
mod saturate;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use serde::{Deserialize, Serialize};

use crate::ast::{Answer, Formula, Problem, Term};
use clausify::Clausifier;
use kernel::{Cl, Lit, Tm};
use saturate::{Engine, Origin, Status};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverBudget {
    pub max_clauses: usize,
    pub max_time: Duration,
}

impl Default for ProverBudget {
    fn default() -> Self {
        ProverBudget { max_clauses: 100_000, max_time: Duration::from_secs(10) }
    }
}

/// Wall-clock limit supplied by the caller; this crate has no clock.
pub trait Deadline {
    fn expired(&self) -> bool;
}

/// Never expires; only the clause limit applies.
pub struct Unbounded;

impl Deadline for Unbounded {
    fn expired(&self) -> bool {
        false
    }
}

impl<F: Fn() -> bool> Deadline for F {
    fn expired(&self) -> bool {
        self()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    /// Clause `clause` of the clausified input formula `formula`.
    Input {
        formula: usize,
        clause: usize,
    },
    Resolution {
        left: usize,
        left_literal: usize,
        right: usize,
        right_literal: usize,
    },
    Factoring {
        parent: usize,
        kept: usize,
        merged: usize,
    },
}

/// A disjunction of literals. Variables are implicitly universal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    /// Set for clauses coming out of the prover; step numbers refer to
    /// earlier steps of the same [`Proof`].
    pub provenance: Option<Provenance>,
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Variable(v) | Term::Constant(v) => f.write_str(v),
        Term::Function(name, args) => {
            write!(f, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_term(f, a)?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write_term(f, &Term::Function(self.predicate.clone(), self.args.clone()))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotEntailedReason {
    /// Every inference was exhausted without deriving the empty clause.
    Saturated,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetUsed {
    pub clauses: usize,
    pub iterations: usize,
}

/// Derivation of the empty clause, inputs first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProofOutcome {
    Entailed { proof: Proof, used: BudgetUsed },
    NotEntailed { reason: NotEntailedReason, used: BudgetUsed },
}

impl ProofOutcome {
    pub fn is_entailed(&self) -> bool {
        matches!(self, ProofOutcome::Entailed { .. })
    }

    pub fn used(&self) -> BudgetUsed {
        match self {
            ProofOutcome::Entailed { used, .. } | ProofOutcome::NotEntailed { used, .. } => *used,
        }
    }

    /// Short status word: `entailed`, `saturated` or `budget_exhausted`.
    pub fn status(&self) -> &'static str {
        match self {
            ProofOutcome::Entailed { .. } => "entailed",
            ProofOutcome::NotEntailed { reason: NotEntailedReason::Saturated, .. } => "saturated",
            ProofOutcome::NotEntailed { reason: NotEntailedReason::BudgetExhausted, .. } => "budget_exhausted",
        }
    }
}

#[derive(Default)]
struct Symbols {
    preds: BTreeMap<(String, usize), u32>,
    pred_names: Vec<String>,
    funcs: BTreeMap<(String, usize), u32>,
    func_names: Vec<String>,
}

impl Symbols {
    fn intern(map: &mut BTreeMap<(String, usize), u32>, names: &mut Vec<String>, name: &str, arity: usize) -> u32 {
        if let Some(&id) = map.get(&(String::from(name), arity)) {
            return id;
        }
        let id = names.len() as u32;
        names.push(name.into());
        map.insert((name.into(), arity), id);
        id
    }

    fn term(&mut self, t: &Term, vars: &mut Vec<String>) -> Tm {
        match t {
            Term::Variable(v) => match vars.iter().position(|w| w == v) {
                Some(i) => Tm::V(i as u32),
                None => {
                    vars.push(v.clone());
                    Tm::V(vars.len() as u32 - 1)
                }
            },
            Term::Constant(c) => Tm::F(Self::intern(&mut self.funcs, &mut self.func_names, c, 0), Vec::new()),
            Term::Function(f, args) => {
                let id = Self::intern(&mut self.funcs, &mut self.func_names, f, args.len());
                Tm::F(id, args.iter().map(|a| self.term(a, vars)).collect())
            }
        }
    }

    fn clause(&mut self, c: &Clause) -> Cl {
        let mut vars = Vec::new();
        let lits = c
            .literals
            .iter()
            .map(|l| Lit {
                pos: l.positive,
                pred: Self::intern(&mut self.preds, &mut self.pred_names, &l.predicate, l.args.len()),
                args: l.args.iter().map(|a| self.term(a, &mut vars)).collect(),
            })
            .collect();
        kernel::normalize(lits)
    }

    fn public_term(&self, t: &Tm) -> Term {
        match t {
            Tm::V(v) => Term::Variable(format!("X{v}")),
            Tm::F(f, args) if args.is_empty() => Term::Constant(self.func_names[*f as usize].clone()),
            Tm::F(f, args) => {
                Term::Function(self.func_names[*f as usize].clone(), args.iter().map(|a| self.public_term(a)).collect())
            }
        }
    }

    fn public(&self, c: &Cl, provenance: Provenance) -> Clause {
        Clause {
            literals: c
                .iter()
                .map(|l| Literal {
                    positive: l.pos,
                    predicate: self.pred_names[l.pred as usize].clone(),
                    args: l.args.iter().map(|a| self.public_term(a)).collect(),
                })
                .collect(),
            provenance: Some(provenance),
        }
    }
}

/// Clause normal form of one formula (free variables are universally
/// closed first). Skolem symbols are `sk_0`, `sk_1`, ... skipping names
/// already used in `f`.
pub fn clausify(f: &Formula) -> Vec<Clause> {
    clausify_all(core::slice::from_ref(f)).unwrap_or_default()
}

/// Clausifies several formulas with one shared Skolem counter, which is what
/// the prover does with its input. Returns `None` if CNF conversion would
/// produce more than the default clause limit.
pub fn clausify_all(formulas: &[Formula]) -> Option<Vec<Clause>> {
    clausify_limited(formulas, ProverBudget::default().max_clauses)
}

fn clausify_limited(formulas: &[Formula], limit: usize) -> Option<Vec<Clause>> {
    let mut cz = Clausifier::new(formulas, limit);
    let mut out = Vec::new();
    for (fi, f) in formulas.iter().enumerate() {
        for (ci, mut c) in cz.clauses(f).ok()?.into_iter().enumerate() {
            c.provenance = Some(Provenance::Input { formula: fi, clause: ci });
            out.push(c);
        }
    }
    Some(out)
}

/// Searches for a contradiction among `formulas`.
pub fn refute(formulas: &[Formula], budget: &ProverBudget, deadline: &dyn Deadline) -> ProofOutcome {
    let exhausted = |used| ProofOutcome::NotEntailed { reason: NotEntailedReason::BudgetExhausted, used };
    let Some(clauses) = clausify_limited(formulas, budget.max_clauses) else {
        return exhausted(BudgetUsed::default());
    };
    let mut syms = Symbols::default();
    let inputs: Vec<(Cl, Origin)> = clauses
        .iter()
        .map(|c| {
            let Some(Provenance::Input { formula, clause }) = c.provenance else { unreachable!() };
            (syms.clause(c), Origin::Input(formula, clause))
        })
        .collect();
    let mut engine = Engine::new(budget.max_clauses);
    let status = engine.run(inputs, deadline);
    let used = BudgetUsed { clauses: engine.clauses.len(), iterations: engine.iterations };
    match status {
        Status::Saturated => ProofOutcome::NotEntailed { reason: NotEntailedReason::Saturated, used },
        Status::Exhausted => exhausted(used),
        Status::Refuted(id) => {
            let ids = engine.ancestors(id);
            let step = |old: usize| ids.binary_search(&old).expect("ancestor");
            let steps = ids
                .iter()
                .map(|&old| {
                    let prov = match engine.origin[old] {
                        Origin::Input(formula, clause) => {
                            // keep the caller-facing form of input clauses
                            let flat = clauses
                                .iter()
                                .find(|c| c.provenance == Some(Provenance::Input { formula, clause }))
                                .expect("input clause");
                            return flat.clone();
                        }
                        Origin::Resolve(l, li, r, ri) => Provenance::Resolution {
                            left: step(l),
                            left_literal: li,
                            right: step(r),
                            right_literal: ri,
                        },
                        Origin::Factor(p, k, m) => Provenance::Factoring { parent: step(p), kept: k, merged: m },
                    };
                    syms.public(&engine.clauses[old], prov)
                })
                .collect();
            ProofOutcome::Entailed { proof: Proof { steps }, used }
        }
    }
}

fn closed(f: &Formula) -> Formula {
    if f.is_closed() {
        f.clone()
    } else {
        f.universal_closure()
    }
}

/// The refutation input for `premises ⊨ conclusion`: the closed premises
/// followed by the negated closed conclusion.
pub fn refutation_input(premises: &[Formula], conclusion: &Formula) -> Vec<Formula> {
    let mut v: Vec<Formula> = premises.iter().map(closed).collect();
    v.push(Formula::not(closed(conclusion)));
    v
}

pub fn entails(premises: &[Formula], conclusion: &Formula, budget: &ProverBudget) -> ProofOutcome {
    entails_until(premises, conclusion, budget, &Unbounded)
}

pub fn entails_until(
    premises: &[Formula],
    conclusion: &Formula,
    budget: &ProverBudget,
    deadline: &dyn Deadline,
) -> ProofOutcome {
    refute(&refutation_input(premises, conclusion), budget, deadline)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub answer: Answer,
    pub outcome: ProofOutcome,
    /// Whether the premises entail the negated conclusion. Diagnostic only;
    /// it never changes the answer.
    pub negation_entailed: bool,
}

/// `yes` iff the premises entail the conclusion. A problem without a
/// conclusion asks whether the premises are contradictory.
pub fn decide(p: &Problem, budget: &ProverBudget) -> Decision {
    decide_until(p, budget, &Unbounded)
}

pub fn decide_until(p: &Problem, budget: &ProverBudget, deadline: &dyn Deadline) -> Decision {
    let premises: Vec<Formula> = p.premise_formulas().cloned().collect();
    let (outcome, negation) = match &p.conclusion {
        Some(c) => {
            let outcome = entails_until(&premises, &c.formula, budget, deadline);
            let negated = Formula::not(closed(&c.formula));
            (outcome, entails_until(&premises, &negated, budget, deadline))
        }
        None => {
            let input: Vec<Formula> = premises.iter().map(closed).collect();
            let outcome = refute(&input, budget, deadline);
            (outcome.clone(), outcome)
        }
    };
    Decision { answer: Answer::from_bool(outcome.is_entailed()), outcome, negation_entailed: negation.is_entailed() }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("proof is empty or does not end in the empty clause")]
    NotARefutation,
    #[error("step {0} has no provenance")]
    MissingProvenance(usize),
    #[error("step {0} refers to a later or missing step")]
    BadReference(usize),
    #[error("step {0} is not a clause of the stated input formula")]
    InputMismatch(usize),
    #[error("step {0} does not follow from its parents")]
    DerivationMismatch(usize),
}

impl Proof {
    /// Re-derives every step from `formulas` (the refutation input) and
    /// checks that the last step is the empty clause.
    pub fn replay(&self, formulas: &[Formula]) -> Result<(), ReplayError> {
        if self.steps.last().is_none_or(|c| !c.literals.is_empty()) {
            return Err(ReplayError::NotARefutation);
        }
        let inputs = clausify_all(formulas).ok_or(ReplayError::InputMismatch(0))?;
        let mut syms = Symbols::default();
        let mut derived: Vec<Cl> = Vec::with_capacity(self.steps.len());
        for (n, step) in self.steps.iter().enumerate() {
            let here = syms.clause(step);
            let parent = |k: usize| derived.get(k).filter(|_| k < n).ok_or(ReplayError::BadReference(n));
            let ok = match step.provenance.ok_or(ReplayError::MissingProvenance(n))? {
                Provenance::Input { .. } => {
                    if !inputs.iter().any(|c| c.provenance == step.provenance && c.literals == step.literals) {
                        return Err(ReplayError::InputMismatch(n));
                    }
                    true
                }
                Provenance::Resolution { left, left_literal, right, right_literal } => {
                    kernel::resolve(parent(left)?, left_literal, parent(right)?, right_literal).as_ref() == Some(&here)
                }
                Provenance::Factoring { parent: p, kept, merged } => {
                    kernel::factor(parent(p)?, kept, merged).as_ref() == Some(&here)
                }
            };
            if !ok {
                return Err(ReplayError::DerivationMismatch(n));
            }
            derived.push(here);
        }
        Ok(())
    }
}
