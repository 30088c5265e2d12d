//! Prover selection with a wall-clock limit.

use std::time::Instant;

use folbench_core::prover::{decide_until, Decision, ProverBudget};
use folbench_core::{Answer, Problem};

use crate::external::{ExternalError, ExternalProver};

/// `decide` with both budget limits enforced.
pub fn decide_timed(p: &Problem, budget: &ProverBudget) -> Decision {
    let end = Instant::now() + budget.max_time;
    decide_until(p, budget, &|| Instant::now() >= end)
}

#[derive(Clone, Debug)]
pub enum Prover {
    Builtin(ProverBudget),
    External(ExternalProver, ProverBudget),
}

impl Prover {
    pub fn decide(&self, p: &Problem) -> Result<Decision, ExternalError> {
        match self {
            Prover::Builtin(b) => Ok(decide_timed(p, b)),
            Prover::External(ext, b) => {
                let outcome = ext.prove(p, b)?;
                // only the conjecture itself is sent to the external prover
                Ok(Decision { answer: Answer::from_bool(outcome.is_entailed()), outcome, negation_entailed: false })
            }
        }
    }
}
