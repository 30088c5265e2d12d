//! External TPTP provers, driven through SZS status lines.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use folbench_core::prover::{BudgetUsed, NotEntailedReason, Proof, ProofOutcome, ProverBudget};
use folbench_core::syntax::print;
use folbench_core::{Problem, SyntaxId};

#[derive(Debug, thiserror::Error)]
pub enum ExternalError {
    #[error("external prover unavailable: {0}")]
    Unavailable(String),
    #[error("unrecognized SZS status: {0}")]
    UnrecognizedStatus(String),
    #[error("invalid prover command: {0}")]
    InvalidCommand(String),
}

/// A prover command such as `vampire --mode casc -t {timeout} {file}`.
/// `{file}` is replaced by the problem path and `{timeout}` by the time
/// limit in whole seconds. The process is killed at twice the limit.
#[derive(Clone, Debug)]
pub struct ExternalProver {
    argv: Vec<String>,
}

/// The first `SZS status <word>` line and its word.
pub fn szs_status(output: &str) -> Option<(&str, &str)> {
    output.lines().find_map(|line| {
        let (_, rest) = line.split_once("SZS status ")?;
        rest.split_whitespace().next().map(|word| (line, word))
    })
}

fn exhausted() -> ProofOutcome {
    ProofOutcome::NotEntailed { reason: NotEntailedReason::BudgetExhausted, used: BudgetUsed::default() }
}

/// Maps an SZS status word to an outcome. External proofs are not imported,
/// so `Entailed` carries an empty proof.
pub fn outcome_for(word: &str, line: &str) -> Result<ProofOutcome, ExternalError> {
    let used = BudgetUsed::default();
    match word {
        "Theorem" | "Unsatisfiable" | "ContradictoryAxioms" => {
            Ok(ProofOutcome::Entailed { proof: Proof { steps: Vec::new() }, used })
        }
        "CounterSatisfiable" | "Satisfiable" => {
            Ok(ProofOutcome::NotEntailed { reason: NotEntailedReason::Saturated, used })
        }
        "Timeout" | "GaveUp" | "ResourceOut" | "MemoryOut" | "Unknown" | "Incomplete" => Ok(exhausted()),
        _ => Err(ExternalError::UnrecognizedStatus(line.trim().into())),
    }
}

impl ExternalProver {
    pub fn new(command: &str) -> Result<ExternalProver, ExternalError> {
        let argv = shlex::split(command).ok_or_else(|| ExternalError::InvalidCommand(command.into()))?;
        if argv.is_empty() {
            return Err(ExternalError::InvalidCommand(command.into()));
        }
        Ok(ExternalProver { argv })
    }

    pub fn prove(&self, p: &Problem, budget: &ProverBudget) -> Result<ProofOutcome, ExternalError> {
        let unavailable = |e: std::io::Error| ExternalError::Unavailable(e.to_string());
        let mut file = tempfile::Builder::new().suffix(".p").tempfile().map_err(unavailable)?;
        file.write_all(print(p, SyntaxId::Tptp).as_bytes()).map_err(unavailable)?;
        file.flush().map_err(unavailable)?;
        let path = file.path().display().to_string();
        let seconds = budget.max_time.as_millis().div_ceil(1000).max(1).to_string();
        let args: Vec<String> =
            self.argv.iter().map(|a| a.replace("{file}", &path).replace("{timeout}", &seconds)).collect();

        let mut child = Command::new(&args[0])
            .args(&args[1..])
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| ExternalError::Unavailable(format!("{}: {e}", args[0])))?;
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut out = String::new();
            let _ = stdout.read_to_string(&mut out);
            out
        });

        let limit = budget.max_time.max(Duration::from_millis(1)) * 2;
        let start = Instant::now();
        loop {
            if child.try_wait().map_err(unavailable)?.is_some() {
                break;
            }
            if start.elapsed() >= limit {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(exhausted());
            }
            std::thread::sleep(Duration::from_millis(5));
        }
        let output = reader.join().unwrap_or_default();
        match szs_status(&output) {
            Some((line, word)) => outcome_for(word, line),
            None => Err(ExternalError::UnrecognizedStatus(format!(
                "no SZS status line in output: {}",
                output.lines().last().unwrap_or("").trim()
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use folbench_core::syntax::{parse, SourceDoc};

    fn problem() -> Problem {
        parse(&SourceDoc::new("Premises:\np(a)\nConclusion:\np(a)\n", SyntaxId::Fol)).unwrap()
    }

    fn budget(ms: u64) -> ProverBudget {
        ProverBudget { max_time: Duration::from_millis(ms), ..ProverBudget::default() }
    }

    #[test]
    fn status_lines() {
        let out = "% Refutation found.\n% SZS status Theorem for foo\n% SZS status Unknown\n";
        assert_eq!(szs_status(out), Some(("% SZS status Theorem for foo", "Theorem")));
        assert!(outcome_for("Theorem", "").unwrap().is_entailed());
        assert!(!outcome_for("CounterSatisfiable", "").unwrap().is_entailed());
        assert_eq!(outcome_for("GaveUp", "").unwrap().status(), "budget_exhausted");
        assert!(
            matches!(outcome_for("Banana", "x SZS status Banana"), Err(ExternalError::UnrecognizedStatus(l)) if l == "x SZS status Banana")
        );
    }

    #[test]
    fn substitutes_file_and_timeout() {
        let cmd =
            "sh -c 'test {timeout} = 3 && grep -q \"fof(goal,conjecture\" {file} && echo \"% SZS status Theorem\"'";
        let prover = ExternalProver::new(cmd).unwrap();
        assert!(prover.prove(&problem(), &budget(2500)).unwrap().is_entailed());
    }

    #[test]
    fn missing_binary_and_bad_output() {
        let missing = ExternalProver::new("/nonexistent/prover {file}").unwrap();
        assert!(matches!(missing.prove(&problem(), &budget(100)), Err(ExternalError::Unavailable(_))));
        let silent = ExternalProver::new("true").unwrap();
        assert!(matches!(silent.prove(&problem(), &budget(100)), Err(ExternalError::UnrecognizedStatus(_))));
        assert!(ExternalProver::new("'unterminated").is_err());
    }

    #[test]
    fn killed_at_twice_the_limit() {
        let prover = ExternalProver::new("sleep 10").unwrap();
        let start = Instant::now();
        let outcome = prover.prove(&problem(), &budget(50)).unwrap();
        assert_eq!(outcome.status(), "budget_exhausted");
        assert!(start.elapsed() < Duration::from_secs(5));
    }
}
