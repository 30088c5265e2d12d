//! Runs the pipeline over a sample set with bounded parallelism.
//!
//! Workers pull samples from a shared index; the calling thread is the only
//! writer and appends results to the JSONL file in sample order. When a
//! backend call fails, workers stop picking up new samples, every finished
//! result is still written, and a later run with `resume` skips them.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;

use folbench_core::perturb::{PerturbedSample, Variant};
use folbench_core::pipeline::{run_sample_with, Backend, BackendError, RunConfig, SampleResult};
use folbench_core::prover::Decision;
use folbench_core::Problem;

use crate::dataset::{completed_keys, to_line, DataError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunnerOptions {
    pub parallelism: usize,
    pub elide_transcript: bool,
    /// Keep existing results and skip their samples; otherwise the results
    /// file is truncated.
    pub resume: bool,
}

impl Default for RunnerOptions {
    fn default() -> Self {
        RunnerOptions { parallelism: 4, elide_transcript: false, resume: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub completed: usize,
    pub skipped: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Config(#[from] folbench_core::pipeline::ConfigError),
    #[error("sample '{id}' ({variant}): {source}; {completed} results saved, run again to resume")]
    Backend { id: String, variant: Variant, source: BackendError, completed: usize },
}

pub type ProveFn<'a> = dyn Fn(&Problem) -> Decision + Sync + 'a;

pub fn run(
    samples: &[PerturbedSample],
    cfg: &RunConfig,
    backend: &dyn Backend,
    prove: &ProveFn<'_>,
    out: &Path,
    opts: &RunnerOptions,
) -> Result<RunSummary, RunError> {
    cfg.validate()?;
    let done = if opts.resume { completed_keys(out)? } else { Default::default() };
    let todo: Vec<&PerturbedSample> =
        samples.iter().filter(|s| !done.contains(&(s.base_id.clone(), s.variant))).collect();
    let skipped = samples.len() - todo.len();

    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(opts.resume)
        .truncate(!opts.resume)
        .open(out)
        .map_err(|e| DataError::io(out, e))?;
    let mut sink = BufWriter::new(file);

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<SampleResult, BackendError>)>();
    let mut pending = BTreeMap::new();
    let mut written = 0;
    let mut failure = None;
    let mut io_error = None;

    std::thread::scope(|scope| {
        for _ in 0..opts.parallelism.max(1).min(todo.len().max(1)) {
            let tx = tx.clone();
            let (todo, next, abort) = (&todo, &next, &abort);
            scope.spawn(move || loop {
                if abort.load(Ordering::SeqCst) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(s) = todo.get(i) else { break };
                let r = run_sample_with(s, cfg, backend, &|p: &Problem| prove(p));
                if r.is_err() {
                    abort.store(true, Ordering::SeqCst);
                }
                if tx.send((i, r)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let write = |r: &mut SampleResult, sink: &mut BufWriter<_>| -> std::io::Result<()> {
            if opts.elide_transcript {
                r.transcript.clear();
            }
            writeln!(sink, "{}", to_line(r))?;
            sink.flush()
        };
        let mut expected = 0;
        for (i, r) in rx {
            match r {
                Ok(r) => {
                    pending.insert(i, r);
                }
                Err(e) => {
                    if failure.as_ref().is_none_or(|(j, _)| i < *j) {
                        failure = Some((i, e));
                    }
                }
            }
            while let Some(mut r) = pending.remove(&expected) {
                if io_error.is_none() {
                    match write(&mut r, &mut sink) {
                        Ok(()) => written += 1,
                        Err(e) => io_error = Some(e),
                    }
                }
                expected += 1;
            }
        }
        // results after a failed sample
        for (_, mut r) in std::mem::take(&mut pending) {
            if io_error.is_none() {
                match write(&mut r, &mut sink) {
                    Ok(()) => written += 1,
                    Err(e) => io_error = Some(e),
                }
            }
        }
    });

    if let Some(e) = io_error {
        return Err(DataError::io(out, e).into());
    }
    if let Some((i, source)) = failure {
        let s = todo[i];
        return Err(RunError::Backend { id: s.base_id.clone(), variant: s.variant, source, completed: written });
    }
    Ok(RunSummary { completed: written, skipped })
}
