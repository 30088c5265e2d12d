//! The `folbench` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported on stderr), 2 on
//! a usage error.

use std::collections::BTreeMap;
use std::error::Error;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use folbench_core::lint::lint;
use folbench_core::metrics::evaluate;
use folbench_core::perturb::{build_suite, NoiseCorpus, NoiseKind, PerturbedSample, SuiteConfig, Variant};
use folbench_core::pipeline::{Backend, Format, MockBackend, OracleBackend, Recovery};
use folbench_core::prover::{BudgetUsed, Decision, NotEntailedReason, ProofOutcome};
use folbench_core::syntax::{parse, print, translate, SourceDoc};
use folbench_core::{Answer, Problem, SyntaxId};
use serde::Serialize;

use crate::config::Config;
use crate::corpus::load_corpus;
use crate::dataset::{load_dataset, load_results, load_samples, write_jsonl_file};
use crate::external::ExternalProver;
use crate::http::HttpBackend;
use crate::prove::Prover;
use crate::report::{render, NamedMetrics, ReportFormat};
use crate::runner::{run, RunnerOptions};
use crate::SCHEMA_VERSION;

type CliResult = Result<(), Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "folbench", version, about = "First-order logic formalisation workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a problem and print it in canonical form
    Parse {
        file: PathBuf,
        #[arg(long, default_value = "fol")]
        syntax: SyntaxId,
        /// Print the syntax tree as JSON
        #[arg(long)]
        json: bool,
    },
    /// Translate a problem between syntaxes; reads stdin without a file
    Translate {
        file: Option<PathBuf>,
        #[arg(long, default_value = "fol")]
        from: SyntaxId,
        #[arg(long)]
        to: SyntaxId,
    },
    /// Print lint warnings for a problem
    Lint {
        file: PathBuf,
        #[arg(long, default_value = "fol")]
        syntax: SyntaxId,
    },
    /// Decide whether the premises entail the conclusion; prints yes or no
    Prove(ProveArgs),
    /// Build perturbed variants of a dataset
    Perturb(PerturbArgs),
    /// Run the pipeline over a sample set
    Run(RunArgs),
    /// Score result files against gold samples
    Report {
        /// Gold samples (perturbed suite or plain dataset)
        #[arg(long)]
        gold: PathBuf,
        #[arg(required = true)]
        results: Vec<PathBuf>,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        /// Run names, in the order of the result files; defaults to file stems
        #[arg(long = "name")]
        names: Vec<String>,
    },
    /// Convert LogicBench BQA files into a dataset
    ConvertLogicbench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ProveArgs {
    file: PathBuf,
    #[arg(long, default_value = "fol")]
    syntax: SyntaxId,
    /// External TPTP prover command; `{file}` and `{timeout}` are substituted
    #[arg(long)]
    external: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    max_clauses: usize,
    #[arg(long, default_value_t = 10_000)]
    timeout_ms: u64,
    /// Print the prover status and the refutation
    #[arg(long)]
    proof: bool,
}

#[derive(Args)]
struct PerturbArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// `all` or one variant such as `L` or `T_C`
    #[arg(long, default_value = "all")]
    variant: String,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise corpus as KIND=PATH; the tautological corpus is built in
    #[arg(long = "corpus")]
    corpora: Vec<String>,
    /// Manifest path; defaults to OUT.manifest.json
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// mock, oracle or http
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    syntax: Option<SyntaxId>,
    #[arg(long)]
    recovery: Option<Recovery>,
    #[arg(long)]
    mock_script: Option<PathBuf>,
    #[arg(long)]
    fallback_seed: Option<u64>,
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long)]
    elide_transcript: bool,
    /// Truncate the results file instead of resuming
    #[arg(long)]
    fresh: bool,
}

/// Runs the command line with `args` (program name first) and returns the
/// exit code.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Parse { file, syntax, json } => {
            let p = load_problem(&file, syntax)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&p)?)?;
            } else {
                write!(out, "{}", print(&p, syntax))?;
            }
        }
        Command::Translate { file, from, to } => {
            let text = match file {
                Some(f) => read(&f)?,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            write!(out, "{}", translate(&SourceDoc::new(text, from), to)?)?;
        }
        Command::Lint { file, syntax } => {
            for w in lint(&load_problem(&file, syntax)?) {
                writeln!(out, "{w}")?;
            }
        }
        Command::Prove(a) => prove(a, out)?,
        Command::Perturb(a) => perturb(a, err)?,
        Command::Run(a) => run_command(a, err)?,
        Command::Report { gold, results, format, names } => {
            let gold = load_samples(&gold)?;
            let mut runs = Vec::new();
            for (i, path) in results.iter().enumerate() {
                let name = names.get(i).cloned().unwrap_or_else(|| stem(path));
                let metrics = evaluate(&load_results(path)?, &gold).map_err(|e| format!("{}: {e}", path.display()))?;
                runs.push(NamedMetrics { name, metrics });
            }
            write!(out, "{}", render(&runs, format))?;
        }
        Command::ConvertLogicbench { inputs, out: path } => {
            let mut samples = Vec::new();
            for input in &inputs {
                samples.extend(
                    crate::logicbench::convert(&read(input)?).map_err(|e| format!("{}: {e}", input.display()))?,
                );
            }
            write_jsonl_file(&path, &samples)?;
            writeln!(err, "wrote {} samples to {}", samples.len(), path.display())?;
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

fn load_problem(path: &Path, syntax: SyntaxId) -> Result<Problem, Box<dyn Error>> {
    let p = parse(&SourceDoc::new(read(path)?, syntax))
        .map_err(|e| format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message))?;
    Ok(p)
}

fn prove(a: ProveArgs, out: &mut dyn Write) -> CliResult {
    let p = load_problem(&a.file, a.syntax)?;
    let budget = folbench_core::prover::ProverBudget {
        max_clauses: a.max_clauses,
        max_time: Duration::from_millis(a.timeout_ms),
    };
    let prover = match &a.external {
        Some(cmd) => Prover::External(ExternalProver::new(cmd)?, budget),
        None => Prover::Builtin(budget),
    };
    let d = prover.decide(&p)?;
    writeln!(out, "{}", d.answer)?;
    if a.proof {
        writeln!(out, "status: {}", d.outcome.status())?;
        if let ProofOutcome::Entailed { proof, .. } = &d.outcome {
            for (i, c) in proof.steps.iter().enumerate() {
                writeln!(out, "{:>3}. {c}", i + 1)?;
            }
        }
    }
    Ok(())
}

fn parse_kind(s: &str) -> Result<NoiseKind, Box<dyn Error>> {
    match s.to_ascii_lowercase().as_str() {
        "encyclopedic" | "e" => Ok(NoiseKind::Encyclopedic),
        "logical" | "l" => Ok(NoiseKind::Logical),
        "tautological" | "t" => Ok(NoiseKind::Tautological),
        other => Err(format!("unknown corpus kind '{other}'").into()),
    }
}

fn perturb(a: PerturbArgs, err: &mut dyn Write) -> CliResult {
    let dataset = load_dataset(&a.dataset)?;
    let mut corpora: BTreeMap<NoiseKind, NoiseCorpus> = BTreeMap::new();
    corpora.insert(NoiseKind::Tautological, NoiseCorpus::tautological());
    for spec in &a.corpora {
        let (kind, path) = spec.split_once('=').ok_or_else(|| format!("corpus '{spec}' is not KIND=PATH"))?;
        let kind = parse_kind(kind)?;
        corpora.insert(kind, load_corpus(kind, Path::new(path))?);
    }
    let wanted: Option<Variant> = match a.variant.as_str() {
        "all" | "ALL" => None,
        v => Some(v.parse()?),
    };
    if let Some(kind) = wanted.and_then(|v| v.noise()) {
        if !corpora.contains_key(&kind) {
            return Err(format!("variant {} needs a {kind:?} corpus (--corpus)", a.variant).into());
        }
    }
    let annotated = dataset.iter().any(|s| s.negation_spans.is_some());
    let mut cfg = SuiteConfig::new(a.seed, a.k, corpora.into_values().collect());
    cfg.counterfactual = match wanted {
        Some(v) => v.is_counterfactual(),
        None => annotated,
    };
    let suite = build_suite(&dataset, &cfg)?;
    let selected: Vec<PerturbedSample> = suite
        .variants
        .iter()
        .filter(|(v, _)| wanted.is_none_or(|w| w == **v))
        .flat_map(|(_, s)| s.iter().cloned())
        .collect();
    write_jsonl_file(&a.out, &selected)?;
    let manifest_path = a.manifest.unwrap_or_else(|| sibling(&a.out, "manifest.json"));
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&suite.manifest)? + "\n")?;
    writeln!(err, "wrote {} samples to {}", selected.len(), a.out.display())?;
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct RunManifest<'a> {
    schema_version: u32,
    dataset: String,
    samples: usize,
    backend: &'a str,
    run: &'a folbench_core::pipeline::RunConfig,
    external_prover: Option<&'a str>,
}

fn run_command(a: RunArgs, err: &mut dyn Write) -> CliResult {
    let mut cfg = match &a.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    cfg.apply_env(|k| std::env::var(k).ok());
    if let Some(b) = a.backend {
        cfg.run.backend = b;
    }
    if let Some(f) = a.format {
        cfg.run.format = f;
    }
    if let Some(s) = a.syntax {
        cfg.run.syntax = s;
    }
    if let Some(r) = a.recovery {
        cfg.run.recovery = r;
    }
    if let Some(s) = a.fallback_seed {
        cfg.run.fallback_seed = s;
    }
    if let Some(p) = a.mock_script {
        cfg.backend.mock_script = Some(p);
    }
    if let Some(n) = a.parallelism {
        cfg.runner.parallelism = n;
    }
    let dataset = a.dataset.or(cfg.data.dataset.clone()).ok_or("no dataset given (--dataset or [data] dataset)")?;
    let results = a.out.or(cfg.data.results.clone()).ok_or("no results file given (--out or [data] results)")?;
    let run_cfg = cfg.run_config();
    run_cfg.validate()?;
    let samples = load_samples(&dataset)?;

    let backend: Box<dyn Backend> = match cfg.run.backend.as_str() {
        "mock" => {
            let path = cfg.backend.mock_script.as_ref().ok_or("the mock backend needs a script (--mock-script)")?;
            let script: BTreeMap<String, Vec<String>> =
                serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            Box::new(MockBackend::new(script))
        }
        "oracle" => Box::new(OracleBackend::new(run_cfg.format, run_cfg.syntax, &samples)),
        "http" => {
            let url =
                cfg.backend.url.clone().ok_or("the http backend needs a URL ([backend] url or FOLBENCH_ENDPOINT)")?;
            let model = cfg
                .backend
                .model
                .clone()
                .ok_or("the http backend needs a model ([backend] model or FOLBENCH_MODEL)")?;
            let token = std::env::var(&cfg.backend.token_env).ok();
            Box::new(HttpBackend::new(url, model, token, Duration::from_millis(cfg.backend.timeout_ms)))
        }
        other => return Err(format!("unknown backend '{other}' (expected mock, oracle or http)").into()),
    };

    let budget = cfg.prover.budget();
    let prover = match &cfg.prover.external {
        Some(cmd) => Prover::External(ExternalProver::new(cmd)?, budget),
        None => Prover::Builtin(budget),
    };
    let prover_error = Mutex::new(None);
    let prove = |p: &Problem| match prover.decide(p) {
        Ok(d) => d,
        Err(e) => {
            prover_error.lock().expect("unpoisoned").get_or_insert(e.to_string());
            let outcome =
                ProofOutcome::NotEntailed { reason: NotEntailedReason::BudgetExhausted, used: BudgetUsed::default() };
            Decision { answer: Answer::No, outcome, negation_entailed: false }
        }
    };

    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        dataset: dataset.display().to_string(),
        samples: samples.len(),
        backend: backend.name(),
        run: &run_cfg,
        external_prover: cfg.prover.external.as_deref(),
    };
    std::fs::write(sibling(&results, "manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;

    let opts = RunnerOptions {
        parallelism: cfg.runner.parallelism,
        elide_transcript: cfg.runner.elide_transcript || a.elide_transcript,
        resume: !a.fresh,
    };
    let summary = run(&samples, &run_cfg, backend.as_ref(), &prove, &results, &opts)?;
    writeln!(
        err,
        "{} samples run, {} already done; results in {}",
        summary.completed,
        summary.skipped,
        results.display()
    )?;
    if let Some(e) = prover_error.into_inner().expect("unpoisoned") {
        return Err(format!("external prover failed ({e}); affected samples were answered no").into());
    }
    Ok(())
}
