//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Set `FOLBENCH_EXTERNAL_PROVER` to a command template such as
//! `vampire --mode casc -t {timeout} {file}` to cross-check the inference
//! schemas against an external prover.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use folbench::corpus::load_corpus;
use folbench::dataset::{load_dataset, load_results, load_samples, write_jsonl_file};
use folbench::external::ExternalProver;
use folbench::runner::{run, RunnerOptions};
use folbench_core::gen::{self, GenConfig};
use folbench_core::lint::lint;
use folbench_core::metrics::{evaluate, Metrics};
use folbench_core::perturb::{
    build_suite, negate_schema, NoiseCorpus, NoiseKind, PerturbedSample, RuleTag, SuiteConfig, Variant,
};
use folbench_core::pipeline::{Format, MockBackend, OracleBackend, Recovery, RunConfig, SampleResult};
use folbench_core::prover::{decide, Decision, ProverBudget};
use folbench_core::syntax::{parse, print, translate, SourceDoc};
use folbench_core::{Answer, Formula, Problem, SyntaxId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use sha2::{Digest, Sha256};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect()
}

fn prove(p: &Problem) -> Decision {
    decide(p, &ProverBudget::default())
}

fn c1_syntax_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = GenConfig { max_depth: 6, ..GenConfig::default() };
    let mut checked = 0;
    for i in 0..200 {
        let p = gen::problem(&mut rng, &cfg);
        for s in SyntaxId::ALL {
            let text = print(&p, s);
            let back = parse(&SourceDoc::new(text.as_str(), s))
                .map_err(|e| format!("problem {i} in {s}: {}\n{text}", e.message))?;
            ensure(back.alpha_equal(&p), || {
                format!("problem {i} in {s} is not alpha-equal after a round trip\n{text}")
            })?;
            checked += 1;
        }
    }
    let took = within(start, Duration::from_secs(5))?;
    Ok(format!("{checked}/600 alpha-equal in {took:.2?}"))
}

fn c2_fig3_triple() -> Outcome {
    let rows = [(SyntaxId::Fol, "fig3.fol"), (SyntaxId::Rfol, "fig3.rfol"), (SyntaxId::Tptp, "fig3.p")];
    let canonical = BTreeMap::from([
        (SyntaxId::Fol, "∀x (drinkWater(x) → hydrated(x))"),
        (SyntaxId::Rfol, "∀?x (drinkWater(?x) → hydrated(?x))"),
        (SyntaxId::Tptp, "fof(a0,axiom,![X]:(drinkWater(X) => hydrated(X)))."),
    ]);
    let docs: Vec<(SyntaxId, SourceDoc)> = rows.iter().map(|(s, f)| (*s, SourceDoc::new(read(f), *s))).collect();
    let asts: Vec<Problem> =
        docs.iter().map(|(s, d)| parse(d).map_err(|e| format!("{s}: {}", e.message))).collect::<Result<_, _>>()?;
    for (i, a) in asts.iter().enumerate() {
        for b in &asts[i + 1..] {
            ensure(a.alpha_equal(b), || "renderings are not alpha-equal".into())?;
        }
    }
    let mut n = 0;
    for (from, d) in &docs {
        for (to, target) in &canonical {
            let out = translate(d, *to).map_err(|e| e.message)?;
            ensure(squash(&out) == squash(target), || format!("{from} -> {to}: got {out:?}, want {target:?}"))?;
            n += 1;
        }
    }
    Ok(format!("3 renderings alpha-equal, {n}/9 translations match"))
}

fn atoms<'a>(f: &'a Formula, out: &mut BTreeSet<&'a Formula>) {
    match f {
        Formula::Atom(..) => {
            out.insert(f);
        }
        Formula::Not(a) => atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Xor(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            atoms(a, out);
            atoms(b, out);
        }
        Formula::Forall(..) | Formula::Exists(..) => panic!("not ground"),
    }
}

fn eval(f: &Formula, v: &BTreeMap<&Formula, bool>) -> bool {
    match f {
        Formula::Atom(..) => v[f],
        Formula::Not(a) => !eval(a, v),
        Formula::And(a, b) => eval(a, v) && eval(b, v),
        Formula::Or(a, b) => eval(a, v) || eval(b, v),
        Formula::Xor(a, b) => eval(a, v) != eval(b, v),
        Formula::Implies(a, b) => !eval(a, v) || eval(b, v),
        Formula::Iff(a, b) => eval(a, v) == eval(b, v),
        Formula::Forall(..) | Formula::Exists(..) => panic!("not ground"),
    }
}

/// Premises entail the conclusion under every assignment.
fn truth_table(p: &Problem) -> bool {
    let c = &p.conclusion.as_ref().expect("ground problems have a conclusion").formula;
    let mut set = BTreeSet::new();
    for f in p.formulas() {
        atoms(f, &mut set);
    }
    let list: Vec<&Formula> = set.into_iter().collect();
    (0u32..1 << list.len()).all(|bits| {
        let v: BTreeMap<&Formula, bool> = list.iter().enumerate().map(|(i, a)| (*a, bits >> i & 1 == 1)).collect();
        !p.premise_formulas().all(|f| eval(f, &v)) || eval(c, &v)
    })
}

fn c3_prover_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut yes) = (0, 0);
    for i in 0..500 {
        let p = gen::ground_problem(&mut rng, 10);
        let expected = truth_table(&p);
        let got = prove(&p).answer == Answer::Yes;
        ensure(got == expected, || {
            format!("problem {i}: prover {got}, truth table {expected}\n{}", print(&p, SyntaxId::Fol))
        })?;
        agree += 1;
        yes += usize::from(expected);
    }
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("{agree}/500 agree ({yes} entailed) in {took:.2?}"))
}

fn c4_schema_suite() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for rule in RuleTag::COUNTERFACTUAL {
        let s = negate_schema(rule).map_err(|e| e.to_string())?.instantiate("zelda");
        problems.push((rule, "original", s.original));
        problems.push((rule, "negated", s.negated));
    }
    for (rule, which, p) in &problems {
        ensure(prove(p).outcome.is_entailed(), || format!("{rule} {which} not entailed"))?;
    }
    let took = within(start, Duration::from_secs(5))?;
    let external = match std::env::var("FOLBENCH_EXTERNAL_PROVER") {
        Ok(cmd) => {
            let prover = ExternalProver::new(&cmd).map_err(|e| e.to_string())?;
            for (rule, which, p) in &problems {
                let outcome = prover.prove(p, &ProverBudget::default()).map_err(|e| format!("{rule} {which}: {e}"))?;
                ensure(outcome.is_entailed(), || format!("external prover disagrees on {rule} {which}"))?;
            }
            "external prover agrees on 16/16".to_string()
        }
        Err(_) => "no external prover configured".to_string(),
    };
    Ok(format!("{}/16 entailed in {took:.2?}; {external}", problems.len()))
}

fn c5_error_message() -> Outcome {
    let err = parse(&SourceDoc::new("man ∧ mortal(Socrates)", SyntaxId::Fol)).err().ok_or("parsed unexpectedly")?;
    let want = "mismatched input '∧' expecting '('";
    ensure(err.message == want, || format!("got {:?}", err.message))?;
    Ok(format!("diagnostic {:?}", err.message))
}

#[derive(Deserialize)]
struct LintFixture {
    cases: Vec<LintCase>,
}

#[derive(Deserialize)]
struct LintCase {
    name: String,
    syntax: SyntaxId,
    problem: String,
    expected: Vec<ExpectedWarning>,
}

#[derive(Deserialize, Debug, PartialEq)]
struct ExpectedWarning {
    kind: String,
    subjects: Vec<String>,
}

fn c6_lint() -> Outcome {
    let fixture: LintFixture = serde_json::from_str(&read("lint_cases.json")).map_err(|e| e.to_string())?;
    ensure(fixture.cases.len() == 9, || format!("{} cases", fixture.cases.len()))?;
    for c in &fixture.cases {
        let p =
            parse(&SourceDoc::new(c.problem.as_str(), c.syntax)).map_err(|e| format!("{}: {}", c.name, e.message))?;
        let got: Vec<ExpectedWarning> = lint(&p)
            .into_iter()
            .map(|w| ExpectedWarning { kind: w.kind.name().into(), subjects: w.subjects })
            .collect();
        ensure(got == c.expected, || format!("{}: got {got:?}, want {:?}", c.name, c.expected))?;
    }
    Ok("9/9 cases match".into())
}

fn corpora() -> Vec<NoiseCorpus> {
    vec![
        load_corpus(NoiseKind::Encyclopedic, &fixture("encyclopedic.txt")).unwrap(),
        load_corpus(NoiseKind::Logical, &fixture("logical.txt")).unwrap(),
        NoiseCorpus::tautological(),
    ]
}

fn c7_perturbation() -> Outcome {
    let dataset = load_dataset(&fixture("annotated.jsonl")).map_err(|e| e.to_string())?;
    ensure(dataset.len() == 40, || format!("{} samples", dataset.len()))?;
    let mut noise_checked = 0;
    let mut cf = 0;
    for k in [1, 2, 4] {
        let suite = build_suite(&dataset, &SuiteConfig::new(11, k, corpora())).map_err(|e| e.to_string())?;
        let index = |v: Variant| -> BTreeMap<&str, &PerturbedSample> {
            suite.variants[&v].iter().map(|s| (s.base_id.as_str(), s)).collect()
        };
        let (o, oc) = (index(Variant::O), index(Variant::OC));
        ensure(oc.len() == 40, || format!("{} counterfactual samples", oc.len()))?;
        for v in Variant::ALL.into_iter().filter(|v| v.noise().is_some()) {
            let base = if v.is_counterfactual() { &oc } else { &o };
            for s in &suite.variants[&v] {
                let b = base[s.base_id.as_str()];
                ensure(s.label == b.label, || format!("{} {v}: label changed", s.base_id))?;
                ensure(s.context.len() == b.context.len() + k && s.context.ends_with(&b.context), || {
                    format!("{} {v}: original context is not a suffix", s.base_id)
                })?;
                ensure(s.context_text().ends_with(&b.context_text()), || format!("{} {v}: text suffix", s.base_id))?;
                noise_checked += 1;
            }
        }
        if k == 1 {
            for (id, s) in &oc {
                let orig = o[id];
                ensure(s.label == orig.label.flip(), || format!("{id}: counterfactual label did not flip"))?;
                let gold = orig.gold_problem.as_ref().ok_or_else(|| format!("{id}: no gold problem"))?;
                let negated = s.gold_problem.as_ref().ok_or_else(|| format!("{id}: no negated gold problem"))?;
                ensure(prove(gold).answer == orig.label, || format!("{id}: prover disagrees with the gold label"))?;
                ensure(prove(negated).answer == orig.label.flip(), || format!("{id}: prover did not flip"))?;
                cf += 1;
            }
        }
    }
    Ok(format!("{noise_checked} noise samples keep label and suffix; {cf}/40 counterfactuals flip under the prover"))
}

fn c8_tautologies() -> Outcome {
    let text = NoiseCorpus::tautology_file();
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    let checksum = include_str!("../../core/data/tautologies.sha256");
    let expected = checksum.split_whitespace().next().ok_or("empty checksum file")?;
    ensure(digest == expected, || format!("sha256 {digest}, expected {expected}"))?;
    let n = NoiseCorpus::tautological().sentences.len();
    ensure(n == 22 && text.lines().count() == 22, || format!("{n} sentences"))?;
    Ok(format!("22 sentences, sha256 {}…", &digest[..12]))
}

fn originals() -> Vec<PerturbedSample> {
    load_samples(&fixture("annotated.jsonl")).unwrap()
}

fn run_all(
    samples: &[PerturbedSample],
    cfg: &RunConfig,
    backend: &dyn folbench_core::pipeline::Backend,
) -> Result<Vec<SampleResult>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("results.jsonl");
    run(samples, cfg, backend, &prove, &out, &RunnerOptions::default()).map_err(|e| e.to_string())?;
    load_results(&out).map_err(|e| e.to_string())
}

fn c9_oracle_run() -> Outcome {
    let samples = originals();
    let mut parts = Vec::new();
    let runs = [
        (Format::Formal, SyntaxId::Fol),
        (Format::Formal, SyntaxId::Rfol),
        (Format::Formal, SyntaxId::Tptp),
        (Format::Direct, SyntaxId::Fol),
        (Format::CoT, SyntaxId::Fol),
    ];
    for (format, syntax) in runs {
        let cfg = RunConfig { format, syntax, recovery: Recovery::NoRecovery, ..RunConfig::default() };
        let backend = OracleBackend::new(format, syntax, &samples);
        let m = evaluate(&run_all(&samples, &cfg, &backend)?, &samples).map_err(|e| e.to_string())?.overall;
        ensure(m.accuracy == 1.0, || format!("{format}/{syntax}: accuracy {}", m.accuracy))?;
        if format == Format::Formal {
            ensure(m.execution_rate == 1.0, || format!("{format}/{syntax}: execution rate {}", m.execution_rate))?;
        }
        parts.push(format!("{format}/{syntax} {:.2}/{:.2}", m.accuracy, m.execution_rate));
    }
    Ok(format!("accuracy/execution: {}", parts.join(", ")))
}

fn ladder() -> MockBackend {
    MockBackend::new(serde_json::from_str(&read("ladder_script.json")).unwrap())
}

fn c10_recovery_ladder() -> Outcome {
    let samples = originals();
    let backend = ladder();
    let mut parts = Vec::new();
    for recovery in Recovery::ALL {
        let cfg = RunConfig { recovery, ..RunConfig::default() };
        let results = run_all(&samples, &cfg, &backend)?;
        let rate = evaluate(&results, &samples).map_err(|e| e.to_string())?.overall.execution_rate;
        let want = if recovery == Recovery::NoRecovery { 0.5 } else { 1.0 };
        ensure(rate == want, || format!("{recovery:?}: execution rate {rate}, want {want}"))?;
        let max = results.iter().map(|r| r.refinement_rounds).max().unwrap_or(0);
        ensure(max <= 3, || format!("{recovery:?}: {max} refinement rounds"))?;
        parts.push(format!("{recovery:?} {rate:.2} (≤{max} rounds)"));
    }
    Ok(parts.join(", "))
}

fn c11_metrics_fixture() -> Outcome {
    let gold = load_samples(&fixture("metrics_gold.jsonl")).map_err(|e| e.to_string())?;
    let results = load_results(&fixture("metrics_results.jsonl")).map_err(|e| e.to_string())?;
    let m = evaluate(&results, &gold).map_err(|e| e.to_string())?;
    let o = &m.overall;
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let valid = o.valid_accuracy.ok_or("valid accuracy is null")?;
    ensure(close(o.accuracy, 0.70) && close(o.execution_rate, 0.80) && close(valid, 0.75), || {
        format!("accuracy {}, execution {}, valid {valid}", o.accuracy, o.execution_rate)
    })?;
    let expected: Metrics = serde_json::from_str(&read("metrics_expected.json")).map_err(|e| e.to_string())?;
    ensure(m == expected, || format!("metrics differ from the expected JSON: {m:?}"))?;
    Ok(format!("accuracy {:.2}, execution rate {:.2}, valid accuracy {valid:.2}", o.accuracy, o.execution_rate))
}

/// Builds the full suite, then runs the oracle and the ladder mock over it.
fn full_run(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let dataset = load_dataset(&fixture("annotated.jsonl")).map_err(|e| e.to_string())?;
    let suite = build_suite(&dataset, &SuiteConfig::new(0, 4, corpora())).map_err(|e| e.to_string())?;
    let samples: Vec<PerturbedSample> = suite.variants.values().flatten().cloned().collect();
    let suite_path = dir.join("suite.jsonl");
    write_jsonl_file(&suite_path, &samples).map_err(|e| e.to_string())?;
    let samples = load_samples(&suite_path).map_err(|e| e.to_string())?;
    let mut files = vec![std::fs::read(&suite_path).map_err(|e| e.to_string())?];
    let oracle = OracleBackend::new(Format::Formal, SyntaxId::Fol, &samples);
    let mock = ladder();
    let backends: [(&str, &dyn folbench_core::pipeline::Backend); 2] = [("oracle", &oracle), ("ladder", &mock)];
    for (name, backend) in backends {
        let out = dir.join(format!("{name}.jsonl"));
        let cfg = RunConfig { fallback_seed: 42, ..RunConfig::default() };
        let opts = RunnerOptions { parallelism: 4, elide_transcript: false, resume: false };
        run(&samples, &cfg, backend, &prove, &out, &opts).map_err(|e| e.to_string())?;
        files.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

fn c12_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = full_run(a.path())?;
    let second = full_run(b.path())?;
    for (i, name) in ["suite", "oracle results", "ladder results"].iter().enumerate() {
        ensure(first[i] == second[i], || format!("{name} differ between runs"))?;
    }
    let bytes: usize = first.iter().map(Vec::len).sum();
    Ok(format!("suite and two result files byte-identical ({bytes} bytes)"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("syntax round trip", c1_syntax_round_trip),
        ("golden triple", c2_fig3_triple),
        ("prover vs truth tables", c3_prover_vs_oracle),
        ("inference schema suite", c4_schema_suite),
        ("error message fidelity", c5_error_message),
        ("lint heuristics", c6_lint),
        ("perturbation invariants", c7_perturbation),
        ("tautology corpus", c8_tautologies),
        ("end-to-end oracle run", c9_oracle_run),
        ("recovery ladder", c10_recovery_ladder),
        ("metrics fixture", c11_metrics_fixture),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Ok(Err(detail)) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: panicked", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
