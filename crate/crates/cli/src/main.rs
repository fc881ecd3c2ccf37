mod input;

use clap::{Parser, Subcommand, ValueEnum};
use input::{load, load_path, Input, Loaded};
use ninefold_core::builders::{connected_sum, from_simplicial};
use ninefold_core::classes::{compute_dm, integral_lift, sigma_w4, sw_classes, sw_from_wu, wu_classes, ClassError};
use ninefold_core::decide::{decide, decide_connected_sum, decide_seeded, evaluate_omega_pc, DecideError};
use ninefold_core::selftest::{self, Fault, SelftestOptions, DEFAULT_SEED, SUITES};
use ninefold_core::validate::validate_cohomology;
use ninefold_core::{library, schema, validate, CohomologyModel, ManifoldModel, Outcome, Verdict};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const REPORT_SCHEMA_VERSION: u32 = 1;
const CORPUS_ENV: &str = "NINEFOLD_CORPUS_DIR";

/// Exit codes. When several apply, the largest is used.
mod code {
    pub const OK: u8 = 0;
    pub const NO_CONTACT: u8 = 10;
    pub const UNDETERMINED: u8 = 11;
    pub const INVALID: u8 = 12;
    pub const PARSE: u8 = 13;
    pub const SUITE_FAILURE: u8 = 14;
    pub const INTERNAL: u8 = 15;
}

#[derive(Parser)]
#[command(name = "ninefold", version, about = "Contact-structure obstructions on closed 9-manifolds")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized choice-independence runs.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Number of randomized lift choices per model.
    #[arg(long, default_value_t = 20, global = true)]
    samples: usize,
    /// Treat Undetermined verdicts as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for corpus and selftest runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Verb {
    /// Check models (or triangulations) against every structural invariant.
    Validate {
        #[arg(required = true, value_name = "INPUT")]
        inputs: Vec<String>,
    },
    /// Wu, Stiefel–Whitney and spin^c data.
    Classes {
        #[arg(required = true, value_name = "INPUT")]
        inputs: Vec<String>,
    },
    /// Decide whether each model admits a contact structure.
    Decide {
        #[arg(required = true, value_name = "INPUT")]
        inputs: Vec<String>,
    },
    /// Decide a connected sum from the data of its summands.
    Sum { left: String, right: String },
    /// Run every model of a corpus directory (default: the built-in library).
    Corpus {
        dir: Option<PathBuf>,
        /// Write the library models and their expected verdicts to this directory instead.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Selftest {
        /// Run a single suite.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: Option<String>,
        /// Inject a deliberate defect to check that the suites catch it.
        #[arg(long, value_enum)]
        fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    ZeroSq1,
    DropPairingRow,
}

#[derive(Serialize)]
struct InputRecord {
    source: String,
    label: String,
    digest: String,
}

#[derive(Serialize)]
struct Report {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    samples: usize,
    inputs: Vec<InputRecord>,
    results: Vec<Value>,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
    exit_code: u8,
}

/// Accumulates results, text lines and the exit code of one run.
struct Run {
    strict: bool,
    samples: usize,
    seed: u64,
    inputs: Vec<InputRecord>,
    results: Vec<Value>,
    text: Vec<String>,
    warnings: Vec<String>,
    code: u8,
}

impl Run {
    fn raise(&mut self, c: u8) {
        self.code = self.code.max(c);
    }

    fn record(&mut self, l: &Loaded) {
        self.inputs.push(InputRecord { source: l.source.clone(), label: l.label.clone(), digest: l.digest.clone() });
    }

    fn parse_error(&mut self, source: &str, e: String) {
        self.raise(code::PARSE);
        self.results.push(json!({ "source": source, "error": "parse", "message": e }));
        self.text.push(format!("error: {e}"));
    }

    fn outcome_code(&self, v: &Verdict) -> u8 {
        match v.outcome {
            Outcome::Contact => code::OK,
            Outcome::NoContact => code::NO_CONTACT,
            Outcome::Undetermined if self.strict => code::UNDETERMINED,
            Outcome::Undetermined => code::OK,
        }
    }

    fn decide_error(&mut self, label: &str, e: DecideError) {
        let c = match &e {
            DecideError::Invalid(_) | DecideError::Precondition(_) => code::INVALID,
            DecideError::Class(ClassError::Consistency(_)) | DecideError::Contradiction(_) => code::INTERNAL,
            DecideError::Class(_) => code::INVALID,
        };
        self.raise(c);
        let mut r = json!({ "label": label, "error": e.to_string() });
        if let DecideError::Invalid(rep) = &e {
            r["violations"] = json!(rep.violations);
            for v in &rep.violations {
                self.text.push(format!("{label}: {}", violation_line(v)));
            }
        }
        self.text.push(format!("{label}: {e}"));
        self.results.push(r);
    }
}

fn violation_line(v: &ninefold_core::Violation) -> String {
    match v.degree {
        Some(d) => format!("[{}] degree {d}: {}", v.check, v.witness),
        None => format!("[{}] {}", v.check, v.witness),
    }
}

fn verdict_lines(v: &Verdict, h: Option<&CohomologyModel>) -> Vec<String> {
    let mut out = vec![format!("{}: {}", v.label, v.summary())];
    let z = |r: &ninefold_core::decide::IntegralRecord, d: usize| match h {
        Some(h) if !r.zero => h.format_z(d, &r.coords),
        _ if r.zero => "0".into(),
        _ => format!("{:?}", r.coords),
    };
    out.push(format!("  o3 = W3 = {}", z(&v.trail.o3, 3)));
    out.push(format!("  o7 = W7 = {}", z(&v.trail.o7, 7)));
    if let Some(o8) = &v.trail.o8 {
        let rep = h.map_or_else(|| format!("{:?}", o8.representative), |h| h.format_f2(8, &o8.representative));
        out.push(format!("  o8 = [{rep}] modulo a {}-dimensional subspace", o8.subspace_dim));
    }
    if let Some(o9) = v.trail.o9 {
        out.push(format!("  o9 = {}", o9 as u8));
    }
    if let Some(w) = &v.witness {
        out.push(format!("  witness (degree {}): {}", w.degree, w.description));
    }
    out
}

// ---------- Verbs ----------

fn run_validate(run: &mut Run, inputs: &[String]) {
    for arg in inputs {
        let l = match load(arg) {
            Ok(l) => l,
            Err(e) => {
                run.parse_error(arg, e);
                continue;
            }
        };
        run.record(&l);
        let report = match &l.input {
            Input::Model(m) => validate(m),
            Input::Complex(x) => match from_simplicial(x) {
                Ok(h) => validate_cohomology(&h),
                Err(e) => {
                    run.raise(code::INVALID);
                    run.results.push(json!({ "label": l.label, "valid": false, "error": e.to_string() }));
                    run.text.push(format!("{}: invalid: {e}", l.label));
                    continue;
                }
            },
        };
        if !report.is_ok() {
            run.raise(code::INVALID);
        }
        run.text.push(format!("{}: {}", l.label, if report.is_ok() { "valid" } else { "INVALID" }));
        run.text.extend(report.violations.iter().map(|v| format!("  {}", violation_line(v))));
        run.text.extend(report.skipped.iter().map(|s| format!("  skipped: {s}")));
        run.results.push(json!({ "label": l.label, "valid": report.is_ok(), "violations": report.violations, "skipped": report.skipped }));
    }
}

fn class_table(h: &CohomologyModel, name: &str, classes: &[ninefold_simplicial::BitVec]) -> (Vec<Value>, Vec<String>) {
    let json = classes.iter().enumerate().map(|(k, x)| json!({ "degree": k, "bits": x, "text": h.format_f2(k, x) })).collect();
    let text = classes.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| format!("  {name}{k} = {}", h.format_f2(k, x))).collect();
    (json, text)
}

fn classes_of_model(run: &mut Run, m: &ManifoldModel) {
    let h = &m.cohomology;
    let r = validate(m);
    if !r.is_ok() {
        run.decide_error(&m.label, DecideError::Invalid(r));
        return;
    }
    let (wu, sw) = match sw_classes(m) {
        Ok(x) => x,
        Err(e) => return run.decide_error(&m.label, e.into()),
    };
    let (wu_json, wu_text) = class_table(h, "v", &wu.v);
    let (sw_json, sw_text) = class_table(h, "w", &sw.w);
    let integral = |d: usize, v: &Option<ninefold_core::ZVec>| {
        let v = v.clone().unwrap_or_default();
        json!({ "zero": CohomologyModel::z_is_zero(&v), "text": h.format_z(d, &v) })
    };
    let spin = sw.w[2].is_zero();
    let spinc = sw.w3_vanishes();
    let dm = compute_dm(h, &sw.w[2]).map(|s| s.dim()).ok();
    let c = if spinc { integral_lift(h, 2, &sw.w[2]).ok().flatten() } else { None };
    let sigma = if spin { sigma_w4(m, &sw).ok().flatten() } else { None };
    let omega = if spinc { evaluate_omega_pc(m).ok().flatten() } else { None };
    run.text.push(format!("{}:", m.label));
    run.text.extend(wu_text);
    run.text.extend(sw_text);
    run.text.push(format!("  W3 = {}, W7 = {}", integral(3, &sw.big_w3)["text"].as_str().unwrap(), integral(7, &sw.big_w7)["text"].as_str().unwrap()));
    run.text.push(format!("  spin: {spin}, spin^c: {spinc}"));
    if let Some(c) = &c {
        run.text.push(format!("  integral lift of w2: {}", h.format_z(2, c)));
    }
    if let Some(s) = sigma {
        run.text.push(format!("  sigma_w4 = {}", s as u8));
    }
    if let Some(o) = &omega {
        run.text.push(format!("  Omega(p_c) = [{}] modulo a {}-dimensional subspace", h.format_f2(8, &o.representative), o.subspace.dim()));
    }
    run.results.push(json!({
        "label": m.label,
        "wu": wu_json,
        "stiefel_whitney": sw_json,
        "W3": integral(3, &sw.big_w3),
        "W7": integral(7, &sw.big_w7),
        "spin": spin,
        "spinc": spinc,
        "d_m_dim": dm,
        "w2_lift": c.map(|c| h.format_z(2, &c)),
        "sigma_w4": sigma,
        "omega_pc": omega.map(|o| json!({ "representative": o.representative, "subspace_dim": o.subspace.dim(), "zero": o.is_zero() })),
    }));
}

fn run_classes(run: &mut Run, inputs: &[String]) {
    for arg in inputs {
        let l = match load(arg) {
            Ok(l) => l,
            Err(e) => {
                run.parse_error(arg, e);
                continue;
            }
        };
        run.record(&l);
        match &l.input {
            Input::Model(m) => classes_of_model(run, m),
            Input::Complex(x) => {
                // Triangulations of any dimension: Wu and Stiefel–Whitney classes only.
                let res = from_simplicial(x).map_err(|e| e.to_string()).and_then(|h| {
                    let wu = wu_classes(&h).map_err(|e| e.to_string())?;
                    Ok((sw_from_wu(&h, &wu), wu, h))
                });
                match res {
                    Ok((sw, wu, h)) => {
                        let (wu_json, wu_text) = class_table(&h, "v", &wu.v);
                        let (sw_json, sw_text) = class_table(&h, "w", &sw.w);
                        run.text.push(format!("{}:", l.label));
                        run.text.extend(wu_text);
                        run.text.extend(sw_text);
                        run.results.push(json!({ "label": l.label, "wu": wu_json, "stiefel_whitney": sw_json }));
                    }
                    Err(e) => {
                        run.raise(code::INVALID);
                        run.text.push(format!("{}: {e}", l.label));
                        run.results.push(json!({ "label": l.label, "error": e }));
                    }
                }
            }
        }
    }
}

/// Decides `m`, then repeats with `samples` random lift choices; any
/// disagreement is an internal error.
fn decide_one(run: &mut Run, m: &ManifoldModel) {
    let v = match decide(m) {
        Ok(v) => v,
        Err(e) => return run.decide_error(&m.label, e),
    };
    let mut disagree = None;
    for i in 0..run.samples {
        match decide_seeded(m, run.seed.wrapping_add(i as u64)) {
            Ok(w) if w.same_decision(&v) => {}
            Ok(w) => disagree = Some(format!("sample {i} gives {}", w.summary())),
            Err(e) => disagree = Some(format!("sample {i}: {e}")),
        }
    }
    if let Some(d) = disagree {
        run.raise(code::INTERNAL);
        run.warnings.push(format!("{}: verdict depends on lift choices: {d}", m.label));
    }
    let c = run.outcome_code(&v);
    run.raise(c);
    run.text.extend(verdict_lines(&v, Some(&m.cohomology)));
    run.results.push(json!({ "label": m.label, "verdict": v, "summary": v.summary() }));
}

fn run_decide(run: &mut Run, inputs: &[String]) {
    for arg in inputs {
        match load(arg) {
            Ok(l) => {
                run.record(&l);
                match l.model() {
                    Some(m) => decide_one(run, m),
                    None => run.decide_error(&l.label, DecideError::Precondition("a triangulation is not a 9-dimensional model".into())),
                }
            }
            Err(e) => run.parse_error(arg, e),
        }
    }
}

fn run_sum(run: &mut Run, left: &str, right: &str) {
    let mut models = Vec::new();
    for arg in [left, right] {
        match load(arg) {
            Ok(l) => {
                run.record(&l);
                match l.input {
                    Input::Model(m) => models.push(m),
                    Input::Complex(_) => run.decide_error(&l.label, DecideError::Precondition("a triangulation is not a 9-dimensional model".into())),
                }
            }
            Err(e) => run.parse_error(arg, e),
        }
    }
    let [a, b] = models.as_slice() else { return };
    match decide_connected_sum(a, b) {
        Ok(v) => {
            let c = run.outcome_code(&v);
            run.raise(c);
            // The assembled sum is only used to name basis elements.
            let h = connected_sum(a, b).ok().map(|s| s.cohomology);
            run.text.extend(verdict_lines(&v, h.as_ref()));
            run.results.push(json!({ "label": v.label, "verdict": v, "summary": v.summary() }));
        }
        Err(e) => run.decide_error(&format!("{}#{}", a.label, b.label), e),
    }
}

/// Models of a corpus directory in file-name order, with the expected
/// verdicts from `expected.json` when present.
fn corpus_dir(run: &mut Run, dir: &Path) -> (Vec<Loaded>, Option<serde_json::Map<String, Value>>) {
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            run.parse_error(&dir.display().to_string(), format!("{}: {e}", dir.display()));
            return (vec![], None);
        }
    };
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    paths.sort();
    let mut expected = None;
    let mut models = Vec::new();
    for p in paths {
        if p.file_name().is_some_and(|n| n == "expected.json") {
            match std::fs::read_to_string(&p).map_err(|e| e.to_string()).and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string())) {
                Ok(Value::Object(map)) => expected = Some(map),
                Ok(_) => run.parse_error(&p.display().to_string(), format!("{}: expected an object of label -> verdict", p.display())),
                Err(e) => run.parse_error(&p.display().to_string(), format!("{}: {e}", p.display())),
            }
            continue;
        }
        match load_path(&p) {
            Ok(l) if l.model().is_some() => models.push(l),
            Ok(l) => run.warnings.push(format!("{}: triangulation skipped", l.source)),
            Err(e) => run.parse_error(&p.display().to_string(), e),
        }
    }
    (models, expected)
}

fn run_corpus(run: &mut Run, dir: Option<PathBuf>, export: Option<PathBuf>) {
    if let Some(out) = export {
        let written = std::fs::create_dir_all(&out).and_then(|_| {
            for m in library::all() {
                std::fs::write(out.join(format!("{}.json", m.label)), schema::to_json(&m) + "\n")?;
            }
            let expected: serde_json::Map<String, Value> = library::EXPECTED_VERDICTS.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
            std::fs::write(out.join("expected.json"), serde_json::to_string_pretty(&expected).unwrap() + "\n")
        });
        match written {
            Ok(()) => {
                run.text.push(format!("wrote {} models to {}", library::NAMES.len(), out.display()));
                run.results.push(json!({ "exported": library::NAMES, "directory": out.display().to_string() }));
            }
            Err(e) => run.parse_error(&out.display().to_string(), format!("{}: {e}", out.display())),
        }
        return;
    }
    let dir = dir.or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from));
    let (models, expected) = match &dir {
        Some(d) => corpus_dir(run, d),
        None => {
            let models = library::NAMES.iter().map(|n| Loaded::from_model(format!("lib:{n}"), library::library(n).unwrap())).collect();
            let expected = library::EXPECTED_VERDICTS.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
            (models, Some(expected))
        }
    };
    for l in &models {
        run.record(l);
    }
    let verdicts: Vec<Result<Verdict, DecideError>> = models.par_iter().map(|l| decide(l.model().unwrap())).collect();
    run.text.push(format!("{:<28} {:<24} {:<24} {}", "model", "verdict", "expected", "match"));
    for (l, v) in models.iter().zip(verdicts) {
        let want = expected.as_ref().and_then(|e| e.get(&l.label)).and_then(Value::as_str).map(String::from);
        let got = match v {
            Ok(v) => v.summary(),
            Err(e) => {
                run.decide_error(&l.label, e);
                continue;
            }
        };
        let matches = want.as_ref().map(|w| *w == got);
        if matches == Some(false) {
            run.raise(code::SUITE_FAILURE);
        }
        let mark = match matches {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "-",
        };
        run.text.push(format!("{:<28} {:<24} {:<24} {mark}", l.label, got, want.as_deref().unwrap_or("-")));
        run.results.push(json!({ "label": l.label, "verdict": got, "expected": want, "matches": matches }));
    }
}

fn run_selftest(run: &mut Run, suite: Option<String>, fault: Option<FaultArg>) {
    let opts = SelftestOptions {
        seed: run.seed,
        samples: run.samples,
        fault: fault.map(|f| match f {
            FaultArg::ZeroSq1 => Fault::ZeroSq1,
            FaultArg::DropPairingRow => Fault::DropPairingRow,
        }),
        ..SelftestOptions::default()
    };
    let names: Vec<&str> = match &suite {
        Some(s) => vec![s.as_str()],
        None => SUITES.to_vec(),
    };
    let reports: Vec<_> = names.par_iter().map(|s| selftest::run_suite(s, &opts).expect("suite names are validated")).collect();
    for r in reports {
        if !r.passed {
            run.raise(code::SUITE_FAILURE);
        }
        run.text.push(format!("{:<22} {:<5} {} checks", r.name, if r.passed { "pass" } else { "FAIL" }, r.checks));
        if let Some(ce) = &r.counterexample {
            run.text.push(format!("  first counterexample: {ce}"));
        }
        run.results.push(json!(r));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let mut run = Run {
        strict: cli.strict,
        samples: cli.samples,
        seed: cli.seed,
        inputs: vec![],
        results: vec![],
        text: vec![],
        warnings: vec![],
        code: code::OK,
    };
    let command = match cli.verb {
        Verb::Validate { inputs } => {
            run_validate(&mut run, &inputs);
            "validate"
        }
        Verb::Classes { inputs } => {
            run_classes(&mut run, &inputs);
            "classes"
        }
        Verb::Decide { inputs } => {
            run_decide(&mut run, &inputs);
            "decide"
        }
        Verb::Sum { left, right } => {
            run_sum(&mut run, &left, &right);
            "sum"
        }
        Verb::Corpus { dir, export } => {
            run_corpus(&mut run, dir, export);
            "corpus"
        }
        Verb::Selftest { suite, fault } => {
            run_selftest(&mut run, suite, fault);
            "selftest"
        }
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_millis());
    let mut out = Vec::new();
    match cli.format {
        Format::Structured => {
            let report = Report {
                schema_version: REPORT_SCHEMA_VERSION,
                tool: "ninefold",
                version: env!("CARGO_PKG_VERSION"),
                command,
                seed: run.seed,
                samples: run.samples,
                inputs: run.inputs,
                results: run.results,
                warnings: run.warnings,
                timing_ms,
                exit_code: run.code,
            };
            // Going through Value sorts every object's keys.
            let value = serde_json::to_value(&report).expect("report serializes");
            out.push(serde_json::to_string_pretty(&value).expect("report serializes"));
        }
        Format::Text => {
            out = run.text;
            out.extend(run.warnings.iter().map(|w| format!("warning: {w}")));
            out.extend(timing_ms.map(|t| format!("time: {t} ms")));
        }
    }
    // A closed pipe is not an error worth reporting.
    let mut stdout = std::io::stdout().lock();
    for line in out {
        if writeln!(stdout, "{line}").is_err() {
            break;
        }
    }
    ExitCode::from(run.code)
}
