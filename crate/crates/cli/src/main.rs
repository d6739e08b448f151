use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use peano_core::dsl::{self, CompiledModel, Coverage, DslError, PredSource};
use peano_core::gallery::{self, GalleryModel, ModelId};
use peano_core::implication::{build_graph, check_consistency, export_dot, propagate, Consistency};
use peano_core::model::{check_axioms, AxiomReport, ClauseVerdict, Model, Regime};
use peano_core::oracle::{fuzz, MAX_SIZE};
use peano_core::principles::{evaluate, EvidenceBundle, Principle, Status, StatusTable, Support};
use peano_core::reproduce;
use serde_json::{json, Value};

const SCHEMA: u32 = 1;

/// Computable Peano structures, their induction principles, and the
/// implications between them.
#[derive(Debug, Parser)]
#[command(name = "peano", version)]
struct Cli {
    /// Number of enumerated elements each budgeted check examines.
    #[arg(long, global = true, default_value_t = 64)]
    budget: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every pseudo-random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    #[value(alias = "pre-inductive")]
    Pre,
    #[value(alias = "sub-inductive")]
    Sub,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Pre => Regime::PreInductive,
            RegimeArg::Sub => Regime::SubInductive,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the builtin models.
    List,
    /// Check a model against the axioms of a regime.
    Axioms {
        /// Builtin id (e.g. m1-omega-plus-omega, m1) or a .model file.
        model: String,
        /// Defaults to the model's own regime.
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Evaluate, propagate and consistency-check a model's principle table.
    Principles {
        /// Builtin id or a .model file.
        model: String,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Show an implication graph.
    Implications {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// Also write the graph in DOT format, annotated with gallery verdicts.
        #[arg(long, value_name = "FILE")]
        dot: Option<String>,
    },
    /// Validate and compile a .model file, then check its axioms.
    Parse {
        file: String,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Compare well-foundedness, induction and finite descent on random finite relations.
    Oracle {
        /// Largest carrier size.
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Number of relations.
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
    /// Run every acceptance criterion.
    Reproduce,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

const USAGE: u8 = 1;
const MISMATCH: u8 = 2;
const INVALID: u8 = 3;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Report text plus the exit code it implies.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

enum Loaded {
    Builtin(ModelId, GalleryModel),
    Dsl(Box<CompiledModel>),
}

impl Loaded {
    fn model(&self) -> &dyn Model {
        match self {
            Loaded::Builtin(_, m) => m,
            Loaded::Dsl(m) => m.as_ref(),
        }
    }

    fn regime(&self) -> Regime {
        match self {
            Loaded::Builtin(id, _) => id.regime(),
            Loaded::Dsl(m) => dsl::gallery_link(m).map_or(Regime::PreInductive, ModelId::regime),
        }
    }

    fn bundle(&self, budget: usize) -> EvidenceBundle {
        match self {
            Loaded::Builtin(id, _) => gallery::evidence(*id),
            Loaded::Dsl(m) => dsl::evidence_for(m, budget),
        }
    }
}

fn load_file(path: &str) -> Result<CompiledModel, Failure> {
    let source = fs::read_to_string(path).map_err(|e| fail(USAGE, format!("cannot read {path}: {e}")))?;
    dsl::load(&source).map_err(|e| match e {
        DslError::Parse(p) => fail(INVALID, format!("{path}:{p}")),
        other => fail(INVALID, format!("{path}: {other}")),
    })
}

fn resolve(arg: &str) -> Result<Loaded, Failure> {
    if arg.ends_with(".model") || Path::new(arg).is_file() {
        return Ok(Loaded::Dsl(Box::new(load_file(arg)?)));
    }
    let id: ModelId = arg.parse().map_err(|e: String| fail(USAGE, e))?;
    Ok(Loaded::Builtin(id, gallery::build(id)))
}

fn list() -> Report {
    let mut text = String::new();
    let mut models = Vec::new();
    for id in ModelId::ALL {
        text.push_str(&format!("{:<24} {:<14} {}\n", id.as_str(), id.regime().as_str(), id.description()));
        models.push(json!({
            "id": id.as_str(),
            "short": id.short(),
            "regime": id.regime().as_str(),
            "description": id.description(),
        }));
    }
    Report::ok(text, json!({ "models": models }))
}

fn axiom_report(model: &dyn Model, regime: Regime, budget: usize) -> Result<(AxiomReport, String, Value), Failure> {
    let report = check_axioms(model, regime, budget).map_err(|e| fail(MISMATCH, e.to_string()))?;
    let mut text = format!("axioms: {} at budget {budget}\n", regime.as_str());
    let mut clauses = Vec::new();
    for (clause, verdict) in &report.clauses {
        match verdict {
            ClauseVerdict::Pass { checked } => {
                text.push_str(&format!("  PASS {} (checked {checked})\n", clause.label()));
                clauses.push(json!({"id": clause.id(), "label": clause.label(), "passed": true, "checked": checked}));
            }
            ClauseVerdict::Fail { witness } => {
                let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                text.push_str(&format!("  FAIL {}: witness {}\n", clause.label(), w.join(", ")));
                clauses.push(json!({"id": clause.id(), "label": clause.label(), "passed": false, "witness": w}));
            }
        }
    }
    let value = json!({
        "regime": regime.as_str(),
        "budget": budget,
        "passed": report.passed(),
        "clauses": clauses,
    });
    Ok((report, text, value))
}

fn axioms(model: &str, regime: Option<RegimeArg>, budget: usize) -> Result<Report, Failure> {
    let loaded = resolve(model)?;
    let regime = regime.map_or(loaded.regime(), Regime::from);
    let (report, body, value) = axiom_report(loaded.model(), regime, budget)?;
    Ok(Report {
        text: format!("model: {}\n{body}", loaded.model().name()),
        json: json!({"model": loaded.model().name(), "axioms": value}),
        code: if report.passed() { 0 } else { MISMATCH },
    })
}

fn support_text(s: &Status) -> String {
    match s.support() {
        None => String::new(),
        Some(Support::Evidence(e)) => e.to_string(),
        Some(Support::Derived(d)) => d.to_string(),
        Some(Support::Asserted) => "asserted".into(),
    }
}

fn table_text(t: &StatusTable) -> String {
    t.iter()
        .map(|(p, s)| format!("  {:<4} {:<8} {}\n", p.as_str(), s.label(), support_text(s)).trim_end().to_string() + "\n")
        .collect()
}

fn principles(model: &str, regime: Option<RegimeArg>, budget: usize) -> Result<Report, Failure> {
    let loaded = resolve(model)?;
    let regime = regime.map_or(loaded.regime(), Regime::from);
    let m = loaded.model();
    let evaluated = evaluate(m, &loaded.bundle(budget), budget).map_err(|e| fail(MISMATCH, e.to_string()))?;
    let graph = build_graph(regime);
    if let Consistency::Violation(e) = check_consistency(&evaluated, &graph) {
        return Err(fail(MISMATCH, format!("{} is inconsistent with the {regime} graph: {e}", m.name())));
    }
    let closed = propagate(&evaluated, &graph).map_err(|e| fail(MISMATCH, e.to_string()))?;
    let derived = Principle::ALL
        .iter()
        .filter(|p| evaluated.get(**p).verdict().is_none() && closed.get(**p).verdict().is_some())
        .count();
    let text = format!(
        "model: {}\nregime: {}\nbudget: {budget}\n{}consistency: consistent with the {} graph ({derived} derived)\n",
        m.name(),
        regime.as_str(),
        table_text(&closed),
        regime.as_str(),
    );
    let json = json!({
        "regime": regime.as_str(),
        "table": closed,
        "consistent": true,
        "derived": derived,
    });
    Ok(Report::ok(text, json))
}

fn gallery_tables(regime: Regime, budget: usize) -> Result<Vec<StatusTable>, Failure> {
    ModelId::ALL
        .into_iter()
        .filter(|id| id.regime() == regime)
        .map(|id| evaluate(&gallery::build(id), &gallery::evidence(id), budget).map_err(|e| fail(MISMATCH, e.to_string())))
        .collect()
}

fn implications(regime: RegimeArg, dot: Option<&str>, budget: usize) -> Result<Report, Failure> {
    let regime = Regime::from(regime);
    let graph = build_graph(regime);
    if let Some(path) = dot {
        let rendered = export_dot(&graph, &gallery_tables(regime, budget)?);
        fs::write(path, rendered).map_err(|e| fail(USAGE, format!("cannot write {path}: {e}")))?;
    }
    let mut text = format!("regime: {}\n", regime.as_str());
    for e in &graph.edges {
        text.push_str(&format!("  {:<4} => {:<4} {:<13} {}\n", e.src.as_str(), e.dst.as_str(), e.status.as_str(), e.cite));
    }
    Ok(Report::ok(text, json!({ "graph": graph.to_json() })))
}

fn parse_file(file: &str, regime: Option<RegimeArg>, budget: usize) -> Result<Report, Failure> {
    let m = load_file(file)?;
    let regime = regime.map_or_else(|| Loaded::Dsl(Box::new(m.clone())).regime(), Regime::from);
    let ast = m.ast();
    let pred = match m.pred_source() {
        PredSource::Declared => "declared",
        PredSource::Derived(_) => "derived from succ",
    };
    let mut text = format!(
        "model: {}\nsorts: {}\nrules: {} succ, {} pred, {} less, {} rank\npred: {pred}\n",
        m.name(),
        ast.sorts.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", "),
        ast.succ.len(),
        ast.pred.len(),
        ast.less.len(),
        ast.ranks.len(),
    );
    let mut coverage = Vec::new();
    for (sort, c) in m.coverage() {
        let line = match c {
            Coverage::Exact { points } => format!("succ cases for {sort}: exact ({points} points)\n"),
            Coverage::Sampled { points } => format!("succ cases for {sort}: sampled ({points} elements)\n"),
        };
        text.push_str(&line);
        coverage.push(json!({"sort": sort, "coverage": c}));
    }
    if let Some(id) = dsl::gallery_link(&m) {
        text.push_str(&format!("builtin: {id}\n"));
    }
    let (report, body, value) = axiom_report(&m, regime, budget)?;
    text.push_str(&body);
    let json = json!({
        "model": m.name(),
        "sorts": ast.sorts.iter().map(|s| s.name.clone()).collect::<Vec<_>>(),
        "pred": pred,
        "coverage": coverage,
        "builtin": dsl::gallery_link(&m).map(ModelId::as_str),
        "axioms": value,
    });
    Ok(Report {
        text,
        json,
        code: if report.passed() { 0 } else { MISMATCH },
    })
}

fn oracle(n: usize, count: usize, seed: u64) -> Result<Report, Failure> {
    if n > MAX_SIZE {
        return Err(fail(USAGE, format!("--n {n} exceeds {MAX_SIZE}")));
    }
    let s = fuzz(count, 0..=n, seed).map_err(|e| fail(USAGE, e.to_string()))?;
    let agreeing = if s.all_agree() { s.checked } else { 0 };
    let mut text = if s.all_agree() {
        format!("{}/{} agree\n", s.checked, s.checked)
    } else {
        format!("disagreement found after checking {} relations\n", s.checked)
    };
    text.push_str(&format!("well-founded: {}, sizes 0..={n}, seed {seed}\n", s.well_founded));
    if let Some(r) = &s.first_disagreement {
        text.push_str(&format!("first disagreement: {r:?}\n"));
    }
    Ok(Report {
        text,
        json: json!({ "summary": s, "agreeing": agreeing }),
        code: if s.all_agree() { 0 } else { MISMATCH },
    })
}

fn reproduce_all(seed: u64) -> Report {
    let outcomes = reproduce::run(seed);
    let mut text = String::new();
    let mut rows = Vec::new();
    for o in &outcomes {
        text.push_str(&format!("{o}\n"));
        rows.push(json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail}));
    }
    let first_failure = outcomes.iter().find(|o| !o.passed);
    if let Some(o) = first_failure {
        eprintln!("criterion {} ({}) failed: {}", o.id, o.title, o.detail);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    Report {
        text,
        json: json!({"seed": seed, "criteria": rows, "passed": passed}),
        code: if first_failure.is_some() { MISMATCH } else { 0 },
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::List => Ok(list()),
        Command::Axioms { model, regime } => axioms(model, *regime, cli.budget),
        Command::Principles { model, regime } => principles(model, *regime, cli.budget),
        Command::Implications { regime, dot } => implications(*regime, dot.as_deref(), cli.budget),
        Command::Parse { file, regime } => parse_file(file, *regime, cli.budget),
        Command::Oracle { n, count } => oracle(*n, *count, cli.seed),
        Command::Reproduce => Ok(reproduce_all(cli.seed)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => {
                    let mut value = json!({ "schema": SCHEMA });
                    if let (Value::Object(out), Value::Object(body)) = (&mut value, report.json) {
                        out.extend(body);
                    }
                    println!("{}", serde_json::to_string_pretty(&value).expect("json"));
                }
            }
            ExitCode::from(report.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
