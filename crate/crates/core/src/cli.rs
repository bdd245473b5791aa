//! Command-line front end. Reports are JSON (schema `cantor-spectra/1`) or plain text.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{self, CatalogError};
use crate::dimgroup::{
    image_group_with, infinitesimal_report_with, rational_member, torsion_quotient, DimgroupError, RationalVerdict,
    SubgroupOfR,
};
use crate::exactnum::{parse_element, parse_element_in, parse_field, parse_rational, FieldElement, FieldError};
use crate::measure::{ergodicity_certificate, measure_enclosure, stationary_measure, MeasureError};
use crate::serial::{exact_elem, exact_int};
use crate::spectra::{
    convergence_diagnostic, eigen_verdict, torsion_audit, AuditParams, BatteryParams, SpectraError, SpectralContext,
};
use crate::tower::{build_tower, DiagramSpec, Tower, TowerError};

pub const SCHEMA: &str = "cantor-spectra/1";
pub const THREADS_ENV: &str = "CANTOR_SPECTRA_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("UsageError: {0}")]
    Usage(String),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
    #[error("SpecError: {0}")]
    Json(#[from] serde_json::Error),
    #[error("TowerError: {0}")]
    Tower(#[from] TowerError),
    #[error("MeasureError: {0}")]
    Measure(#[from] MeasureError),
    #[error("DimgroupError: {0}")]
    Dimgroup(#[from] DimgroupError),
    #[error("SpectraError: {0}")]
    Spectra(#[from] SpectraError),
    #[error("CatalogError: {0}")]
    Catalog(#[from] CatalogError),
    #[error("FieldError: {0}")]
    Field(#[from] FieldError),
}

#[derive(Parser, Debug)]
#[command(
    name = "cantor-spectra",
    version,
    about = "Towers, invariant measures and eigenvalue tests for minimal Cantor systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariant measures of tower bases (exact when stationary, enclosures otherwise).
    Measures(MeasuresArgs),
    /// Run the eigenvalue battery on one candidate.
    Eigen(EigenArgs),
    /// Rational subgroup membership of p/q.
    Rational(RationalArgs),
    /// Image subgroup and infinitesimals.
    Invariants(InvariantsArgs),
    /// Structure of I/E for two generator lists or a catalog group entry.
    Torsion(TorsionArgs),
    /// Torsion audit over a box of candidates.
    Audit(AuditArgs),
    /// Suffix vectors of one level.
    Suffixes(SuffixArgs),
    /// Convergence-rate diagnostic of tower rows.
    Diagnostic(DiagnosticArgs),
    /// List built-in examples.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Serialize)]
pub struct Source {
    /// Built-in example name (see `catalog`).
    #[arg(long)]
    pub catalog: Option<String>,
    /// DiagramSpec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Number of tower levels to build.
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MeasuresArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Only this level (default: all levels).
    #[arg(long)]
    pub level: Option<usize>,
    /// Target width for enclosures of non-stationary towers.
    #[arg(long, default_value = "1/1000000")]
    pub eps: String,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectEigen {
    /// Not refuted.
    Eigen,
    Refuted,
}

#[derive(Args, Debug, Serialize)]
pub struct EigenArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    /// Candidate: p/q, (a+b*sqrt(d))/c, or coords:[...]@field.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long = "N", default_value_t = 30)]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    /// Exit with status 2 when the verdict disagrees.
    #[arg(long, value_enum)]
    pub expect: Option<ExpectEigen>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectMember {
    Member,
    NonMember,
}

#[derive(Args, Debug, Serialize)]
pub struct RationalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, allow_hyphen_values = true)]
    pub frac: String,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    #[arg(long, value_enum)]
    pub expect: Option<ExpectMember>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct InvariantsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct TorsionArgs {
    /// Group-level catalog entry (`sec42`, `sec43`).
    #[arg(long)]
    pub catalog: Option<String>,
    /// Level of the `sec42` approximant.
    #[arg(long, default_value_t = 2)]
    pub level: usize,
    /// Field as a polynomial such as `x^2-5`, optionally `@[lo,hi]`.
    #[arg(long)]
    pub field: Option<String>,
    /// Comma-separated generators of I.
    #[arg(long, allow_hyphen_values = true)]
    pub igens: Option<String>,
    /// Comma-separated generators of E.
    #[arg(long, allow_hyphen_values = true)]
    pub egens: Option<String>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct AuditArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub wbox: u32,
    #[arg(long, default_value_t = 5)]
    pub kmax: u32,
    #[arg(long = "N", default_value_t = 25)]
    #[serde(rename = "N")]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct SuffixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct DiagnosticArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long = "N", default_value_t = 40)]
    #[serde(rename = "N")]
    pub n: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

#[derive(Args, Debug, Serialize)]
pub struct CatalogArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub out: Output,
}

/// Result of one command before it is wrapped into a report.
struct Outcome {
    summary: String,
    results: Value,
    notes: Vec<&'static str>,
    /// False when an `--expect` assertion failed.
    expectation_met: bool,
}

impl Outcome {
    fn new(summary: String, results: Value, notes: Vec<&'static str>) -> Self {
        Outcome { summary, results, notes, expectation_met: true }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    tool_version: &'static str,
    command: &'a str,
    config: Value,
    notes: Vec<&'static str>,
    summary: String,
    results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u64>,
}

fn load_tower(src: &Source, default_levels: usize) -> Result<Tower, CliError> {
    let levels = src.levels.unwrap_or(default_levels);
    let spec: DiagramSpec = match (&src.catalog, &src.spec) {
        (Some(name), None) => catalog::tower_spec(name)?,
        (None, Some(path)) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        _ => return Err(CliError::Usage("give exactly one of --catalog or --spec".into())),
    };
    Ok(build_tower(&spec, levels)?)
}

fn tower_summary(t: &Tower) -> Value {
    json!({
        "kind": t.kind(),
        "levels": t.levels(),
        "vertex_counts": t.vertex_counts(),
        "period": t.period(),
    })
}

/// Split on commas that are not inside brackets or parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

const EXACT_NOTE: &str = "values tagged exact: are exact field or rational identities";
const INTERVAL_NOTE: &str = "values tagged interval: are certified outward-rounded enclosures";

fn cmd_measures(a: &MeasuresArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, 10)?;
    let cert = ergodicity_certificate(&t, t.levels());
    let levels: Vec<usize> = match a.level {
        Some(n) => vec![n],
        None => (1..=t.levels()).collect(),
    };
    let mut results = json!({ "tower": tower_summary(&t), "certificate": cert });
    let summary;
    match stationary_measure(&t) {
        Ok(m) => {
            let mut per_level = Vec::new();
            for &n in &levels {
                if n == 0 || n > m.depth() {
                    return Err(CliError::Usage(format!("level {} not in 1..={}", n, m.depth())));
                }
                let mu = m.mu(n);
                per_level.push(json!({
                    "level": n,
                    "mu": mu.iter().map(exact_elem).collect::<Vec<_>>(),
                    "enclosure": mu.iter().map(|x| x.enclose(64).tagged()).collect::<Vec<_>>(),
                }));
            }
            results["mode"] = json!("exact");
            results["field"] = json!(m.field().describe());
            results["perron_root"] = json!(exact_elem(&m.perron.root));
            results["perron_root_enclosure"] = json!(m.perron.root.enclose(64).tagged());
            results["perron_minpoly"] = json!(m.perron.minpoly.iter().map(exact_int).collect::<Vec<_>>());
            results["measures"] = json!(per_level);
            summary = format!("exact stationary measure over {}", m.field().describe());
        }
        Err(e) => {
            let eps = parse_rational(&a.eps)?;
            let mut per_level = Vec::new();
            for &n in &levels {
                if n >= t.levels() {
                    continue;
                }
                let enc = measure_enclosure(&t, n, &eps)?;
                per_level.push(json!({
                    "level": n,
                    "enclosure": enc.intervals().iter().map(|i| i.tagged()).collect::<Vec<_>>(),
                    "within_eps": enc.within_eps,
                }));
            }
            results["mode"] = json!("enclosure");
            results["exact_unavailable"] = json!(e.to_string());
            results["measures"] = json!(per_level);
            summary = "interval enclosures of the measure simplex".to_string();
        }
    }
    Ok(Outcome::new(summary, results, vec![EXACT_NOTE, INTERVAL_NOTE]))
}

fn cmd_eigen(a: &EigenArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, a.n + 1)?;
    let alpha = parse_element(&a.alpha)?;
    let ctx = SpectralContext::new(&t);
    let p = BatteryParams { m: a.m, n: a.n, depth: a.depth };
    let report = eigen_verdict(&ctx, &alpha, &p)?;
    let verdict = report.verdict;
    let mut out = Outcome::new(
        format!("verdict {}", verdict),
        json!({ "tower": tower_summary(&t), "certificate": ctx.certificate(), "report": report }),
        vec![
            EXACT_NOTE,
            INTERVAL_NOTE,
            "orthogonality and rational membership are exact; series trends are evidence over finitely many levels",
            "PassesUpTo(N) is not a proof that alpha is an eigenvalue",
        ],
    );
    out.expectation_met = match a.expect {
        None => true,
        Some(ExpectEigen::Eigen) => !verdict.is_refuted(),
        Some(ExpectEigen::Refuted) => verdict.is_refuted(),
    };
    Ok(out)
}

fn cmd_rational(a: &RationalArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, 10)?;
    let r = parse_rational(&a.frac)?;
    let v = rational_member(&t, r.numer(), r.denom(), a.depth)?;
    let mut out = Outcome::new(
        format!("{} for {}", v, r),
        json!({ "tower": tower_summary(&t), "value": format!("exact:{}", r), "verdict": v }),
        vec!["membership is decided by exact divisibility of H_k, non-membership by an exact modular cycle"],
    );
    out.expectation_met = match a.expect {
        None => true,
        Some(ExpectMember::Member) => matches!(v, RationalVerdict::MemberAtLevel { .. }),
        Some(ExpectMember::NonMember) => matches!(v, RationalVerdict::CertifiedNonMember { .. }),
    };
    Ok(out)
}

fn cmd_invariants(a: &InvariantsArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, 10.max(a.level + 1))?;
    let cert = ergodicity_certificate(&t, t.levels());
    let mut results = json!({ "tower": tower_summary(&t), "certificate": cert });
    let mut summary = Vec::new();
    match stationary_measure(&t) {
        Ok(m) => {
            match image_group_with(&m, &cert, a.level) {
                Ok(g) => {
                    summary.push(format!("I_{} = {}", a.level, g.describe()));
                    results["image_group"] = serde_json::to_value(&g)?;
                }
                Err(e) => results["image_group_error"] = json!(e.to_string()),
            }
            let inf = infinitesimal_report_with(&t, &m)?;
            summary.push(format!(
                "infinitesimals {}",
                serde_json::to_value(&inf.verdict)?["verdict"].as_str().unwrap_or("")
            ));
            results["infinitesimals"] = serde_json::to_value(&inf)?;
        }
        Err(e) => {
            results["image_group_error"] = json!(e.to_string());
            results["infinitesimals_error"] = json!(e.to_string());
            summary.push("no exact measure".into());
        }
    }
    Ok(Outcome::new(summary.join("; "), results, vec![EXACT_NOTE]))
}

fn cmd_torsion(a: &TorsionArgs) -> Result<Outcome, CliError> {
    let (i, e) = match (&a.catalog, &a.field) {
        (Some(name), None) => catalog::groups(name, a.level)?,
        (None, Some(field)) => {
            let f = parse_field(field)?;
            let gens = |s: &Option<String>, what: &str| -> Result<Vec<FieldElement>, CliError> {
                let s = s.as_ref().ok_or_else(|| CliError::Usage(format!("--{} is required with --field", what)))?;
                split_top_level(s).iter().map(|g| Ok(parse_element_in(g, &f)?)).collect()
            };
            let i = SubgroupOfR::generated_by(&f, &gens(&a.igens, "igens")?)?;
            let e = SubgroupOfR::generated_by(&f, &gens(&a.egens, "egens")?)?;
            (i, e)
        }
        _ => return Err(CliError::Usage("give exactly one of --catalog or --field".into())),
    };
    let q = torsion_quotient(&i, &e)?;
    let torsion = q.torsion_orders();
    let summary = if torsion.is_empty() {
        format!("I/E = {}, torsion free", q.describe())
    } else {
        let orders: Vec<String> = torsion.iter().map(|o| o.to_string()).collect();
        format!("I/E = {}, torsion orders {}", q.describe(), orders.join(","))
    };
    let results = json!({
        "field": i.field().describe(),
        "I": i,
        "E": e,
        "invariant_factors": q.invariant_factors.iter().map(exact_int).collect::<Vec<_>>(),
        "free_rank": q.free_rank,
        "torsion_orders": torsion.iter().map(exact_int).collect::<Vec<_>>(),
        "quotient": q.describe(),
    });
    Ok(Outcome::new(summary, results, vec![EXACT_NOTE]))
}

fn cmd_audit(a: &AuditArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, a.n + 1)?;
    let ctx = SpectralContext::new(&t);
    let p = AuditParams { m: a.m, wbox: a.wbox, kmax: a.kmax, n: a.n, depth: a.depth };
    let r = torsion_audit(&ctx, &p)?;
    let summary = format!("{} candidates, {} refuted, {} flags", r.candidate_count, r.refuted_count, r.flags.len());
    Ok(Outcome::new(
        summary,
        json!({ "tower": tower_summary(&t), "audit": r }),
        vec![EXACT_NOTE, crate::spectra::AUDIT_NOTE],
    ))
}

fn cmd_suffixes(a: &SuffixArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, 2.max(a.level + 1))?;
    let s = t.suffix_vectors(a.level)?;
    let per_vertex: Vec<Value> = s
        .per_vertex
        .iter()
        .enumerate()
        .map(|(l, vs)| {
            json!({
                "vertex": l + 1,
                "suffixes": vs.iter().map(|v| v.iter().map(|x| format!("exact:{}", x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let total: usize = s.per_vertex.iter().map(|v| v.len()).sum();
    Ok(Outcome::new(
        format!("{} suffix vectors at level {}", total, a.level),
        json!({ "tower": tower_summary(&t), "level": a.level, "per_vertex": per_vertex }),
        vec![EXACT_NOTE],
    ))
}

fn cmd_diagnostic(a: &DiagnosticArgs) -> Result<Outcome, CliError> {
    let t = load_tower(&a.source, a.n)?;
    let ctx = SpectralContext::new(&t);
    let r = convergence_diagnostic(&ctx, a.m, a.n)?;
    let summary = format!("last term {}", r.series.last().map(|x| x.tagged()).unwrap_or_else(|| "none".into()));
    Ok(Outcome::new(summary, json!({ "tower": tower_summary(&t), "diagnostic": r }), vec![EXACT_NOTE, INTERVAL_NOTE]))
}

fn cmd_catalog() -> Result<Outcome, CliError> {
    let l = catalog::listing();
    Ok(Outcome::new(format!("{} entries", l.len()), json!({ "entries": l }), vec![]))
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{}{}:\n", pad, k));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{}{}: {}\n", pad, k, flat(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{}- {}\n", pad, flat(x)));
                } else {
                    out.push_str(&format!("{}-\n", pad));
                    render_text(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{}{}\n", pad, flat(other))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(flat).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn dispatch(cmd: &Command) -> Result<(&'static str, Value, &Output, Outcome), CliError> {
    Ok(match cmd {
        Command::Measures(a) => ("measures", serde_json::to_value(a)?, &a.out, cmd_measures(a)?),
        Command::Eigen(a) => ("eigen", serde_json::to_value(a)?, &a.out, cmd_eigen(a)?),
        Command::Rational(a) => ("rational", serde_json::to_value(a)?, &a.out, cmd_rational(a)?),
        Command::Invariants(a) => ("invariants", serde_json::to_value(a)?, &a.out, cmd_invariants(a)?),
        Command::Torsion(a) => ("torsion", serde_json::to_value(a)?, &a.out, cmd_torsion(a)?),
        Command::Audit(a) => ("audit", serde_json::to_value(a)?, &a.out, cmd_audit(a)?),
        Command::Suffixes(a) => ("suffixes", serde_json::to_value(a)?, &a.out, cmd_suffixes(a)?),
        Command::Diagnostic(a) => ("diagnostic", serde_json::to_value(a)?, &a.out, cmd_diagnostic(a)?),
        Command::Catalog(a) => ("catalog", serde_json::to_value(a)?, &a.out, cmd_catalog()?),
    })
}

/// Run a parsed command line and return the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let (name, config, out, outcome) = dispatch(&cli.command)?;
    let timing_ms = out.timing.then(|| start.elapsed().as_millis() as u64);
    let report = Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        command: name,
        config,
        notes: outcome.notes,
        summary: outcome.summary,
        results: outcome.results,
        timing_ms,
    };
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => {
            let mut s = format!("{} ({})\n{}\n", report.command, report.schema, report.summary);
            render_text(&report.results, 1, &mut s);
            if let Some(ms) = report.timing_ms {
                s.push_str(&format!("time: {} ms\n", ms));
            }
            s
        }
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(if outcome.expectation_met { 0 } else { 2 })
}

fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{} must be a positive integer", THREADS_ENV))),
        },
        Err(_) => Ok(None),
    }
}

/// Entry point of the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = thread_count().and_then(|threads| match threads {
        Some(n) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| run(&cli))
        }
        None => run(&cli),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e);
            1
        }
    }
}
