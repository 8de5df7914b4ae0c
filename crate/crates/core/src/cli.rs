//! Command-line front end.
//!
//! Each subcommand maps onto one analysis and renders as markdown, JSON or
//! CSV. Requests can also be read from a JSON batch file: an array of objects
//! with a `subcommand` key, the subcommand's flags as keys, and an optional
//! `format`, e.g. `{"subcommand": "semigroup", "gens": [3, 7], "format": "json"}`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{domain, Error, Result};
use crate::extremity::{self, GammaComponent, JumpMeasure, LaplaceSpec};
use crate::format::{fmt_float, join, to_canonical_json};
use crate::levy_interval::{
    self, compare_discretization, interval_gaps, parse_rational, semigroup_closure, Closure, IntervalGaps, IntervalSet,
};
use crate::reference::reference_cases;
use crate::semigroup::{jump_count_values, GapReport, GeneratorSet, NumericalSemigroup};
use crate::series::{
    self, compound_poisson_pmf, did_test, nth_root, pmf_csv, pmf_table, support_indices, CompoundPoissonSpec, JumpPmf,
    TruncatedSeries,
};
use crate::simulator::{self, JumpLaw, SimulationConfig};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Markdown,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "support-gaps",
    version,
    about = "Gaps in the supports of infinitely divisible laws"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Markdown)]
    pub format: OutputFormat,

    /// JSON batch file of requests, executed in order.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Semigroup generated by the jump sizes: span, gaps, Frobenius number, conductor.
    Semigroup(SemigroupArgs),
    /// Values reachable with exactly n jumps, for n = 0, 1, ...
    Table(TableArgs),
    /// Compound Poisson PMF by Panjer recursion.
    Pmf(PmfArgs),
    /// n-th convolution root of a compound Poisson PMF.
    Root(RootArgs),
    /// Discrete infinite divisibility test of a PMF prefix.
    Did(DidArgs),
    /// Gaps of the closure of a jump interval [c, c + delta].
    Intervals(IntervalArgs),
    /// Left extremity from the Laplace transform.
    Extremity(ExtremityArgs),
    /// Monte Carlo check of the predicted support.
    Simulate(SimulateArgs),
    /// Run the built-in worked cases and report PASS/FAIL.
    PaperExamples,
}

/// `size:probability` pair accepted by `--q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Weight {
    pub size: f64,
    pub probability: f64,
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (y, q) = s
            .split_once(':')
            .ok_or_else(|| domain(format!("`{s}` is not of the form size:probability")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| domain(format!("`{t}` is not a number")))
        };
        Ok(Self {
            size: parse(y)?,
            probability: parse(q)?,
        })
    }
}

impl TryFrom<String> for Weight {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Weight> for String {
    fn from(w: Weight) -> Self {
        format!("{}:{}", w.size, w.probability)
    }
}

fn integer_size(size: f64) -> Result<u64> {
    if size >= 1.0 && size.fract() == 0.0 && size < 9.0e15 {
        Ok(size as u64)
    } else {
        Err(domain(format!("jump size {size} must be a positive integer")))
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SemigroupArgs {
    /// Jump sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub gens: Vec<u64>,
    /// Integers listed past the conductor; defaults to the smallest reduced generator.
    #[arg(long)]
    #[serde(default)]
    pub slack: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub gens: Vec<u64>,
    /// Number of rows, n = 0..rows-1.
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_rows")]
    pub rows: u32,
}

fn default_rows() -> u32 {
    6
}

/// Compound Poisson law: rate, time and either `--q` weights or uniform `--gens`.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LawArgs {
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub t: f64,
    /// Jump law as size:probability pairs.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub q: Option<Vec<Weight>>,
    /// Jump sizes with equal weights (used when --q is absent).
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub gens: Option<Vec<u64>>,
}

fn one() -> f64 {
    1.0
}

impl LawArgs {
    fn jumps(&self) -> Result<JumpPmf> {
        match (&self.q, &self.gens) {
            (Some(q), _) => JumpPmf::new(
                q.iter()
                    .map(|w| Ok((integer_size(w.size)?, w.probability)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            (None, Some(g)) => Ok(JumpPmf::uniform(&GeneratorSet::new(g.iter().copied())?)),
            (None, None) => Err(domain("a jump law is required: pass --q or --gens")),
        }
    }

    fn spec(&self) -> Result<CompoundPoissonSpec> {
        CompoundPoissonSpec::new(self.lambda, self.jumps()?, self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PmfArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub law: LawArgs,
    /// Truncation order.
    #[arg(long = "K", default_value_t = 30)]
    #[serde(rename = "K", default = "default_order")]
    pub order: usize,
}

fn default_order() -> usize {
    30
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RootArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub law: LawArgs,
    #[arg(long = "K", default_value_t = 30)]
    #[serde(rename = "K", default = "default_order")]
    pub order: usize,
    #[arg(long, default_value_t = 2)]
    #[serde(default = "default_root")]
    pub n: u32,
}

fn default_root() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DidArgs {
    /// Explicit PMF prefix p_0,p_1,...
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub pmf: Option<Vec<f64>>,
    /// Geometric law p (1-p)^j placed on multiples of --step.
    #[arg(long)]
    #[serde(default)]
    pub geometric: Option<f64>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_step")]
    pub step: usize,
    /// Compound Poisson law (used when neither --pmf nor --geometric is given).
    #[arg(long)]
    #[serde(default)]
    pub lambda: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub q: Option<Vec<Weight>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub gens: Option<Vec<u64>>,
    #[arg(long = "K", default_value_t = 30)]
    #[serde(rename = "K", default = "default_order")]
    pub order: usize,
    /// Negativity tolerance relative to the recovered rate.
    #[arg(long, default_value_t = series::DID_TOLERANCE)]
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_step() -> usize {
    1
}

fn default_tol() -> f64 {
    series::DID_TOLERANCE
}

impl DidArgs {
    fn pmf(&self) -> Result<TruncatedSeries> {
        if let Some(p) = &self.pmf {
            return TruncatedSeries::new(p.clone());
        }
        if let Some(p) = self.geometric {
            if !(p > 0.0 && p <= 1.0) {
                return Err(domain(format!("geometric parameter must lie in (0, 1], got {p}")));
            }
            if self.step == 0 {
                return Err(domain("step must be positive"));
            }
            let coefficients = (0..=self.order)
                .map(|n| {
                    if n % self.step == 0 {
                        p * (1.0 - p).powi((n / self.step) as i32)
                    } else {
                        0.0
                    }
                })
                .collect();
            return TruncatedSeries::new(coefficients);
        }
        let law = LawArgs {
            lambda: self.lambda.unwrap_or(1.0),
            t: 1.0,
            q: self.q.clone(),
            gens: self.gens.clone(),
        };
        Ok(compound_poisson_pmf(&law.spec()?, self.order))
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct IntervalArgs {
    /// Left end of the jump interval (decimal or fraction).
    #[arg(long)]
    pub c: String,
    /// Width of the jump interval.
    #[arg(long)]
    pub delta: String,
    /// Also compare with the integer discretization on the 1/D lattice.
    #[arg(long = "D")]
    #[serde(rename = "D", default)]
    pub denominator: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExtremityArgs {
    /// Drift (left extremity).
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub ell: f64,
    /// Total mass of the finite jump measure.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub lambda: f64,
    /// Discrete jumps as size:probability pairs (real sizes allowed).
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub q: Option<Vec<Weight>>,
    /// Uniform jump interval [c, c + delta] (instead of --q).
    #[arg(long)]
    #[serde(default)]
    pub c: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub gamma_shape: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub gamma_rate: f64,
    /// Convolution root order.
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_n")]
    pub n: u32,
}

fn default_n() -> u32 {
    1
}

impl ExtremityArgs {
    fn spec(&self) -> Result<LaplaceSpec> {
        let jumps = match (&self.q, self.c) {
            (Some(q), _) => JumpMeasure::Discrete(q.iter().map(|w| (w.size, w.probability)).collect()),
            (None, Some(c)) => JumpMeasure::Interval {
                c,
                delta: self.delta.unwrap_or(0.0),
            },
            (None, None) if self.lambda == 0.0 => JumpMeasure::Discrete(vec![(1.0, 1.0)]),
            (None, None) => return Err(domain("a positive --lambda needs --q or --c/--delta")),
        };
        let gamma = self.gamma_shape.map(|shape| GammaComponent {
            shape,
            rate: self.gamma_rate,
        });
        LaplaceSpec::new(self.ell, self.lambda, jumps, gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub lambda: f64,
    /// Times at which X(t) is sampled.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    #[serde(default = "default_times")]
    pub t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub q: Option<Vec<Weight>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub gens: Option<Vec<u64>>,
    /// Uniform jump interval [c, c + delta] (instead of --q/--gens).
    #[arg(long)]
    #[serde(default)]
    pub c: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Coverage horizon; defaults to five lattice steps past the conductor,
    /// or one jump past the tail start.
    #[arg(long)]
    #[serde(default)]
    pub horizon: Option<f64>,
    /// Write every realization to this CSV file (t,value).
    #[arg(long)]
    #[serde(default)]
    pub spill: Option<PathBuf>,
}

fn default_times() -> Vec<f64> {
    vec![1.0]
}

fn default_samples() -> usize {
    100_000
}

fn default_seed() -> u64 {
    1
}

/// Rendered output of one request.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

/// Runs one request.
pub fn run(command: &Command, format: OutputFormat) -> Result<Outcome> {
    let output = match command {
        Command::Semigroup(a) => semigroup(a, format)?,
        Command::Table(a) => table(a, format)?,
        Command::Pmf(a) => pmf(a, format)?,
        Command::Root(a) => root(a, format)?,
        Command::Did(a) => did(a, format)?,
        Command::Intervals(a) => intervals(a, format)?,
        Command::Extremity(a) => extremity(a, format)?,
        Command::Simulate(a) => simulate(a, format)?,
        Command::PaperExamples => return Ok(self_check(format)),
    };
    Ok(Outcome { exit_code: 0, output })
}

/// Parses a batch file's contents into requests.
pub fn parse_batch(text: &str) -> Result<Vec<(Command, OutputFormat)>> {
    let value: Value = serde_json::from_str(text).map_err(|e| domain(format!("batch file is not JSON: {e}")))?;
    let Value::Array(items) = value else {
        return Err(domain("batch file must hold a JSON array of requests"));
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, mut item)| {
            let Some(object) = item.as_object_mut() else {
                return Err(domain(format!("request {i} is not an object")));
            };
            let format = match object.remove("format") {
                None => OutputFormat::default(),
                Some(f) => serde_json::from_value(f).map_err(|e| domain(format!("request {i}: {e}")))?,
            };
            let given: BTreeSet<String> = object.keys().cloned().collect();
            let command: Command = serde_json::from_value(item).map_err(|e| domain(format!("request {i}: {e}")))?;
            let known: BTreeSet<String> = match serde_json::to_value(&command) {
                Ok(Value::Object(map)) => map.keys().cloned().collect(),
                _ => BTreeSet::new(),
            };
            if let Some(unknown) = given.difference(&known).next() {
                return Err(domain(format!("request {i}: unknown field `{unknown}`")));
            }
            Ok((command, format))
        })
        .collect()
}

/// Entry point shared by the binary: parses `args`, runs, prints.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let requests = match (&cli.config, cli.command) {
        (Some(path), None) => match std::fs::read_to_string(path)
            .map_err(|e| domain(format!("cannot read {}: {e}", path.display())))
            .and_then(|text| parse_batch(&text))
        {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        (None, Some(command)) => vec![(command, cli.format)],
        (Some(_), Some(_)) => {
            eprintln!("error: pass either a subcommand or --config, not both");
            return 2;
        }
        (None, None) => {
            eprintln!("error: a subcommand or --config is required (see --help)");
            return 2;
        }
    };
    let mut exit = 0;
    for (command, format) in requests {
        match run(&command, format) {
            Ok(outcome) => {
                print!("{}", outcome.output);
                exit = exit.max(outcome.exit_code);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    exit
}

fn gens_of(values: &[u64]) -> Result<GeneratorSet> {
    GeneratorSet::new(values.iter().copied())
}

fn braces(items: impl IntoIterator<Item = impl ToString>) -> String {
    format!("{{{}}}", join(items))
}

fn semigroup(a: &SemigroupArgs, format: OutputFormat) -> Result<String> {
    let gens = gens_of(&a.gens)?;
    let (_, sg) = NumericalSemigroup::generated_by(&gens);
    let report = GapReport::new(&gens, a.slack.unwrap_or(sg.generators().min()));
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&report) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("value,member\n");
            for x in 0..=report.horizon() {
                let _ = writeln!(out, "{},{}", x, report.gaps.binary_search(&x).is_err());
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!("# Semigroup <{}>\n\n", join(&report.generators));
            let frobenius = report.frobenius.map_or("none".to_string(), |f| f.to_string());
            let rows = [
                ("span", report.span.to_string()),
                ("reduced generators", braces(&report.reduced_generators)),
                ("gaps", braces(&report.gaps)),
                (
                    "gap runs (start, length)",
                    join(report.gap_runs.iter().map(|(s, l)| format!("({s}, {l})"))),
                ),
                ("frobenius", frobenius),
                ("conductor", report.conductor.to_string()),
                ("gap free", report.gap_free.to_string()),
                ("support prefix", format!("{{{}, ...}}", join(&report.support_prefix))),
            ];
            out.push_str("| quantity | value |\n|---|---|\n");
            for (k, v) in rows {
                let _ = writeln!(out, "| {k} | {v} |");
            }
            if report.span > 1 {
                let _ = writeln!(out, "\nValues are in units of the span {}.", report.span);
            }
            out
        }
    })
}

#[derive(Serialize)]
struct TableRow {
    n: u32,
    values: Vec<u64>,
}

fn table(a: &TableArgs, format: OutputFormat) -> Result<String> {
    let gens = gens_of(&a.gens)?;
    let rows: Vec<TableRow> = (0..a.rows)
        .map(|n| TableRow {
            n,
            values: jump_count_values(&gens, n).into_iter().collect(),
        })
        .collect();
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&rows) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("n,value\n");
            for row in &rows {
                for v in &row.values {
                    let _ = writeln!(out, "{},{}", row.n, v);
                }
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!(
                "| N(t) = n | X(t) with jumps {} |\n|---|---|\n",
                braces(gens.as_slice())
            );
            for row in &rows {
                let _ = writeln!(out, "| {} | {} |", row.n, join(&row.values));
            }
            out
        }
    })
}

fn pmf_output(rows: &[series::PmfRow], title: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_canonical_json(&rows) + "\n",
        OutputFormat::Csv => pmf_csv(rows, fmt_float),
        OutputFormat::Markdown => {
            let mut out = format!("# {title}\n\n| n | p_n | member |\n|---|---|---|\n");
            for r in rows {
                let _ = writeln!(out, "| {} | {} | {} |", r.n, fmt_float(r.p_n), r.member_of_semigroup);
            }
            out
        }
    }
}

fn pmf(a: &PmfArgs, format: OutputFormat) -> Result<String> {
    let spec = a.law.spec()?;
    let p = compound_poisson_pmf(&spec, a.order);
    let rows = pmf_table(&p, &spec.jumps.support());
    let title = format!("Compound Poisson PMF, lambda t = {}", fmt_float(spec.intensity()));
    Ok(pmf_output(&rows, &title, format))
}

#[derive(Serialize)]
struct RootReport {
    n: u32,
    pmf: Vec<series::PmfRow>,
    support_equal: bool,
    max_reconvolution_error: f64,
}

fn root(a: &RootArgs, format: OutputFormat) -> Result<String> {
    let spec = a.law.spec()?;
    let p = compound_poisson_pmf(&spec, a.order);
    let r = nth_root(&p, a.n)?;
    let mut back = r.clone();
    for _ in 1..a.n {
        back = back.mul(&r);
    }
    let error = back
        .coefficients()
        .iter()
        .zip(p.coefficients())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let report = RootReport {
        n: a.n,
        pmf: pmf_table(&r, &spec.jumps.support()),
        support_equal: support_indices(&r, series::STRUCTURAL_ZERO) == support_indices(&p, series::STRUCTURAL_ZERO),
        max_reconvolution_error: error,
    };
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&report) + "\n",
        OutputFormat::Csv => pmf_csv(&report.pmf, fmt_float),
        OutputFormat::Markdown => {
            let mut out = pmf_output(&report.pmf, &format!("Convolution root of order {}", a.n), format);
            let _ = writeln!(
                out,
                "\nsupport equal to the original: {}; max reconvolution error: {}",
                report.support_equal,
                fmt_float(report.max_reconvolution_error)
            );
            out
        }
    })
}

fn did(a: &DidArgs, format: OutputFormat) -> Result<String> {
    let pmf = a.pmf()?;
    let verdict = did_test(&pmf, a.tol);
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&verdict) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("k,q_k\n");
            for (k, q) in verdict.recovered_jump_pmf.iter().flatten() {
                let _ = writeln!(out, "{},{}", k, fmt_float(*q));
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!("DID: {}\n", verdict.is_did);
            if let Some(rate) = verdict.recovered_rate {
                let _ = writeln!(out, "recovered rate: {}", fmt_float(rate));
                let jumps = verdict.recovered_jump_pmf.as_ref().expect("present with rate");
                let _ = writeln!(
                    out,
                    "recovered jump law: {}",
                    join(jumps.iter().map(|(k, q)| format!("{k}:{}", fmt_float(*q))))
                );
            }
            match verdict.violation {
                Some(series::DidFailure::MassAtZero { p0 }) => {
                    let _ = writeln!(out, "violation: p_0 = {} (left extremity positive)", fmt_float(p0));
                }
                Some(series::DidFailure::NegativeLogCoefficient { index, value }) => {
                    let _ = writeln!(out, "violation: log-PGF coefficient {} = {}", index, fmt_float(value));
                }
                None => {}
            }
            out
        }
    })
}

#[derive(Serialize)]
struct IntervalOutput {
    #[serde(flatten)]
    report: levy_interval::IntervalGapReport,
    closure_agrees: bool,
    discretization: Option<levy_interval::DiscretizationCheck>,
}

fn intervals(a: &IntervalArgs, format: OutputFormat) -> Result<String> {
    let (c_exact, delta_exact) = (parse_rational(&a.c)?, parse_rational(&a.delta)?);
    let c = *c_exact.numer() as f64 / *c_exact.denom() as f64;
    let delta = *delta_exact.numer() as f64 / *delta_exact.denom() as f64;
    let mut warning = String::new();
    let report = match interval_gaps(c, delta)? {
        IntervalGaps::Lattice { spacing } => {
            return Ok(match format {
                OutputFormat::Json => {
                    to_canonical_json(&serde_json::json!({ "lattice_spacing": spacing, "count": null })) + "\n"
                }
                _ => format!(
                    "delta = 0: point jumps at {} leave infinitely many gaps of length {} (lattice case)\n",
                    fmt_float(c),
                    fmt_float(spacing)
                ),
            });
        }
        IntervalGaps::Finite(report) => report,
    };
    if delta >= c {
        warning = format!("warning: delta >= c, so there are no gaps past (0, {})\n", fmt_float(c));
    }
    let closure = semigroup_closure(&IntervalSet::interval(c, c + delta)?)?;
    let closure_agrees = match &closure {
        Closure::Continuum(set) => {
            let gaps = set.gaps();
            set.tail_start().is_some_and(|t| (t - report.tail_start).abs() <= 1e-9)
                && gaps.len() == report.count + 1
                && gaps[1..]
                    .iter()
                    .zip(&report.gaps)
                    .all(|(&(lo, hi), g)| (lo - g.lo).abs() <= 1e-9 && (hi - g.hi).abs() <= 1e-9)
        }
        Closure::Lattice { .. } => false,
    };
    let discretization = a
        .denominator
        .map(|d| compare_discretization(c_exact, delta_exact, d))
        .transpose()?;
    let output = IntervalOutput {
        report,
        closure_agrees,
        discretization,
    };
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&output) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("k,lo,hi,length\n");
            let g = &output.report.initial_gap;
            let _ = writeln!(out, "0,{},{},{}", fmt_float(g.lo), fmt_float(g.hi), fmt_float(g.length));
            for (k, g) in output.report.gaps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    k + 1,
                    fmt_float(g.lo),
                    fmt_float(g.hi),
                    fmt_float(g.length)
                );
            }
            out
        }
        OutputFormat::Markdown => {
            let r = &output.report;
            let mut out = warning;
            let _ = writeln!(out, "# Jumps on [{}, {}]\n", fmt_float(c), fmt_float(c + delta));
            let _ = writeln!(out, "initial gap: (0, {})", fmt_float(r.initial_gap.hi));
            let _ = writeln!(out, "gaps past the first jump: {}\n", r.count);
            out.push_str("| k | gap | length |\n|---|---|---|\n");
            for (k, g) in r.gaps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "| {} | ({}, {}) | {} |",
                    k + 1,
                    fmt_float(g.lo),
                    fmt_float(g.hi),
                    fmt_float(g.length)
                );
            }
            let _ = writeln!(out, "\ntail: [{}, inf)", fmt_float(r.tail_start));
            let _ = writeln!(out, "Minkowski closure agrees: {}", output.closure_agrees);
            if let Some(d) = &output.discretization {
                let _ = writeln!(
                    out,
                    "discretization D = {}: contained = {}, symmetric difference = {}",
                    d.denominator,
                    d.contained,
                    fmt_float(d.symmetric_difference)
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct ExtremityOutput {
    drift: f64,
    estimate: f64,
    raw: f64,
    root_n: u32,
    root_estimate: f64,
    mass_at_zero: Option<f64>,
    tail_identity: Vec<(f64, extremity::TailIdentity)>,
}

fn extremity(a: &ExtremityArgs, format: OutputFormat) -> Result<String> {
    let spec = a.spec()?;
    let schedule = extremity::default_schedule();
    let estimate = extremity::left_extremity_estimate(&spec, &schedule)?;
    if format == OutputFormat::Csv {
        return Ok(estimate.to_csv(fmt_float));
    }
    let root = extremity::convolution_root(&spec, a.n)?;
    let root_estimate = extremity::left_extremity_estimate(&root, &schedule)?;
    let mass_at_zero = if spec.drift == 0.0 {
        extremity::mass_at_zero(&spec, a.n).ok()
    } else {
        None
    };
    let tail_identity = if spec.gamma.is_none() && spec.rate > 0.0 {
        [0.25, 1.0, 4.0, 16.0]
            .into_iter()
            .map(|theta| extremity::tail_integral_identity(&spec, theta).map(|t| (theta, t)))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let output = ExtremityOutput {
        drift: spec.drift,
        estimate: estimate.estimate,
        raw: estimate.raw,
        root_n: a.n,
        root_estimate: root_estimate.estimate,
        mass_at_zero,
        tail_identity,
    };
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&output) + "\n",
        _ => {
            let mut out = String::from("| quantity | value |\n|---|---|\n");
            let _ = writeln!(out, "| drift | {} |", fmt_float(output.drift));
            let _ = writeln!(out, "| g(theta_max) | {} |", fmt_float(output.raw));
            let _ = writeln!(out, "| extrapolated left extremity | {} |", fmt_float(output.estimate));
            let _ = writeln!(
                out,
                "| left extremity of the order-{} root | {} |",
                a.n,
                fmt_float(output.root_estimate)
            );
            if let Some(m) = output.mass_at_zero {
                let _ = writeln!(out, "| F_{}(0) | {} |", a.n, fmt_float(m));
            }
            for (theta, t) in &output.tail_identity {
                let _ = writeln!(
                    out,
                    "| tail identity error at theta = {} | {} |",
                    fmt_float(*theta),
                    fmt_float(t.abs_diff)
                );
            }
            out
        }
    })
}

fn simulate(a: &SimulateArgs, format: OutputFormat) -> Result<String> {
    let (law, predicted) = match (a.c, &a.q, &a.gens) {
        (Some(c), None, None) => {
            let delta = a.delta.unwrap_or(0.0);
            let closure = semigroup_closure(&IntervalSet::interval(c, c + delta)?)?;
            (
                JumpLaw::Interval {
                    rate: a.lambda,
                    c,
                    delta,
                },
                closure,
            )
        }
        (None, _, _) => {
            let law = LawArgs {
                lambda: a.lambda,
                t: 1.0,
                q: a.q.clone(),
                gens: a.gens.clone(),
            };
            let jumps = law.jumps()?;
            let closure = Closure::lattice(&jumps.support());
            (JumpLaw::Discrete { rate: a.lambda, jumps }, closure)
        }
        _ => return Err(domain("pass either --c/--delta or --q/--gens, not both")),
    };
    let horizon = a.horizon.unwrap_or_else(|| match &predicted {
        Closure::Lattice { span, semigroup, .. } => (*span * (semigroup.conductor() + 5)) as f64,
        Closure::Continuum(set) => set.tail_start().unwrap_or(0.0) + set.intervals().get(1).map_or(1.0, |iv| iv.lo),
    });
    let config = SimulationConfig::new(law, a.t.clone(), a.samples, a.seed)?;
    let realizations = simulator::sample(&config);
    if let Some(path) = &a.spill {
        std::fs::write(path, realizations.to_csv(fmt_float))
            .map_err(|e| domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = simulator::empirical_support_check(&realizations, &predicted, horizon)?;
    Ok(match format {
        OutputFormat::Json => to_canonical_json(&report) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("t,samples,predicted,observed,fraction\n");
            for c in &report.coverage {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_float(c.time),
                    c.samples,
                    c.predicted,
                    c.observed,
                    fmt_float(c.fraction)
                );
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = format!(
                "containment: {} (violations: {})\nhorizon: {}\n\n| t | samples | predicted | observed | fraction |\n|---|---|---|---|---|\n",
                report.containment,
                report.violations.len(),
                fmt_float(report.horizon)
            );
            for c in &report.coverage {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} |",
                    fmt_float(c.time),
                    c.samples,
                    c.predicted,
                    c.observed,
                    fmt_float(c.fraction)
                );
            }
            out
        }
    })
}

fn self_check(format: OutputFormat) -> Outcome {
    let cases = reference_cases();
    let all = cases.iter().all(|c| c.passed);
    let output = match format {
        OutputFormat::Json => to_canonical_json(&cases) + "\n",
        OutputFormat::Csv => {
            let mut out = String::from("name,passed,detail\n");
            for c in &cases {
                let _ = writeln!(out, "\"{}\",{},\"{}\"", c.name, c.passed, c.detail);
            }
            out
        }
        OutputFormat::Markdown => {
            let mut out = String::new();
            for c in &cases {
                let _ = writeln!(
                    out,
                    "{} {} ({})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let passed = cases.iter().filter(|c| c.passed).count();
            let _ = writeln!(out, "\n{passed}/{} passed", cases.len());
            out
        }
    };
    Outcome {
        exit_code: if all { 0 } else { 1 },
        output,
    }
}
