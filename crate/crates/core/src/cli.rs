//! `grover` command-line front end.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource
//! limit, 4 I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::Error;
use crate::grover::{self, OracleStyle, Pattern};
use crate::statevector::{Histogram, StateVector, MAX_QUBITS};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "GROVER_SEED";
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SHOTS: u64 = 1024;

/// Widest register `analytic` accepts.
pub const MAX_ANALYTIC_QUBITS: u32 = 64;
/// Most rows `analytic` will emit.
pub const MAX_ANALYTIC_ROWS: u64 = 1_000_000;
/// Exact-vs-derived tolerance enforced by `compare`.
pub const COMPARE_TOL: f64 = 1e-9;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "grover",
    version,
    about = "Build, simulate and export Grover search circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and simulate a search circuit for one pattern.
    Run(RunArgs),
    /// Tabulate the analytic success probability per rotation.
    Analytic(AnalyticArgs),
    /// Compare analytic, exact simulated and sampled probabilities.
    Compare(CompareArgs),
    /// Write the search circuit as OpenQASM 2.0.
    Export(RunArgs),
    /// Check that an oracle flips the pattern's phase.
    PhaseCheck(PhaseCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    V,
    Cnz,
    /// Empty oracle slot (phase-check only).
    None,
}

impl OracleArg {
    fn style(self) -> Result<OracleStyle, CliError> {
        match self {
            OracleArg::V => Ok(OracleStyle::VOracle),
            OracleArg::Cnz => Ok(OracleStyle::CnZ),
            OracleArg::None => Err(CliError::usage(
                "--oracle none is only valid for phase-check",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotations {
    Auto,
    Fixed(u64),
}

impl FromStr for Rotations {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Rotations::Auto);
        }
        s.parse::<u64>()
            .map(Rotations::Fixed)
            .map_err(|_| format!("expected a rotation count or \"auto\", got {s:?}"))
    }
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    s.parse::<Pattern>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_pattern)]
    pub pattern: Pattern,
    #[arg(long, default_value = "auto")]
    pub rotations: Rotations,
    #[arg(long, value_enum, default_value = "v")]
    pub oracle: OracleArg,
    /// 0 reports exact probabilities only.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_ANALYTIC_QUBITS as i64))]
    pub qubits: u32,
    #[arg(long, default_value = "auto")]
    pub rotations: Rotations,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=MAX_QUBITS as i64))]
    pub qubits: u32,
    #[arg(long, default_value = "auto")]
    pub rotations: Rotations,
    #[arg(long, value_enum, default_value = "v")]
    pub oracle: OracleArg,
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseCheckArgs {
    #[arg(long, value_parser = parse_pattern)]
    pub pattern: Pattern,
    #[arg(long, value_enum, default_value = "v")]
    pub oracle: OracleArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_RESOURCE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Param(_) | Error::Export { .. } => EXIT_USAGE,
            Error::Size(_) => EXIT_RESOURCE,
            Error::Internal(_) => EXIT_CHECK_FAILED,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `argv` (program name first) without running anything.
pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Entry point for the binary; reads the seed fallback from [`SEED_ENV`].
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok(), out, err)
}

/// As [`run`] with the seed environment value supplied by the caller.
pub fn run_with_env<I, T>(
    args: I,
    env_seed: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(&cli.command, env_seed.as_deref(), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(
    command: &Command,
    env_seed: Option<&str>,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    match command {
        Command::Run(args) => {
            let report = cmd_run(args, env_seed)?;
            emit(&args.output, &report.render(args.output.format)?, out)?;
            Ok(EXIT_OK)
        }
        Command::Analytic(args) => {
            let report = cmd_analytic(args)?;
            emit(&args.output, &report.render(args.output.format)?, out)?;
            Ok(EXIT_OK)
        }
        Command::Compare(args) => {
            let report = cmd_compare(args, env_seed)?;
            emit(&args.output, &report.render(args.output.format)?, out)?;
            Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Export(args) => {
            let text = cmd_export(args)?;
            emit(&args.output, &text, out)?;
            Ok(EXIT_OK)
        }
        Command::PhaseCheck(args) => {
            let report = cmd_phase_check(args)?;
            emit(&args.output, &report.render(args.output.format)?, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn emit(output: &OutputArgs, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let io_err = |e: std::io::Error| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn resolve_seed(flag: Option<u64>, env_seed: Option<&str>) -> Result<u64, CliError> {
    match (flag, env_seed) {
        (Some(seed), _) => Ok(seed),
        (None, Some(raw)) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}={raw:?} is not a u64"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn required_qubits(n: usize, style: OracleStyle) -> Result<(), CliError> {
    let total = n + style.ancillas(n);
    if total > MAX_QUBITS {
        return Err(CliError::resource(format!(
            "{n} search qubits with the {style} oracle need {total} qubits (limit {MAX_QUBITS})"
        )));
    }
    Ok(())
}

fn resolve_rotations(rotations: Rotations, n: usize) -> Result<usize, CliError> {
    let k = match rotations {
        Rotations::Auto => grover::optimal_rotations(n as u32),
        Rotations::Fixed(0) => return Err(CliError::usage("--rotations must be at least 1")),
        Rotations::Fixed(k) => k,
    };
    usize::try_from(k).map_err(|_| CliError::resource(format!("{k} rotations is too many")))
}

fn build_search(
    args: &RunArgs,
) -> Result<(grover::Pattern, usize, OracleStyle, crate::Circuit), CliError> {
    let style = args.oracle.style()?;
    let n = args.pattern.len();
    required_qubits(n, style)?;
    let rotations = resolve_rotations(args.rotations, n)?;
    let circuit = grover::build_grover(&args.pattern, rotations, style)?;
    Ok((args.pattern.clone(), rotations, style, circuit))
}

/// Serialized result of `run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub pattern: String,
    pub qubits: usize,
    pub rotations: usize,
    pub style: OracleStyle,
    pub seed: u64,
    pub shots: u64,
    /// Every search-register outcome.
    pub exact: BTreeMap<String, f64>,
    /// Sampled outcomes with nonzero count; empty when `shots` is 0.
    pub counts: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s =
                    String::from("pattern,qubits,rotations,style,seed,shots,state,exact,count\n");
                for (state, p) in &self.exact {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{state},{p},{}",
                        self.pattern,
                        self.qubits,
                        self.rotations,
                        self.style,
                        self.seed,
                        self.shots,
                        self.counts.get(state).copied().unwrap_or(0)
                    );
                }
                Ok(s)
            }
            Format::Text => {
                let mut s = format!(
                    "pattern {}  qubits {}  rotations {}  oracle {}  seed {}  shots {}\n",
                    self.pattern, self.qubits, self.rotations, self.style, self.seed, self.shots
                );
                let _ = writeln!(
                    s,
                    "{:<w$}  {:>10}  {:>8}",
                    "state",
                    "exact",
                    "count",
                    w = self.qubits.max(5)
                );
                for (state, p) in &self.exact {
                    let count = self.counts.get(state).copied().unwrap_or(0);
                    let _ = writeln!(
                        s,
                        "{state:<w$}  {:>9.4}%  {count:>8}",
                        p * 100.0,
                        w = self.qubits.max(5)
                    );
                }
                Ok(s)
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError {
            code: EXIT_CHECK_FAILED,
            message: e.to_string(),
        })
}

pub fn cmd_run(args: &RunArgs, env_seed: Option<&str>) -> Result<RunReport, CliError> {
    let seed = resolve_seed(args.seed, env_seed)?;
    let (pattern, rotations, style, circuit) = build_search(args)?;
    let n = pattern.len();
    let state = circuit.run(None)?;
    let probs = state.marginal_probabilities(n)?;
    let counts = if args.shots > 0 {
        Histogram::from_distribution(&probs, n, args.shots, seed)?.counts
    } else {
        BTreeMap::new()
    };
    Ok(RunReport {
        pattern: pattern.to_string(),
        qubits: n,
        rotations,
        style,
        seed,
        shots: args.shots,
        exact: crate::statevector::label_map(&probs, n),
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRow {
    pub rotation: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticReport {
    pub qubits: u32,
    pub rows: Vec<AnalyticRow>,
}

impl AnalyticReport {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from("qubits,rotation,probability\n");
                for row in &self.rows {
                    let _ = writeln!(s, "{},{},{}", self.qubits, row.rotation, row.probability);
                }
                Ok(s)
            }
            Format::Text => {
                let mut s = format!(
                    "{}-qubit search space\nrotation  probability\n",
                    self.qubits
                );
                for row in &self.rows {
                    let _ = writeln!(s, "{:>8}  {:>10.2}%", row.rotation, row.probability * 100.0);
                }
                Ok(s)
            }
        }
    }
}

pub fn cmd_analytic(args: &AnalyticArgs) -> Result<AnalyticReport, CliError> {
    let max_k = match args.rotations {
        Rotations::Auto => grover::optimal_rotations(args.qubits.min(40)),
        Rotations::Fixed(0) => return Err(CliError::usage("--rotations must be at least 1")),
        Rotations::Fixed(k) => k,
    };
    if max_k > MAX_ANALYTIC_ROWS {
        return Err(CliError::resource(format!(
            "{max_k} rows exceeds the limit of {MAX_ANALYTIC_ROWS}"
        )));
    }
    let rows = analytic::probability_table(args.qubits, max_k)
        .into_iter()
        .map(|(rotation, probability)| AnalyticRow {
            rotation,
            probability,
        })
        .collect();
    Ok(AnalyticReport {
        qubits: args.qubits,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub rotation: u64,
    pub derived: f64,
    pub exact: f64,
    pub sampled: Option<f64>,
    pub exact_deviation: f64,
    pub sampled_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub qubits: u32,
    pub style: OracleStyle,
    pub seed: u64,
    pub shots: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from(
                    "qubits,style,seed,shots,rotation,derived,exact,sampled,exact_deviation,sampled_deviation\n",
                );
                for r in &self.rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{}",
                        self.qubits,
                        self.style,
                        self.seed,
                        self.shots,
                        r.rotation,
                        r.derived,
                        r.exact,
                        opt(r.sampled),
                        r.exact_deviation,
                        opt(r.sampled_deviation)
                    );
                }
                Ok(s)
            }
            Format::Text => {
                let mut s = format!(
                    "{}-qubit search, oracle {}, {} shots, seed {}\nrotation     derived       exact     sampled\n",
                    self.qubits, self.style, self.shots, self.seed
                );
                for r in &self.rows {
                    let sampled = r
                        .sampled
                        .map(|p| format!("{:>10.3}%", p * 100.0))
                        .unwrap_or_else(|| format!("{:>11}", "-"));
                    let _ = writeln!(
                        s,
                        "{:>8}  {:>9.4}%  {:>9.4}%  {sampled}",
                        r.rotation,
                        r.derived * 100.0,
                        r.exact * 100.0
                    );
                }
                let _ = writeln!(s, "{}", if self.passed { "PASS" } else { "FAIL" });
                Ok(s)
            }
        }
    }
}

pub fn cmd_compare(args: &CompareArgs, env_seed: Option<&str>) -> Result<CompareReport, CliError> {
    let seed = resolve_seed(args.seed, env_seed)?;
    let style = args.oracle.style()?;
    let n = args.qubits as usize;
    required_qubits(n, style)?;
    let max_k = resolve_rotations(args.rotations, n)?;
    let pattern = Pattern::all_ones(n)?;
    let rotation = grover::build_rotation(&pattern, style)?;
    grover::check_op_budget(rotation.len(), max_k, n)?;
    let marked = pattern
        .index()
        .ok_or_else(|| CliError::resource("pattern too wide"))?;

    let mut state: StateVector = grover::build_init(n, rotation.ancilla_qubits())?.run(None)?;
    let mut rows = Vec::with_capacity(max_k);
    for (k, derived) in analytic::probability_table(args.qubits, max_k as u64) {
        state = rotation.run(Some(state))?;
        let probs = state.marginal_probabilities(n)?;
        let exact = probs[marked];
        let sampled = if args.shots > 0 {
            let h = Histogram::from_distribution(&probs, n, args.shots, seed)?;
            Some(h.count(&pattern.to_string()) as f64 / args.shots as f64)
        } else {
            None
        };
        rows.push(CompareRow {
            rotation: k,
            derived,
            exact,
            sampled,
            exact_deviation: (exact - derived).abs(),
            sampled_deviation: sampled.map(|p| (p - derived).abs()),
        });
    }
    let passed = rows.iter().all(|r| r.exact_deviation <= COMPARE_TOL);
    Ok(CompareReport {
        qubits: args.qubits,
        style,
        seed,
        shots: args.shots,
        tolerance: COMPARE_TOL,
        passed,
        rows,
    })
}

pub fn cmd_export(args: &RunArgs) -> Result<String, CliError> {
    let (_, _, _, circuit) = build_search(args)?;
    Ok(circuit.export_qasm()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCheckReport {
    pub pattern: String,
    /// `v`, `cnz` or `none`.
    pub oracle: String,
    pub distribution: BTreeMap<String, f64>,
    pub modal: String,
    pub modal_probability: f64,
    pub runner_up_probability: f64,
    pub detected: bool,
    pub verdict: String,
}

pub const VERDICT_DETECTED: &str = "phase flip detected";
pub const VERDICT_NOT_DETECTED: &str = "no phase flip detected";

impl PhaseCheckReport {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from("pattern,oracle,state,probability,verdict\n");
                for (state, p) in &self.distribution {
                    let _ = writeln!(
                        s,
                        "{},{},{state},{p},{}",
                        self.pattern, self.oracle, self.verdict
                    );
                }
                Ok(s)
            }
            Format::Text => {
                let mut s = format!("pattern {}  oracle {}\n", self.pattern, self.oracle);
                for (state, p) in &self.distribution {
                    let _ = writeln!(s, "{state}  {:>9.4}%", p * 100.0);
                }
                let _ = writeln!(s, "{}", self.verdict);
                Ok(s)
            }
        }
    }
}

pub fn cmd_phase_check(args: &PhaseCheckArgs) -> Result<PhaseCheckReport, CliError> {
    let pattern = &args.pattern;
    let n = pattern.len();
    let (circuit, oracle_name) = match args.oracle {
        OracleArg::None => {
            required_qubits(n, OracleStyle::CnZ)?;
            (
                grover::build_phase_check_with(pattern, None)?,
                "none".to_string(),
            )
        }
        other => {
            let style = other.style()?;
            required_qubits(n, style)?;
            (
                grover::build_phase_check(pattern, style)?,
                style.to_string(),
            )
        }
    };
    let probs = circuit.run(None)?.marginal_probabilities(n)?;
    let verdict = grover::phase_verdict(&probs, pattern);
    Ok(PhaseCheckReport {
        pattern: pattern.to_string(),
        oracle: oracle_name,
        distribution: crate::statevector::label_map(&probs, n),
        modal: verdict.modal,
        modal_probability: verdict.modal_probability,
        runner_up_probability: verdict.runner_up_probability,
        detected: verdict.detected,
        verdict: if verdict.detected {
            VERDICT_DETECTED
        } else {
            VERDICT_NOT_DETECTED
        }
        .to_string(),
    })
}
