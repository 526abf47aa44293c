//! Command-line frontend.
//!
//! [`run`] does all the work and returns the exit code together with the
//! text destined for stdout and stderr, so the binary stays a one-liner and
//! tests can drive the CLI in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::bounds::{prop1_report, prop2_report, prop3_report, BoundReport};
use crate::entropy::{renyi_from_tsallis, tsallis, EntropyOrder, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::qubit::{BlochVector, QubitObservable, QubitState};
use crate::qudit::{self, ComplexMatrix, QuditObservable, QuditState};
use crate::scenario::{scenario1, scenario1_quantum_sides, scenario2, SuccessiveMeasurement};
use crate::verify::fuzz::{ALPHA_GRID, POSITIVE_STATE_FLOOR};
use crate::verify::sampling::{haar_observable, positive_ginibre_state, rng_for};
use crate::verify::{
    fuzz_monotonicity, fuzz_prop3, fuzz_scenario1_sandwich, read_replay, replay_margin, sweep, write_replay, CheckKind,
    MatrixRecord, Prop3FuzzConfig, SweepConfig, SweepKind, Violation, DEFAULT_R3_POINTS, VIOLATION_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Significant digits of every printed number.
pub const PRINT_DIGITS: usize = 12;
/// Largest |Σp - 1| (and per-entry negativity) accepted from the command line.
pub const INPUT_NORMALIZATION_TOL: f64 = 1e-9;
/// Axes further than this from unit length are normalized with a warning.
pub const AXIS_WARN_TOL: f64 = 1e-9;
pub const DEFAULT_REPLAY_PATH: &str = "seqentropy-replay.json";
const SWEEP_HEADER: &str = "alpha,mu,r_norm,min,argmin_r3,max,argmax_r3,lower,upper,min_residual,max_residual";

#[derive(Debug, Parser)]
#[command(name = "seqentropy", version, about = "Tsallis entropies of successive projective measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tsallis entropy and its Rényi conversion for one distribution.
    Entropy(EntropyArgs),
    /// Evaluate a successive-measurement scenario and its bounds.
    Scenario(ScenarioArgs),
    /// Fixed-purity r₃ sweep of the qubit bounds, one CSV row per (α, μ).
    Sweep(SweepArgs),
    /// Seeded random-instance verification.
    Fuzz(FuzzArgs),
    /// Re-evaluate the violations stored in a replay file.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Comma-separated probabilities.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub p: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long, value_enum, default_value = "1")]
    pub kind: Kind,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Bloch vector of the qubit state.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, default_value = "0,0,0")]
    pub r: Vec<f64>,
    /// Axis of the first qubit observable.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, default_value = "0,0,1")]
    pub p: Vec<f64>,
    /// Axis of the second qubit observable.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, default_value = "1,0,0")]
    pub q: Vec<f64>,
    /// Use the Fourier mutually unbiased pair in dimension d.
    #[arg(long, conflicts_with_all = ["random_basis", "matrix"])]
    pub mub: bool,
    /// Use two Haar-random bases in dimension d.
    #[arg(long, conflicts_with = "matrix")]
    pub random_basis: bool,
    /// Draw a random strictly positive state in dimension d.
    #[arg(long)]
    pub random_state: bool,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON file with optional `state`, `first_basis`, `second_basis` matrices,
    /// each given as {"re": [[..]], "im": [[..]]}; basis vectors are columns.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "1")]
    pub kind: Kind,
    #[arg(long)]
    pub r_norm: f64,
    #[arg(long = "alphas", alias = "alpha", value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long = "mus", alias = "mu", value_delimiter = ',', allow_hyphen_values = true)]
    pub mus: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_R3_POINTS)]
    pub points: usize,
    /// Largest accepted |extremum - bound|.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = DEFAULT_REPLAY_PATH)]
    pub replay: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzCheck {
    /// Entropy never decreases under a projective measurement.
    Monotonicity,
    /// Qubit scenario-1 total between its quantum-entropy bounds.
    Sandwich,
    /// d-dimensional certainty bounds on random strictly positive states.
    Certainty,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, value_enum, default_value = "monotonicity")]
    pub check: FuzzCheck,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long = "alphas", alias = "alpha", value_delimiter = ',', allow_hyphen_values = true, default_value = "0.5,1,2,3")]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Violation threshold on the margin.
    #[arg(long, default_value_t = VIOLATION_TOL)]
    pub tol: f64,
    #[arg(long, default_value = DEFAULT_REPLAY_PATH)]
    pub replay: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// What a CLI invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    execute(cli.command)
}

pub fn execute(command: Command) -> Outcome {
    let mut warnings = String::new();
    let result = match &command {
        Command::Entropy(a) => cmd_entropy(a).map(|r| (r, &a.output)),
        Command::Scenario(a) => cmd_scenario(a, &mut warnings).map(|r| (r, &a.output)),
        Command::Sweep(a) => cmd_sweep(a).map(|r| (r, &a.output)),
        Command::Fuzz(a) => cmd_fuzz(a).map(|r| (r, &a.output)),
        Command::Replay(a) => cmd_replay(a).map(|r| (r, &a.output)),
    };
    let (report, output) = match result {
        Ok(x) => x,
        Err(e) => {
            let mut out = Outcome::usage(e);
            out.stderr.insert_str(0, &warnings);
            return out;
        }
    };
    let text = report.render(output.format.unwrap_or(report.default_format));
    let mut stderr = warnings;
    let mut code = EXIT_OK;
    if !report.violations.is_empty() {
        code = EXIT_VERIFICATION_FAILED;
        if let Some(path) = &report.replay_path {
            if let Err(e) = write_replay(path, report.command, &report.violations) {
                return Outcome::usage(e);
            }
            let _ = writeln!(stderr, "{} violation(s); replay file: {}", report.violations.len(), path.display());
        } else {
            let _ = writeln!(stderr, "{} check(s) still failing", report.violations.len());
        }
    }
    let stdout = match &output.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => String::new(),
            Err(e) => return Outcome::usage(format!("cannot write {}: {e}", path.display())),
        },
        None => text,
    };
    Outcome { code, stdout, stderr }
}

/// `x` rounded to [`PRINT_DIGITS`] significant digits, printed with a decimal
/// point and no grouping; exponent notation outside [1e-4, 1e12).
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", PRINT_DIGITS - 1, x).parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e12).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
            if let Some(x) = n.as_f64() {
                let r: f64 = format!("{:.*e}", PRINT_DIGITS - 1, x).parse().expect("formatted float parses");
                *v = json!(r);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map(format_number).unwrap_or_else(|| n.to_string()),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// A finished command: either one record of named fields or a table.
struct Report {
    command: &'static str,
    params: Value,
    body: Body,
    violations: Vec<Violation>,
    default_format: Format,
    replay_path: Option<PathBuf>,
}

enum Body {
    Record(Vec<(&'static str, Value)>),
    Table { header: &'static str, rows: Vec<Vec<f64>>, results: Value },
}

impl Report {
    fn record(command: &'static str, params: Value, fields: Vec<(&'static str, Value)>) -> Self {
        Self { command, params, body: Body::Record(fields), violations: Vec::new(), default_format: Format::Text, replay_path: None }
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match (&self.body, format) {
            (Body::Record(fields), Format::Text) => {
                for (k, v) in fields {
                    let _ = writeln!(out, "{k} = {}", cell(v));
                }
            }
            (Body::Record(fields), Format::Csv) => {
                let _ = writeln!(out, "{}", fields.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(","));
                let _ = writeln!(out, "{}", fields.iter().map(|(_, v)| cell(v)).collect::<Vec<_>>().join(","));
            }
            (Body::Table { header, rows, .. }, Format::Text | Format::Csv) => {
                let _ = writeln!(out, "{header}");
                for row in rows {
                    let _ = writeln!(out, "{}", row.iter().map(|&x| format_number(x)).collect::<Vec<_>>().join(","));
                }
            }
            (_, Format::Json) => {
                let results = match &self.body {
                    Body::Record(fields) => Value::Object(fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<Map<_, _>>()),
                    Body::Table { results, .. } => results.clone(),
                };
                let mut doc = json!({
                    "command": self.command,
                    "params": self.params,
                    "results": results,
                    "violations": serde_json::to_value(&self.violations).expect("violations serialize"),
                });
                round_json(&mut doc);
                out = serde_json::to_string_pretty(&doc).expect("report serializes");
                out.push('\n');
            }
        }
        out
    }
}

fn cmd_entropy(a: &EntropyArgs) -> Result<Report> {
    let order = EntropyOrder::new(a.alpha)?;
    let dist = parse_distribution(&a.p)?;
    let h = tsallis(&dist, order);
    let r = renyi_from_tsallis(h, order)?;
    Ok(Report::record(
        "entropy",
        json!({ "p": a.p, "alpha": a.alpha }),
        vec![("alpha", json!(a.alpha)), ("H", json!(h)), ("R", json!(r))],
    ))
}

/// Accepts probabilities summing to 1 within [`INPUT_NORMALIZATION_TOL`] and
/// renormalizes them.
pub fn parse_distribution(p: &[f64]) -> Result<ProbabilityDistribution> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < -INPUT_NORMALIZATION_TOL) {
        return Err(Error::InvalidDistribution(format!("entry {x} is not a probability")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > INPUT_NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {sum}, not 1")));
    }
    let labels = (0..p.len()).map(|i| i as f64).collect();
    ProbabilityDistribution::from_weights(p.to_vec(), labels, INPUT_NORMALIZATION_TOL)
}

fn parse_vector(v: &[f64], name: &str) -> Result<BlochVector> {
    match v {
        [a, b, c] if v.iter().all(|x| x.is_finite()) => Ok(BlochVector::new(*a, *b, *c)),
        _ => Err(Error::Domain(format!("--{name} needs 3 finite comma-separated reals"))),
    }
}

/// Unit axis from the command line: zero is rejected, other lengths are
/// rescaled, with a warning beyond [`AXIS_WARN_TOL`].
pub fn parse_axis(v: &[f64], name: &str, warnings: &mut String) -> Result<QubitObservable> {
    let axis = parse_vector(v, name)?;
    let n = axis.norm();
    if n == 0.0 {
        return Err(Error::InvalidObservable(format!("--{name} is the zero vector")));
    }
    if (n - 1.0).abs() > AXIS_WARN_TOL {
        let _ = writeln!(warnings, "warning: --{name} has length {}; normalized", format_number(n));
    }
    QubitObservable::spin_normalized(axis)
}

fn bound_fields(fields: &mut Vec<(&'static str, Value)>, prefix: Prefix, b: &BoundReport) {
    let names = prefix.names();
    fields.extend([
        (names[0], json!(b.lower)),
        (names[1], json!(b.upper)),
        (names[2], json!(b.lower_residual)),
        (names[3], json!(b.upper_residual)),
        (names[4], json!(b.lower_saturated)),
        (names[5], json!(b.upper_saturated)),
    ]);
}

#[derive(Clone, Copy)]
enum Prefix {
    Plain,
    Form1,
    Form2,
}

impl Prefix {
    fn names(self) -> [&'static str; 6] {
        match self {
            Prefix::Plain => ["lower", "upper", "lower_residual", "upper_residual", "lower_saturated", "upper_saturated"],
            Prefix::Form1 => [
                "form1_lower",
                "form1_upper",
                "form1_lower_residual",
                "form1_upper_residual",
                "form1_lower_saturated",
                "form1_upper_saturated",
            ],
            Prefix::Form2 => [
                "form2_lower",
                "form2_upper",
                "form2_lower_residual",
                "form2_upper_residual",
                "form2_lower_saturated",
                "form2_upper_saturated",
            ],
        }
    }
}

fn cmd_scenario(a: &ScenarioArgs, warnings: &mut String) -> Result<Report> {
    let order = EntropyOrder::new(a.alpha)?;
    let qudit_mode = a.mub || a.random_basis || a.matrix.is_some() || a.d.is_some() || a.random_state;
    let kind = match a.kind {
        Kind::One => 1,
        Kind::Two => 2,
    };
    let mut fields: Vec<(&'static str, Value)> = vec![("kind", json!(kind)), ("alpha", json!(a.alpha))];
    let params;
    if qudit_mode {
        let (state, first, second) = qudit_instance(a)?;
        params = json!({ "kind": kind, "alpha": a.alpha, "d": state.dim(), "mub": a.mub,
            "random_basis": a.random_basis, "random_state": a.random_state, "seed": a.seed });
        fields.push(("d", json!(state.dim())));
        scenario_fields(&mut fields, &state, &first, &second, order, a.kind)?;
        if a.kind == Kind::Two {
            let r = prop3_report(&state, &first, &second, order)?;
            bound_fields(&mut fields, Prefix::Form1, &r.form1);
            bound_fields(&mut fields, Prefix::Form2, &r.form2);
            fields.push(("mutually_unbiased", json!(r.mutually_unbiased)));
            fields.push(("strictly_positive", json!(r.strictly_positive)));
        }
    } else {
        let state = QubitState::new(parse_vector(&a.r, "r")?)?;
        let first = parse_axis(&a.p, "p", warnings)?;
        let second = parse_axis(&a.q, "q", warnings)?;
        params = json!({ "kind": kind, "alpha": a.alpha, "r": a.r, "p": a.p, "q": a.q });
        fields.push(("d", json!(2)));
        fields.push(("mu", json!(crate::qubit::overlap_mu(&first, &second))));
        scenario_fields(&mut fields, &state, &first, &second, order, a.kind)?;
        let report = match a.kind {
            Kind::One => prop1_report(&state, &first, &second, order)?,
            Kind::Two => prop2_report(&state, &first, &second, order)?,
        };
        bound_fields(&mut fields, Prefix::Plain, &report);
        fields.push(("commutes", json!(report.conditions.commutes)));
        fields.push(("zero_mean", json!(report.conditions.zero_mean)));
    }
    Ok(Report::record("scenario", params, fields))
}

fn scenario_fields<S: SuccessiveMeasurement>(
    fields: &mut Vec<(&'static str, Value)>,
    state: &S,
    first: &S::Observable,
    second: &S::Observable,
    order: EntropyOrder,
    kind: Kind,
) -> Result<()> {
    match kind {
        Kind::One => {
            let r = scenario1(state, first, second, order)?;
            let sides = scenario1_quantum_sides(state, first, order)?;
            fields.extend([
                ("first_entropy", json!(r.first_entropy)),
                ("second_entropy", json!(r.second_entropy)),
                ("total", json!(r.total)),
                ("quantum_lower", json!(sides.lower)),
                ("quantum_upper", json!(sides.upper)),
            ]);
        }
        Kind::Two => {
            let r = scenario2(state, first, second, order)?;
            fields.extend([
                ("form1", json!(r.form1)),
                ("form2", json!(r.form2)),
                ("marginal", json!(r.marginal.probs())),
                ("per_outcome", json!(r.per_outcome)),
            ]);
        }
    }
    Ok(())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixInput {
    state: Option<MatrixRecord>,
    first_basis: Option<MatrixRecord>,
    second_basis: Option<MatrixRecord>,
}

fn qudit_instance(a: &ScenarioArgs) -> Result<(QuditState, QuditObservable, QuditObservable)> {
    let input = match &a.matrix {
        Some(path) => read_matrix_input(path)?,
        None => MatrixInput::default(),
    };
    let state_from_file = |rec: &MatrixRecord| -> Result<QuditState> { QuditState::new(ComplexMatrix::new(rec.to_matrix()?)?) };
    let file_state = input.state.as_ref().map(state_from_file).transpose()?;
    let d = match (a.d, &file_state, &input.first_basis) {
        (Some(d), _, _) => d,
        (None, Some(s), _) => s.dim(),
        (None, None, Some(b)) => b.re.len(),
        (None, None, None) => return Err(Error::InvalidConfig("qudit mode needs --d or a --matrix file".into())),
    };
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} must be at least 2")));
    }
    let mut rng = rng_for(a.seed, 0);
    let (first, second) = if a.mub {
        qudit::fourier_mub_pair(d)?
    } else if a.random_basis {
        (haar_observable(d, &mut rng), haar_observable(d, &mut rng))
    } else {
        match (&input.first_basis, &input.second_basis) {
            (Some(f), Some(s)) => (QuditObservable::from_basis(f.to_matrix()?)?, QuditObservable::from_basis(s.to_matrix()?)?),
            _ => return Err(Error::InvalidConfig("give --mub, --random-basis, or both bases in --matrix".into())),
        }
    };
    let state = match file_state {
        Some(s) if !a.random_state => s,
        _ if a.random_state => positive_ginibre_state(d, POSITIVE_STATE_FLOOR, &mut rng),
        _ => QuditState::maximally_mixed(d)?,
    };
    if state.dim() != d || first.dim() != d || second.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: state.dim().max(first.dim()).max(second.dim()) });
    }
    Ok((state, first, second))
}

fn read_matrix_input(path: &Path) -> Result<MatrixInput> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn cmd_sweep(a: &SweepArgs) -> Result<Report> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Error::InvalidConfig(format!("--tol {} must be positive", a.tol)));
    }
    let config = SweepConfig {
        r_norm: a.r_norm,
        mu_grid: a.mus.clone().unwrap_or_else(|| vec![-1.0, -0.5, 0.0, 0.5, 1.0]),
        alpha_grid: a.alphas.clone().unwrap_or_else(|| ALPHA_GRID.to_vec()),
        r3_points: a.points,
        seed: a.seed,
    };
    let kind = match a.kind {
        Kind::One => SweepKind::ScenarioOne,
        Kind::Two => SweepKind::ScenarioTwo,
    };
    let result = sweep(kind, &config)?;
    let rows = result
        .cells
        .iter()
        .map(|c| vec![c.alpha, c.mu, c.r_norm, c.min, c.argmin_r3, c.max, c.argmax_r3, c.lower, c.upper, c.min_residual, c.max_residual])
        .collect();
    Ok(Report {
        command: "sweep",
        params: json!({ "kind": kind, "r_norm": a.r_norm, "alphas": config.alpha_grid, "mus": config.mu_grid,
            "points": a.points, "tol": a.tol, "seed": a.seed }),
        body: Body::Table { header: SWEEP_HEADER, rows, results: serde_json::to_value(&result.cells).expect("cells serialize") },
        violations: result.violations(a.tol),
        default_format: Format::Csv,
        replay_path: Some(a.replay.clone()),
    })
}

fn cmd_fuzz(a: &FuzzArgs) -> Result<Report> {
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(Error::InvalidConfig(format!("--tol {} must be non-negative", a.tol)));
    }
    let (checks, worst, violations) = match a.check {
        FuzzCheck::Monotonicity => {
            let r = fuzz_monotonicity(a.trials, &a.dims, &a.alphas, a.seed)?;
            (r.checks, r.worst_margin, r.violations)
        }
        FuzzCheck::Sandwich => {
            let r = fuzz_scenario1_sandwich(a.trials, &a.alphas, a.seed)?;
            (r.checks, r.worst_lower_margin.min(r.worst_upper_margin), r.violations)
        }
        FuzzCheck::Certainty => {
            let config = Prop3FuzzConfig {
                dims: a.dims.clone(),
                alphas: a.alphas.clone(),
                mub_states: a.trials,
                random_pairs: a.trials,
                seed: a.seed,
            };
            if a.trials == 0 || a.dims.iter().any(|&d| d < 2) {
                return Err(Error::InvalidConfig("certainty fuzzing needs trials ≥ 1 and dimensions ≥ 2".into()));
            }
            let r = fuzz_prop3(&config, 0.0)?;
            (r.mub_checks + r.random_checks, r.min_random_form2_residual, r.violations)
        }
    };
    let violations: Vec<Violation> = violations.into_iter().filter(|v| v.margin < -a.tol).collect();
    let check = a.check.to_possible_value().expect("no skipped variants").get_name().to_string();
    Ok(Report {
        command: "fuzz",
        params: json!({ "check": check, "trials": a.trials, "dims": a.dims, "alphas": a.alphas, "seed": a.seed, "tol": a.tol }),
        body: Body::Record(vec![
            ("trials", json!(a.trials)),
            ("checks", json!(checks)),
            ("violations", json!(violations.len())),
            ("worst_margin", json!(worst)),
        ]),
        violations,
        default_format: Format::Json,
        replay_path: Some(a.replay.clone()),
    })
}

fn still_failing(v: &Violation, margin: f64) -> bool {
    match v.check {
        CheckKind::SweepLower | CheckKind::SweepUpper => margin.abs() > 1e-9,
        _ => margin < -VIOLATION_TOL,
    }
}

fn cmd_replay(a: &ReplayArgs) -> Result<Report> {
    let file = read_replay(&a.file)?;
    let mut rows = Vec::new();
    let mut failing = Vec::new();
    for v in &file.violations {
        let margin = replay_margin(v)?;
        rows.push(vec![v.alpha, v.dim as f64, v.margin, margin]);
        if still_failing(v, margin) {
            failing.push(v.clone());
        }
    }
    let results = Value::Array(
        rows.iter()
            .zip(&file.violations)
            .map(|(r, v)| json!({ "check": v.check, "seed": v.seed, "stream": v.stream, "alpha": r[0], "dim": v.dim,
                "recorded_margin": r[2], "replayed_margin": r[3] }))
            .collect(),
    );
    Ok(Report {
        command: "replay",
        params: json!({ "file": a.file.display().to_string(), "recorded_command": file.command }),
        body: Body::Table { header: "alpha,dim,recorded_margin,replayed_margin", rows, results },
        violations: failing,
        default_format: Format::Csv,
        replay_path: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> Outcome {
        run(std::iter::once("seqentropy").chain(args.split_whitespace()))
    }

    fn field(out: &Outcome, key: &str) -> f64 {
        let prefix = format!("{key} = ");
        out.stdout.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("{key} missing in {}", out.stdout)).parse().unwrap()
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(format_number(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.234e-12), "1.234e-12");
        assert_eq!(format_number(123456.0), "123456");
    }

    #[test]
    fn entropy_examples() {
        let out = go("entropy --p 0.5,0.5 --alpha 2");
        assert_eq!(out.code, 0);
        assert_eq!(out.stdout, "alpha = 2\nH = 0.5\nR = 0.69314718056\n");
        let out = go("entropy --p 1,0 --alpha 0.5");
        assert_eq!((field(&out, "H"), field(&out, "R")), (0.0, 0.0));
        let out = go("entropy --p 0.7,0.2,0.1 --alpha 3");
        assert_eq!(field(&out, "H"), 0.324);
        assert_eq!(field(&out, "R"), 0.522062051692);
    }

    #[test]
    fn entropy_normalization_tolerance() {
        assert_eq!(go("entropy --p 0.5,0.5000000005 --alpha 2").code, 0);
        let out = go("entropy --p 0.5,0.52 --alpha 2");
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("sum"));
        assert_eq!(go("entropy --p 0.5,0.5 --alpha -1").code, EXIT_USAGE);
        assert_eq!(go("entropy --alpha 2").code, EXIT_USAGE);
    }

    #[test]
    fn entropy_csv_and_json() {
        let out = go("entropy --p 0.5,0.5 --alpha 2 --format csv");
        assert_eq!(out.stdout, "alpha,H,R\n2,0.5,0.69314718056\n");
        let out = go("entropy --p 0.5,0.5 --alpha 2 --format json");
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["command"], "entropy");
        assert_eq!(v["results"]["H"], 0.5);
        assert_eq!(v["violations"], json!([]));
    }

    #[test]
    fn scenario_examples() {
        let out = go("scenario --kind 1 --r 0,0,0 --p 0,0,1 --q 1,0,0 --alpha 1");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(field(&out, "total"), 1.38629436112);
        assert!(out.stdout.contains("upper_saturated = true"));
        let out = go("scenario --kind 2 --r 0,0,1 --p 0,0,1 --q 1,0,0 --alpha 2");
        assert_eq!((field(&out, "form1"), field(&out, "form2")), (0.5, 0.5));
        let out = go("scenario --kind 2 --mub --d 3 --alpha 1");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(field(&out, "form2"), 1.09861228867);
        assert!(out.stdout.contains("form2_upper_saturated = true"));
    }

    #[test]
    fn scenario_axis_handling() {
        let out = go("scenario --kind 1 --r 0,0,0 --p 0,0,0 --q 1,0,0 --alpha 2");
        assert_eq!(out.code, EXIT_USAGE);
        let out = go("scenario --kind 1 --r 0,0,0.5 --p 0,0,2 --q 1,0,0 --alpha 2");
        assert_eq!(out.code, 0);
        assert!(out.stderr.contains("warning: --p"));
        let out = go("scenario --kind 1 --r 0,0,0.5 --p 0,0,1.0000000001 --q 1,0,0 --alpha 2");
        assert!(out.stderr.is_empty());
        assert_eq!(go("scenario --kind 1 --r 0,0,1.5 --alpha 2").code, EXIT_USAGE);
        assert_eq!(go("scenario --kind 3 --alpha 2").code, EXIT_USAGE);
    }

    #[test]
    fn scenario_matrix_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let doc = json!({
            "state": { "re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]] },
            "first_basis": { "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]] },
            "second_basis": { "re": [[h, h], [h, -h]], "im": [[0.0, 0.0], [0.0, 0.0]] },
        });
        std::fs::write(&path, doc.to_string()).unwrap();
        let out = go(&format!("scenario --kind 1 --alpha 1 --matrix {}", path.display()));
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout.lines().find(|l| l.starts_with("total")), Some("total = 0.69314718056"));
    }

    #[test]
    fn sweep_example_and_violation_exit() {
        let out = go("sweep --r-norm 0 --alphas 2 --mus 0.5");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let lines: Vec<_> = out.stdout.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 2);
        let row: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!((row[3], row[5]), (1.0, 1.0));

        assert_eq!(go("sweep --r-norm 0.5 --points 4").code, EXIT_USAGE);
    }

    #[test]
    fn replay_flags_false_claims() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        // The true maximum at |r| = 0 is 2 ln_2(2) = 1; claim 0.9 instead.
        let claim = |bound: f64| Violation {
            check: CheckKind::SweepUpper,
            seed: 0,
            stream: 0,
            dim: 2,
            alpha: 2.0,
            observed: 1.0,
            bound,
            margin: bound - 1.0,
            instance: crate::verify::Instance::Sweep { kind: SweepKind::ScenarioOne, r_norm: 0.0, mu: 0.5, r3: 0.0 },
        };
        write_replay(&path, "sweep", &[claim(0.9)]).unwrap();
        let out = go(&format!("replay {}", path.display()));
        assert_eq!(out.code, EXIT_VERIFICATION_FAILED);
        assert!(out.stdout.ends_with("2,2,-0.1,-0.1\n"), "{}", out.stdout);
        write_replay(&path, "sweep", &[claim(1.0)]).unwrap();
        assert_eq!(go(&format!("replay {}", path.display())).code, EXIT_OK);
        assert_eq!(go("replay /nonexistent/replay.json").code, EXIT_USAGE);
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a = go("fuzz --trials 20 --dims 2,3 --alphas 0.5,2 --seed 42");
        assert_eq!(a.code, 0, "{}", a.stderr);
        let v: Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["results"]["violations"], 0);
        assert_eq!(v["results"]["trials"], 20);
        assert_eq!(a, go("fuzz --trials 20 --dims 2,3 --alphas 0.5,2 --seed 42"));
        assert_eq!(go("fuzz --trials 0").code, EXIT_USAGE);
        assert_eq!(go("fuzz --check sandwich --trials 10 --alphas 2").code, 0);
        assert_eq!(go("fuzz --check certainty --trials 3 --dims 2,3 --alphas 2").code, 0);
    }

    #[test]
    fn out_flag_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        let out = go(&format!("entropy --p 0.5,0.5 --alpha 2 --format csv --out {}", path.display()));
        assert_eq!(out.code, 0);
        assert!(out.stdout.is_empty());
        assert_eq!(std::fs::read_to_string(path).unwrap(), "alpha,H,R\n2,0.5,0.69314718056\n");
    }
}
