//! The `osf` command: law suites, homotopy probing, evaluation,
//! canonicalization and plot-data export. Every command reads JSON and writes
//! JSON; `run` returns the process exit status.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use osf_core::json::{parse_instance, parse_test_function};
use osf_core::lawcheck::{
    check_axioms_grid, check_axioms_random, check_functor_laws, check_homotopy, check_normality, check_pf_dominance,
    check_representation, check_retraction, check_support_definition, InstanceFamily, LawReport, Model,
};
use osf_core::{format_rational, homotopy_probe, uniform_grid, Functional};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "osf", version, about = "Exact checks for semiadditive functionals on finite spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Axioms,
    Functor,
    Normality,
    Retract,
    Homotopy,
    Support,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a law suite and write one JSON report.
    Verify(VerifyArgs),
    /// Trace the straight-line homotopy of an instance on a uniform t-grid.
    ProbeHomotopy(ProbeArgs),
    /// Evaluate an instance at a test function.
    Eval(EvalArgs),
    /// Print the extreme-point form of an instance.
    Canon(CanonArgs),
    /// Export vertex trajectories of the homotopy as barycentric triples.
    Plotdata(ProbeArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Space sizes, as a comma list.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub sizes: Vec<usize>,
    /// Grid denominator.
    #[arg(long, default_value_t = 2)]
    pub den: u32,
    /// Random trials per axiom check.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Seeded random instances for the sampling suites.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value = "0")]
    pub seed: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProbeArgs {
    /// Instance file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Number of grid steps K; t runs over 0, 1/K, …, 1.
    #[arg(long = "t-grid", default_value_t = 10)]
    pub t_grid: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "0")]
    pub seed: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, clap::Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Values in point order (`2,-1,4`), `label=value` pairs, or a
    /// `{"values": {...}}` object.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CanonArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Domain(#[from] osf_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Domain(e) if e.is_precondition() => EXIT_PRECONDITION,
            CliError::Domain(_) => EXIT_IO,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "osf: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Verify(args) => {
            let report = verify(args)?;
            emit(&report, args.out.as_deref(), stdout)?;
            if report.failures > 0 {
                let _ = writeln!(stderr, "osf: {} law failure(s)", report.failures);
                return Ok(EXIT_FAILURES);
            }
            Ok(EXIT_OK)
        }
        Command::ProbeHomotopy(args) => {
            let report = probe(args)?;
            emit(&report, args.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Eval(args) => {
            let mu = read_instance(&args.input)?;
            let phi = parse_test_function(mu.space(), &args.phi)?;
            writeln!(stdout, "{}", format_rational(&mu.eval(&phi)?)).map_err(stdout_error)?;
            Ok(EXIT_OK)
        }
        Command::Canon(args) => {
            let mu = read_instance(&args.input)?;
            emit(&canonical_json(&mu), args.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Plotdata(args) => {
            let data = plotdata(args)?;
            emit(&data, args.out.as_deref(), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: String,
    pub params: Value,
    pub failures: usize,
    pub reports: Vec<LawReport>,
}

fn validate(args: &VerifyArgs) -> Result<(), CliError> {
    if args.sizes.is_empty() {
        return Err(CliError::Usage("--sizes must list at least one size".into()));
    }
    if let Some(&bad) = args.sizes.iter().find(|&&s| s == 0 || s > 8) {
        return Err(CliError::Usage(format!("size {bad} outside 1..=8")));
    }
    if args.den == 0 {
        return Err(CliError::Usage("--den must be at least 1".into()));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if matches!(args.suite, Suite::Support | Suite::All) && args.sizes.iter().any(|&s| s > 5) {
        return Err(CliError::Usage("the support suite enumerates all subsets and needs sizes ≤ 5".into()));
    }
    Ok(())
}

/// Runs the selected suite.
pub fn verify(args: &VerifyArgs) -> Result<SuiteReport, CliError> {
    validate(args)?;
    let fam = InstanceFamily::new(args.sizes.clone(), args.den, args.seed.clone()).with_samples(args.samples);
    let model = Model::reference();
    let wants = |s: Suite| args.suite == s || args.suite == Suite::All;
    let mut reports = Vec::new();
    if wants(Suite::Axioms) {
        reports.push(check_axioms_grid(&fam, args.trials));
        reports.push(check_axioms_random(&fam, args.trials));
        reports.push(check_representation(&fam, args.trials));
    }
    if wants(Suite::Functor) {
        reports.push(check_functor_laws(&fam, &model));
        reports.push(check_pf_dominance(&fam, &model));
    }
    if wants(Suite::Normality) {
        reports.extend(check_normality(&fam, &model));
    }
    if wants(Suite::Retract) {
        reports.push(check_retraction(&fam));
    }
    if wants(Suite::Homotopy) {
        reports.push(check_homotopy(&fam, args.trials));
    }
    if wants(Suite::Support) {
        reports.push(check_support_definition(&fam)?);
    }
    let failures = reports.iter().map(|r| r.failures.len()).sum();
    Ok(SuiteReport {
        suite: args.suite,
        seed: args.seed.clone(),
        params: json!({"sizes": args.sizes, "den": args.den, "trials": args.trials, "samples": args.samples}),
        failures,
        reports,
    })
}

pub fn probe(args: &ProbeArgs) -> Result<osf_core::ProbeReport, CliError> {
    let mu = read_instance(&args.input)?;
    let grid = uniform_grid(args.t_grid).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    Ok(homotopy_probe(&mu, &grid, args.trials, &args.seed)?)
}

/// `{"space": ..., "vertices": [...]}`; parses back to the same functional.
pub fn canonical_json(mu: &Functional) -> Value {
    let mut value = serde_json::to_value(mu).expect("serializable");
    value["space"] = serde_json::to_value(mu.space()).expect("serializable");
    value
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Labels of the barycentric coordinates; spaces with fewer than three
    /// points are padded with zero coordinates.
    pub points: Vec<String>,
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: String,
    pub vertices: Vec<[String; 3]>,
    pub in_osf: bool,
}

pub fn plotdata(args: &ProbeArgs) -> Result<Trajectory, CliError> {
    let mu = read_instance(&args.input)?;
    if mu.space().len() > 3 {
        return Err(osf_core::Error::Unsupported(format!(
            "plot data needs at most 3 points, instance has {}",
            mu.space().len()
        ))
        .into());
    }
    let report = probe(args)?;
    let rows = report
        .records
        .iter()
        .map(|r| TrajectoryRow {
            t: format_rational(&r.t),
            vertices: r
                .vertices
                .iter()
                .map(|v| std::array::from_fn(|i| v.weights().get(i).map_or_else(|| "0".to_string(), format_rational)))
                .collect(),
            in_osf: r.in_osf,
        })
        .collect();
    Ok(Trajectory { points: mu.space().points().to_vec(), rows })
}

pub fn read_instance(path: &Path) -> Result<Functional, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(parse_instance(&text)?)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), message: e.to_string() }
}

fn stdout_error(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), message: e.to_string() }
}

/// Pretty JSON plus a trailing newline, to `out` or stdout.
fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(stdout_error),
    }
}
