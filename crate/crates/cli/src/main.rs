use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prl_core::circles::Convention;
use prl_core::packing::{evaluate_packing, PackingInput};
use prl_core::pipeline::{
    export_circles, hyperideal_report, run_counterexample, sweep, CircleSet, CounterexampleParams,
    CounterexampleReport, ExportFormat, StageStatus, Verdict,
};
use prl_core::sampling::DEFAULT_SEED;
use prl_core::tolerance::Tolerances;
use prl_core::verify;

/// Exit code for invalid input or parameters.
const EXIT_INPUT: u8 = 2;
/// Exit code for a failed verification stage.
const EXIT_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "prl", version, about = "Non-rigid spherical inversive distance circle packings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Corrected,
    PaperVerbatim,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Corrected => Convention::Corrected,
            ConventionArg::PaperVerbatim => Convention::PaperVerbatim,
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Side length of the two triangles.
    #[arg(long, default_value_t = 1.55, allow_hyphen_values = true)]
    a: f64,
    /// Half the vertical separation of the triangles.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    h: f64,
    /// Flex parameter.
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    t: f64,
    /// Equality tolerance.
    #[arg(long, default_value_t = prl_core::tolerance::EQUALITY)]
    tol: f64,
    #[arg(long, value_enum, default_value = "corrected")]
    convention: ConventionArg,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ParamArgs {
    fn params(&self) -> CounterexampleParams {
        let tol = Tolerances { equality: self.tol, ..Tolerances::default() };
        CounterexampleParams { a: self.a, h: self.h, t: self.t, tol, convention: self.convention.into() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build both packings and certify that they are not Möbius equivalent.
    Counterexample(ParamArgs),
    /// Hyperideal edge lengths of the two de Sitter polyhedra.
    Hyperideal(ParamArgs),
    /// Edge lengths, face checks and curvature of a packing given as JSON.
    PackingEval {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline over a parameter grid.
    Sweep {
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        h: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = prl_core::tolerance::EQUALITY)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the circles of a counterexample report.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        /// svg or json
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the seeded property suites of every module.
    Verify,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_INPUT, error: error.into() }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(input_error),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{}", content.trim_end()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(input_error(e)),
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn summarize(report: &CounterexampleReport) {
    for stage in &report.stages {
        let mark = match stage.status {
            StageStatus::Passed => "ok  ",
            StageStatus::Failed => "FAIL",
            StageStatus::NotEvaluated => "--  ",
        };
        match &stage.detail {
            Some(d) => eprintln!("{mark} {:<18} {d}", stage.name),
            None => eprintln!("{mark} {}", stage.name),
        }
    }
    eprintln!("verdict: {:?}", report.verdict);
}

fn counterexample(args: &ParamArgs) -> Result<u8, Failure> {
    let report = run_counterexample(&args.params()).map_err(input_error)?;
    summarize(&report);
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(if report.verdict == Verdict::Certified { 0 } else { EXIT_FAILED })
}

fn hyperideal(args: &ParamArgs) -> Result<u8, Failure> {
    let report = hyperideal_report(&args.params()).map_err(input_error)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(0)
}

fn packing_eval(input: &Path, out: Option<&Path>) -> Result<u8, Failure> {
    let text = fs::read_to_string(input)
        .with_context(|| format!("reading {}", input.display()))
        .map_err(input_error)?;
    let parsed: PackingInput = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", input.display()))
        .map_err(input_error)?;
    let evaluation = evaluate_packing(&parsed).map_err(input_error)?;
    emit(out, &to_json(&evaluation))?;
    let valid = evaluation.faces.valid;
    Ok(if valid { 0 } else { EXIT_FAILED })
}

fn export(input: &Path, format: &str, out: &Path) -> Result<u8, Failure> {
    let format: ExportFormat = format.parse().map_err(input_error)?;
    let text = fs::read_to_string(input)
        .with_context(|| format!("reading {}", input.display()))
        .map_err(input_error)?;
    let report: CounterexampleReport = serde_json::from_str(&text)
        .with_context(|| format!("parsing report {}", input.display()))
        .map_err(input_error)?;
    let sets = CircleSet::from_report(&report).map_err(input_error)?;
    let doc = export_circles(&sets, format).map_err(input_error)?;
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    emit(Some(out), &doc.content)?;
    Ok(0)
}

fn seed() -> Result<u64, Failure> {
    match std::env::var("PRL_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("PRL_SEED must be an unsigned integer, got {s:?}"))
            .map_err(input_error),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn run_verify() -> Result<u8, Failure> {
    let seed = seed()?;
    let outcomes = verify::run_all(seed);
    let mut text = format!("seed {seed}\n");
    for o in &outcomes {
        let _ = writeln!(
            text,
            "{} {:<12} {:<48} n={:<6} worst={:.3e} threshold={:.1e}",
            if o.passed { "PASS" } else { "FAIL" },
            o.module,
            o.name,
            o.samples,
            o.worst,
            o.threshold
        );
    }
    emit(None, &text)?;
    Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { EXIT_FAILED })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Counterexample(args) => counterexample(&args),
        Command::Hyperideal(args) => hyperideal(&args),
        Command::PackingEval { input, out } => packing_eval(&input, out.as_deref()),
        Command::Sweep { a, h, t, tol, out } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(input_error(anyhow::anyhow!("--tol must be positive")));
            }
            let tol = Tolerances { equality: tol, ..Tolerances::default() };
            let rows = sweep(&a, &h, &t, tol, Convention::Corrected);
            emit(out.as_deref(), &to_json(&rows))?;
            Ok(0)
        }
        Command::Export { input, format, out } => export(&input, &format, &out),
        Command::Verify => run_verify(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
