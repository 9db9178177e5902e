//! `coexist` — evaluate quantum/classical coexistence noise budgets from
//! scenario files.
//!
//! Results go to stdout (or `--output`) as CSV or JSON; logs and summaries go
//! to stderr so stdout stays machine-readable.
//!
//! Exit codes: 0 success; 1 runtime or oracle-check failure; 2 usage or
//! validation error; 66 missing input file.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coexist_core::output;
use coexist_core::scenario::{Scenario, ScenarioError, ScenarioFile};
use coexist_core::templates;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(
    name = "coexist",
    version,
    about = "Noise budgets for a quantum channel sharing fiber with classical WDM traffic",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario: runs its sweep if one is configured, else a
    /// single budget
    Run(RunArgs),
    /// Evaluate the scenario's sweep (fails if the scenario has none)
    Sweep(RunArgs),
    /// Check a scenario file and report every problem found
    Validate {
        /// Scenario JSON file
        config: PathBuf,
    },
    /// Re-derive each closed-form budget entry by numerical quadrature and
    /// compare
    OracleCheck(OracleArgs),
    /// Write a built-in template scenario (no name: list templates)
    Example(ExampleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file
    config: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write results here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores); results are identical
    /// regardless
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Scenario JSON file
    config: PathBuf,
    /// Largest acceptable relative difference per entry
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// Template name (omit to list available templates)
    name: Option<String>,
    /// Write the scenario here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A command failure carrying the process exit code to use.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args, false),
        Command::Sweep(args) => cmd_run(args, true),
        Command::Validate { config } => cmd_validate(&config),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Example(args) => cmd_example(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn exit_code_for(err: &ScenarioError) -> u8 {
    match err {
        ScenarioError::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
            EXIT_NO_INPUT
        }
        ScenarioError::Json(_) | ScenarioError::Invalid(_) | ScenarioError::NoSweepAxis => {
            EXIT_USAGE
        }
        _ => EXIT_FAILURE,
    }
}

fn load_scenario(config: &Path) -> Result<Scenario, Failure> {
    ScenarioFile::load(config).map_err(|e| Failure::new(exit_code_for(&e), e.to_string()))
}

fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
}

fn write_result(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::new(
                EXIT_FAILURE,
                format!("cannot write {}: {e}", path.display()),
            )
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::new(EXIT_FAILURE, format!("cannot write to stdout: {e}")))
        }
    }
}

fn cmd_run(args: RunArgs, require_sweep: bool) -> CmdResult {
    configure_threads(args.threads);
    let scenario = load_scenario(&args.config)?;
    if scenario.sweep().is_some() {
        let result = scenario
            .run_sweep()
            .map_err(|e| Failure::new(exit_code_for(&e), e.to_string()))?;
        let synthesized = result.points.iter().any(|p| p.budget.synthesized_sprs);
        note_synthesized(synthesized);
        eprintln!(
            "sweep: {} points along {}",
            result.points.len(),
            result.axis.label()
        );
        let text = match args.format {
            Format::Csv => output::sweep_csv(&result),
            Format::Json => output::sweep_json(&result),
        };
        write_result(args.output.as_deref(), &text)
    } else if require_sweep {
        Err(Failure::new(
            EXIT_USAGE,
            ScenarioError::NoSweepAxis.to_string(),
        ))
    } else {
        let budget = scenario
            .run_budget()
            .map_err(|e| Failure::new(exit_code_for(&e), e.to_string()))?;
        note_synthesized(budget.synthesized_sprs);
        eprintln!(
            "budget: total {:e} W in band ({:e} photons/s)",
            budget.total.power_w, budget.total.photons_per_s
        );
        let length_km = scenario.fiber().length_km();
        let text = match args.format {
            Format::Csv => output::budget_csv(&budget, length_km),
            Format::Json => output::budget_json(&budget, length_km),
        };
        write_result(args.output.as_deref(), &text)
    }
}

fn note_synthesized(synthesized: bool) {
    if synthesized {
        eprintln!("note: anti-Stokes efficiencies synthesized thermally from a one-sided table");
    }
}

fn cmd_validate(config: &Path) -> CmdResult {
    let scenario = load_scenario(config)?;
    eprintln!(
        "ok: {} classical channel(s), {} leakage source(s), {:.3} km fiber{}",
        scenario.plan().len(),
        scenario.leakage().len(),
        scenario.fiber().length_km(),
        match scenario.sweep() {
            Some(sweep) => format!(", sweep {} × {}", sweep.values().len(), sweep.axis.label()),
            None => String::new(),
        }
    );
    Ok(())
}

fn cmd_oracle_check(args: OracleArgs) -> CmdResult {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--tolerance must be positive, got {}", args.tolerance),
        ));
    }
    let scenario = load_scenario(&args.config)?;
    let rows = scenario
        .oracle_check(args.tolerance)
        .map_err(|e| Failure::new(exit_code_for(&e), e.to_string()))?;
    let ok = rows.iter().filter(|r| r.passed()).count();
    eprintln!(
        "oracle check: {ok}/{} entries within {:e}",
        rows.len(),
        args.tolerance
    );
    let text = match args.format {
        Format::Csv => output::oracle_report_csv(&rows),
        Format::Json => output::oracle_report_json(&rows, args.tolerance),
    };
    write_result(args.output.as_deref(), &text)?;
    if ok == rows.len() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_FAILURE,
            format!("{} oracle-check entr(ies) failed", rows.len() - ok),
        ))
    }
}

fn cmd_example(args: ExampleArgs) -> CmdResult {
    let Some(name) = args.name else {
        let mut listing = String::new();
        for name in templates::NAMES {
            listing.push_str(name);
            listing.push('\n');
        }
        return write_result(args.output.as_deref(), &listing);
    };
    let Some(template) = templates::by_name(&name) else {
        return Err(Failure::new(
            EXIT_USAGE,
            format!(
                "unknown template `{name}`; available: {}",
                templates::NAMES.join(", ")
            ),
        ));
    };
    write_result(args.output.as_deref(), &template.to_json_string())?;
    if let Some(path) = &args.output {
        eprintln!("wrote template `{name}` to {}", path.display());
    }
    Ok(())
}
