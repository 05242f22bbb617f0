//! `margins` — scenario analysis for protective-system selection.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use margins::{EstimationConfig, EstimationMode, NegligenceCase, Scenario};
use margins_cli::exec::classify_portfolio_with_workers;
use margins_cli::fixture::{generate_fig3_fixture, FixtureGeometryError, DEFAULT_FIXTURE_SEED};
use margins_cli::report;
use margins_cli::scenario::{parse_scenario, serialize_scenario, ScenarioError};

/// Evaluate protective-system alternatives by expected lifecycle social
/// cost: select the socially optimal one, quantify margins of safety and
/// premiums, check point-slope bounds, and apply the Hand Rule.
#[derive(Parser)]
#[command(name = "margins", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file; list every invariant violation.
    Validate {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Print the per-alternative evaluation table.
    Evaluate {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        estimation: EstimationOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Select the optimal alternative and classify the portfolio.
    Classify {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        estimation: EstimationOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Check every rival against the optimum's point-slope bound.
    Bounds {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        estimation: EstimationOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Apply the Hand Rule to a burden / probability / loss triple.
    HandRule {
        /// Burden of protection b.
        #[arg(long)]
        burden: f64,
        /// Probability of harm P, in [0, 1].
        #[arg(long)]
        p: f64,
        /// Value of the loss caused L.
        #[arg(long)]
        loss: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Write the bundled 27-alternative example scenario.
    GenFig3 {
        /// Seed for the generator (pinned known-good default).
        #[arg(long, default_value_t = DEFAULT_FIXTURE_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit scatter and bound-line data as CSV.
    PlotData {
        #[command(flatten)]
        input: InputOpts,
        #[command(flatten)]
        estimation: EstimationOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args)]
struct InputOpts {
    /// Path to the scenario file.
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,
}

#[derive(Args)]
struct EstimationOpts {
    /// Override the scenario's root seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo sample cap per conditional estimate.
    #[arg(long)]
    samples: Option<u64>,
    /// Override the relative standard-error target.
    #[arg(long, value_name = "REL")]
    stderr: Option<f64>,
    /// Use Monte Carlo even for finite-support distributions.
    #[arg(long)]
    force_mc: bool,
    /// Evaluation threads; any count produces identical results.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl EstimationOpts {
    fn config(&self, scenario: &Scenario) -> EstimationConfig {
        let mut cfg = EstimationConfig::for_scenario(scenario);
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(samples) = self.samples {
            cfg.max_samples = samples;
        }
        if let Some(stderr) = self.stderr {
            cfg.target_stderr = stderr;
        }
        if self.force_mc {
            cfg.mode = EstimationMode::ForceMonteCarlo;
        }
        cfg
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Write the result here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Error carrying the exit-code contract: 2 usage, 3 scenario problems
/// (syntax, schema, validation, file IO), 4 computation failures.
struct CliError {
    code: &'static str,
    exit: u8,
    message: String,
}

impl CliError {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: "E_IO",
            exit: 3,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl From<ScenarioError> for CliError {
    fn from(err: ScenarioError) -> Self {
        let code = match &err {
            ScenarioError::Syntax { .. } => "E_SYNTAX",
            ScenarioError::Schema { .. } => "E_SCHEMA",
            ScenarioError::Validation(_) => "E_VALIDATION",
        };
        Self {
            code,
            exit: 3,
            message: err.to_string(),
        }
    }
}

impl From<margins::Error> for CliError {
    fn from(err: margins::Error) -> Self {
        let (code, exit) = match &err {
            margins::Error::Estimation { .. } => ("E_ESTIMATION", 4),
            margins::Error::Param { .. } => ("E_USAGE", 2),
            margins::Error::EmptyPortfolio => ("E_VALIDATION", 3),
            _ => ("E_INTERNAL", 4),
        };
        Self {
            code,
            exit,
            message: err.to_string(),
        }
    }
}

impl From<FixtureGeometryError> for CliError {
    fn from(err: FixtureGeometryError) -> Self {
        Self {
            code: "E_FIXTURE",
            exit: 4,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error[E_USAGE]: {err}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { input, output } => {
            // Parse leniently enough to reach validation: syntax/schema
            // problems still fail here, but invariant violations are the
            // verb's own subject matter and get listed, not thrown.
            let text = read_scenario_file(&input.scenario)?;
            match parse_scenario(&text) {
                Ok(doc) => {
                    let summary = format!(
                        "scenario valid: {} alternative(s), welfare family {}\n",
                        doc.scenario.alternatives.len(),
                        doc.scenario.welfare.family.name()
                    );
                    emit(&output, &summary)
                }
                Err(ScenarioError::Validation(violations)) => {
                    emit(&output, &report::violations_listing(&violations))?;
                    Err(ScenarioError::Validation(violations).into())
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::Evaluate {
            input,
            estimation,
            output,
        } => {
            let scenario = load_scenario(&input.scenario)?;
            let cfg = estimation.config(&scenario);
            let evals =
                margins_cli::exec::evaluate_portfolio(&scenario, &cfg, estimation.workers.max(1))?;
            emit(&output, &report::evaluation_table(&evals))
        }
        Command::Classify {
            input,
            estimation,
            output,
        } => {
            let scenario = load_scenario(&input.scenario)?;
            let cfg = estimation.config(&scenario);
            let analysis =
                classify_portfolio_with_workers(&scenario, &cfg, estimation.workers.max(1))?;
            emit(&output, &report::classification_report(&analysis))
        }
        Command::Bounds {
            input,
            estimation,
            output,
        } => {
            let scenario = load_scenario(&input.scenario)?;
            let cfg = estimation.config(&scenario);
            let analysis =
                classify_portfolio_with_workers(&scenario, &cfg, estimation.workers.max(1))?;
            emit(&output, &report::bounds_table(&analysis))
        }
        Command::HandRule {
            burden,
            p,
            loss,
            output,
        } => {
            let case = NegligenceCase::new(burden, p, loss)?;
            let verdict = margins::hand_rule(&case)?;
            emit(&output, &format!("{}\n", report::verdict_line(verdict)))
        }
        Command::GenFig3 { seed, output } => {
            let doc = generate_fig3_fixture(seed)?;
            emit(&output, &serialize_scenario(&doc))
        }
        Command::PlotData {
            input,
            estimation,
            output,
        } => {
            let scenario = load_scenario(&input.scenario)?;
            let cfg = estimation.config(&scenario);
            let analysis =
                classify_portfolio_with_workers(&scenario, &cfg, estimation.workers.max(1))?;
            emit(&output, &report::plot_data_csv(&analysis))
        }
    }
}

fn read_scenario_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|err| CliError::io(path, err))
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = read_scenario_file(path)?;
    Ok(parse_scenario(&text)?.scenario)
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|err| CliError::io(path, err)),
        None => {
            // A broken pipe on stdout is not an analysis failure.
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}
