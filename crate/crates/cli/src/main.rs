//! `qcorr`: quantum discord, classical correlation and the sequential
//! overall measures `Q` and `C` for states given in JSON files.

mod error;
mod format;
mod report;
mod statefile;
mod sweep;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcorr_core::{
    all_orders, marginal_entropies, mutual_information, optimize_measurement, sequential_measure,
    von_neumann_entropy, OptimizerConfig,
};

use crate::error::CliError;
use crate::report::ReportDocument;

const STATE_HELP: &str = "State file (JSON). Fields: `dims` (list of subsystem dimensions), \
`kind` (dense | pure | named) and one payload: `matrix` (rows of [re, im] pairs), \
`amplitudes` ([re, im] pairs) or `family` plus `params`. Named families: paper_example, \
bell {which: phi+|phi-|psi+|psi-}, ghz {n}, werner {p}, product {bloch: [[x, y, z], ...]}, \
maximally_mixed (uses `dims`).";

const WERNER_NOTE: &str = "Werner convention: werner(p) = p |Psi-><Psi-| + (1 - p) I/4 with \
|Psi-> = (|01> - |10>)/sqrt(2), 0 <= p <= 1.";

#[derive(Debug, Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum discord, classical correlation and overall quantum/classical correlations",
    after_help = WERNER_NOTE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
struct OptimizerArgs {
    /// Seed for random restarts and verification states.
    #[arg(long, global = true, env = "QCORR_SEED", default_value_t = 0)]
    seed: u64,
    /// Grid points per Bloch angle for qubit searches.
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Random restarts for subsystems of dimension > 2.
    #[arg(long, global = true, value_name = "N")]
    restarts: Option<usize>,
}

impl OptimizerArgs {
    fn config(&self) -> Result<OptimizerConfig, CliError> {
        let mut c = OptimizerConfig {
            seed: self.seed,
            ..OptimizerConfig::default()
        };
        if let Some(n) = self.grid {
            c.grid_theta = n;
            c.grid_phi = n;
        }
        if let Some(r) = self.restarts {
            c.restarts = r;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropies and mutual information.
    #[command(after_help = STATE_HELP)]
    Info {
        state: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Discord and classical correlation with respect to one subsystem.
    #[command(after_help = STATE_HELP)]
    Discord {
        state: PathBuf,
        /// Measured subsystem (0-based).
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
        #[arg(long)]
        json: bool,
    },
    /// Overall quantum (Q) and classical (C) correlations by sequential
    /// optimal measurement.
    #[command(after_help = STATE_HELP)]
    Overall {
        state: PathBuf,
        /// Measurement order, e.g. `1,0`. Defaults to index order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Also evaluate every order (up to 4 subsystems) and report the
        /// minimum and spread separately.
        #[arg(long)]
        all_orders: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sweep a one-parameter family and write `param,I,D0,D1,Q,C` rows.
    #[command(after_help = WERNER_NOTE)]
    Sweep {
        /// Family to sweep (werner).
        family: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Output file; stdout when absent.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Run built-in verification suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

enum Outcome {
    Done(String),
    Verified { text: String, passed: bool },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = cli.optimizer.config()?;
    let render = |doc: ReportDocument, json: bool| {
        Outcome::Done(if json { doc.to_json() } else { doc.to_text() })
    };
    match &cli.command {
        Command::Info { state, json } => {
            let rho = statefile::load(state)?;
            let doc = ReportDocument::info(
                rho.dims(),
                marginal_entropies(&rho)?,
                von_neumann_entropy(&rho),
                mutual_information(&rho)?,
            );
            Ok(render(doc, *json))
        }
        Command::Discord {
            state,
            subsystem,
            json,
        } => {
            let rho = statefile::load(state)?;
            let r = optimize_measurement(&rho, *subsystem, &config)?;
            Ok(render(
                ReportDocument::discord(rho.dims(), &r, &config),
                *json,
            ))
        }
        Command::Overall {
            state,
            order,
            all_orders: every,
            json,
        } => {
            let rho = statefile::load(state)?;
            let order = order
                .clone()
                .unwrap_or_else(|| (0..rho.num_subsystems()).collect());
            let seq = sequential_measure(&rho, &order, &config)?;
            let sweep = if *every {
                Some(all_orders(&rho, &config)?)
            } else {
                None
            };
            let doc = ReportDocument::overall(rho.dims(), &seq, sweep.as_ref(), &config);
            Ok(render(doc, *json))
        }
        Command::Sweep {
            family,
            from,
            to,
            step,
            csv,
        } => {
            let range = sweep::Range {
                from: *from,
                to: *to,
                step: *step,
            };
            let text = sweep::run(family, range, &config)?;
            match csv {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    Ok(Outcome::Done(String::new()))
                }
                None => Ok(Outcome::Done(text)),
            }
        }
        Command::Verify { suite } => {
            let checks = verify::run(*suite, &config)?;
            Ok(Outcome::Verified {
                text: verify::render(&checks),
                passed: checks.iter().all(verify::Check::passed),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(Outcome::Done(text)) => (text, ExitCode::SUCCESS),
        Ok(Outcome::Verified { text, passed }) => (
            text,
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            },
        ),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CliError::EXIT_CODE);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(CliError::EXIT_CODE);
    }
    code
}
