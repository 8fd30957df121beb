//! `tropical-map`: solve, check, sample and brute-force max-atom systems.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;
use tropical_map::maxplus::Scalar;
use tropical_map::model::{parse_atoms, MapSystem};
use tropical_map::nonpositive::SolutionStatus;
use tropical_map::oracle::{
    check, completeness_report, grid_enumerate, violations, Grid, OracleError, DEFAULT_BUDGET,
};
use tropical_map::solve::{solve, PipelineError, Solution, Solved};

use report::{vector, CheckReport, OracleReport, OutputReport};

const BUDGET_VAR: &str = "TROPICAL_MAP_BUDGET";

#[derive(Parser)]
#[command(
    name = "tropical-map",
    version,
    about = "Solve systems of max-atom inequalities x <= a + max(y, z)"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the solution set and print its greatest or trivial solution.
    Solve { file: PathBuf },
    /// Test a vector such as "0,-11,-10,-11" against the atoms.
    Check {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
    /// Draw random solutions, each verified against the atoms.
    Sample {
        file: PathBuf,
        #[arg(long, short = 'n', default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate grid solutions and compare them with the solver's description.
    Oracle {
        file: PathBuf,
        /// Grid values are -inf and the integers in [-M, M].
        #[arg(long, value_name = "M")]
        grid: Option<i64>,
        /// Maximum number of grid points (default 10^7, or $TROPICAL_MAP_BUDGET).
        #[arg(long, value_name = "N")]
        budget: Option<u128>,
        /// Print every grid solution.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Contract(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Usage(String),
    /// `check` found violated atoms; the report is already printed.
    #[error("vector is not a solution")]
    NotASolution,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::NotASolution => 1,
            CliError::Syntax(_) => 2,
            CliError::Contract(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Usage(_) => 64,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        CliError::Contract(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            OracleError::Arity { .. } => CliError::Syntax(e.to_string()),
        }
    }
}

fn read_system(path: &Path) -> Result<MapSystem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_atoms(&text).map_err(|e| CliError::Syntax(format!("{}: {e}", path.display())))
}

/// Accepts `0,-11,-10`, `[0, -inf, 3/2]` or space-separated values.
fn parse_vector(text: &str) -> Result<Vec<Scalar>, CliError> {
    let body = text
        .trim()
        .trim_start_matches(['[', '('])
        .trim_end_matches([']', ')']);
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<Scalar>()
                .map_err(|e| CliError::Syntax(format!("vector entry `{s}`: {e}")))
        })
        .collect()
}

fn budget(flag: Option<u128>) -> Result<u128, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_VAR}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Text => print!("{}", text()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        ),
    }
}

/// Every printed vector goes through the oracle first.
fn verified(x: Vec<Scalar>, sys: &MapSystem) -> Result<Vec<String>, CliError> {
    if !check(&x, sys) {
        return Err(CliError::Contract(format!(
            "internal error: {} does not satisfy the system",
            vector(&x).join(" ")
        )));
    }
    Ok(vector(&x))
}

/// The greatest solution at free values 0, the bottom vector, or the
/// trivial positive solution.
fn representative(solved: &Solved) -> Result<Vec<Scalar>, CliError> {
    let n = solved.system.n();
    match &solved.solution {
        Solution::NonPositive(desc) if desc.status == SolutionStatus::OnlyBottom => {
            Ok(vec![Scalar::ZERO; n])
        }
        Solution::NonPositive(desc) => desc
            .sup_solution(&vec![Scalar::ONE; desc.k_prime])
            .map_err(|e| CliError::Contract(e.to_string())),
        Solution::Positive(ps) => Ok(ps.trivial_solution()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Solve { file } => {
            let input = read_system(&file)?;
            let solved = solve(&input)?;
            let mut report = OutputReport::new(&solved);
            report
                .samples
                .push(verified(representative(&solved)?, &input)?);
            emit(format, &report, || report.to_text());
        }
        Command::Check { file, vector } => {
            let input = read_system(&file)?;
            let x = parse_vector(&vector)?;
            let found = violations(&x, &input)?;
            let report = CheckReport::new(&input, &found);
            emit(format, &report, || report.to_text());
            if !report.pass {
                return Err(CliError::NotASolution);
            }
        }
        Command::Sample { file, count, seed } => {
            let input = read_system(&file)?;
            let solved = solve(&input)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut report = OutputReport::new(&solved);
            for x in solved.sample(count, &mut rng)? {
                report.samples.push(verified(x, &input)?);
            }
            emit(format, &report, || {
                report.samples.iter().map(|x| x.join(" ") + "\n").collect()
            });
        }
        Command::Oracle {
            file,
            grid,
            budget: flag,
            list,
        } => {
            let input = read_system(&file)?;
            let budget = budget(flag)?;
            let grid = match grid {
                Some(m) if m < 0 => {
                    return Err(CliError::Usage(format!("grid bound {m} is negative")))
                }
                Some(m) => Grid::new(m, input.n()),
                None => Grid::default_for(&input),
            };
            let m = (grid.values.len() as i64 - 2) / 2;
            let solutions = grid_enumerate(&input, &grid, budget)?;
            let mut report = OracleReport::new(m, grid.points(), &solutions, list);
            let solved = solve(&input)?;
            if let Solution::NonPositive(desc) = &solved.solution {
                report.add_completeness(&completeness_report(desc, &input, &grid, budget)?);
            }
            if format == Format::Json {
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
            }
            emit(format, &report, || report.to_text());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::NotASolution) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
