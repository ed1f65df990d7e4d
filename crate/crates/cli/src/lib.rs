//! Command-line front end for `graver-ugb`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input,
//! 3 the input violates a precondition of the requested computation.

pub mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graver_ugb::{
    check_equality, graver_basis_with, graver_complexity, graver_complexity_literal, run_selfcheck,
    verify_paper, Budget, Engine, EqualityOptions, Error, Family, FamilyLabel, GraverOptions,
    IntMatrix, PaperOptions, Partition, DEFAULT_SEED,
};

use crate::format::{parse_matrix, print_matrix, print_vector_set, FormatError};

/// Environment variable overriding the per-case time guard, in seconds.
pub const TIMEOUT_ENV: &str = "GRAVER_UGB_CASE_TIMEOUT_SECS";
pub const DEFAULT_TIMEOUT_SECS: u64 = 1800;

#[derive(Debug, Parser)]
#[command(
    name = "graver-ugb",
    version,
    about = "Graver bases and universal Gröbner bases of toric ideals"
)]
pub struct Cli {
    /// Worker threads for parallel membership tests.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the matrix of a scroll (S) or colored-partition (H) family member.
    Matrix(MatrixArgs),
    /// Compute the Graver basis of a matrix file.
    Graver {
        input: PathBuf,
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EngineArg::ProjectAndLift)]
        engine: EngineArg,
    },
    /// Compute the universal Gröbner basis of a nonnegative matrix file.
    Ugb {
        input: PathBuf,
        output: Option<PathBuf>,
    },
    /// Run the verification report.
    VerifyPaper(VerifyArgs),
    /// Print the Graver complexity g(C,D).
    Complexity {
        c: PathBuf,
        d: PathBuf,
        /// Use the full matrix D·G(C) instead of its reduced column set.
        #[arg(long)]
        literal: bool,
    },
    /// Run the seeded randomized cross-checks.
    Selfcheck {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Brute-force primitive kernel vectors up to a 1-norm bound.
    #[command(hide = true)]
    Oracle {
        input: PathBuf,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Scroll degrees for S, partition parts for H, comma-separated.
    #[arg(
        long,
        conflicts_with = "partition",
        required_unless_present = "partition"
    )]
    pub label: Option<String>,
    /// Partition parts, comma-separated (column block sizes).
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = BudgetArg::Small)]
    pub budget: BudgetArg,
    /// Run a single case, e.g. `S6` or `H(4,3)`.
    #[arg(long)]
    pub case: Option<String>,
    /// Directory receiving report.txt and report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock times in the reports.
    #[arg(long)]
    pub timings: bool,
    /// Largest column count of the classification sweep.
    #[arg(long, default_value_t = 8)]
    pub sweep_columns: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BudgetArg {
    Small,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    ProjectAndLift,
    Pottier,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<IntMatrix, Failure> {
    parse_matrix(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parts(s: &str) -> Result<Vec<usize>, Failure> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::input(format!("bad label entry {t:?}")))
        })
        .collect()
}

fn family_label(args: &MatrixArgs) -> Result<FamilyLabel, Failure> {
    let invalid = |e: Error| Failure::input(e.to_string());
    match (&args.label, &args.partition) {
        (_, Some(p)) => {
            let partition = Partition::new(parts(p)?).map_err(invalid)?;
            Ok(FamilyLabel {
                family: args.family,
                partition,
            })
        }
        (Some(l), None) => match args.family {
            Family::S => FamilyLabel::scroll(&parts(l)?).map_err(invalid),
            Family::H => FamilyLabel::h(&parts(l)?).map_err(invalid),
        },
        (None, None) => Err(Failure::input("either --label or --partition is required")),
    }
}

/// The per-case guard from the environment, or the default.
pub fn case_timeout() -> Result<Duration, Failure> {
    match std::env::var(TIMEOUT_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map(Duration::from_secs)
            .map_err(|_| {
                Failure::input(format!(
                    "{TIMEOUT_ENV} must be a whole number of seconds, got {v:?}"
                ))
            }),
        Err(_) => Ok(Duration::from_secs(DEFAULT_TIMEOUT_SECS)),
    }
}

fn precondition_error(e: Error) -> Failure {
    match e {
        Error::UnboundedFiber
        | Error::NegativeRhs
        | Error::InvalidArgument(_)
        | Error::NotInKernel
        | Error::ZeroVector
        | Error::NotInFiber
        | Error::SupportNotContained => Failure::precondition(e.to_string()),
        Error::DimensionMismatch { .. } | Error::InvalidPartition(_) => {
            Failure::input(e.to_string())
        }
        Error::Timeout | Error::Overflow => Failure {
            code: 1,
            message: e.to_string(),
        },
    }
}

/// Runs one command; stdout carries the result, the returned code the status.
pub fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Matrix(args) => {
            let label = family_label(&args)?;
            emit(args.out.as_deref(), &print_matrix(&label.matrix()))?;
            Ok(0)
        }
        Command::Graver {
            input,
            output,
            engine,
        } => {
            let a = read_matrix(&input)?;
            let engine = match engine {
                EngineArg::ProjectAndLift => Engine::ProjectAndLift,
                EngineArg::Pottier => Engine::Pottier,
            };
            let g = graver_basis_with(
                &a,
                &GraverOptions {
                    engine,
                    deadline: None,
                },
            )
            .map_err(precondition_error)?;
            emit(output.as_deref(), &print_vector_set(a.cols(), g.elements()))?;
            Ok(0)
        }
        Command::Ugb { input, output } => {
            let a = read_matrix(&input)?;
            if a.has_zero_column() {
                return Err(Failure::precondition(
                    "matrix has a zero column, so its fibers are infinite",
                ));
            }
            if !a.is_nonnegative() {
                return Err(Failure::precondition("matrix has a negative entry"));
            }
            let check =
                check_equality(&a, &EqualityOptions::default()).map_err(precondition_error)?;
            let g = graver_basis_with(&a, &GraverOptions::default()).map_err(precondition_error)?;
            let ugb: Vec<_> = g
                .elements()
                .iter()
                .filter(|e| !check.witnesses.contains(e))
                .cloned()
                .collect();
            emit(output.as_deref(), &print_vector_set(a.cols(), &ugb))?;
            Ok(0)
        }
        Command::VerifyPaper(args) => verify(args),
        Command::Complexity { c, d, literal } => {
            let (c, d) = (read_matrix(&c)?, read_matrix(&d)?);
            if c.cols() != d.cols() {
                return Err(Failure::input(format!(
                    "C has {} columns but D has {}",
                    c.cols(),
                    d.cols()
                )));
            }
            let report = if literal {
                graver_complexity_literal(&c, &d)
            } else {
                graver_complexity(&c, &d)
            }
            .map_err(precondition_error)?;
            println!("{}", report.complexity);
            Ok(0)
        }
        Command::Selfcheck { seed } => {
            let report = run_selfcheck(seed).map_err(precondition_error)?;
            print!("{}", report.render());
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Oracle { input, bound } => {
            let a = read_matrix(&input)?;
            let found = graver_ugb::enumerate_kernel_bounded(&a, bound)
                .map_err(|e| Failure::input(e.to_string()))?;
            print!(
                "{}",
                print_vector_set(a.cols(), &graver_ugb::filter_primitive(&found))
            );
            Ok(0)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<i32, Failure> {
    let budget = match args.budget {
        BudgetArg::Small => Budget::Small,
        BudgetArg::Extended => Budget::Extended,
    };
    let case = args
        .case
        .as_deref()
        .map(FamilyLabel::parse)
        .transpose()
        .map_err(|e| Failure::input(e.to_string()))?;
    let opts = PaperOptions {
        budget,
        case,
        guard: Some(case_timeout()?),
        sweep_columns: args.sweep_columns,
    };
    let mut report = verify_paper(&opts).map_err(|e| match e {
        Error::InvalidArgument(m) => Failure::input(m),
        other => precondition_error(other),
    })?;
    if !args.timings {
        report = report.without_timings();
    }
    let text = report.render_text();
    print!("{text}");
    if let Some(dir) = &args.out {
        let io = |e: std::io::Error| Failure::input(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join("report.txt"), &text).map_err(io)?;
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(dir.join("report.json"), json + "\n").map_err(io)?;
    }
    if report.passed() {
        Ok(0)
    } else {
        eprintln!("failed: {}", report.failures().join(", "));
        Ok(1)
    }
}
