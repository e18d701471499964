//! Command-line surface for the shuffled-linear-system solver: instance
//! generation, the full solve pipeline, the brute-force oracle, replicated
//! benchmarks, and the built-in worked-example check.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 solver non-convergence or failed extraction.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod bench;
mod output;

use unshuffle_core::instance::{generate_instance, ProblemInstance};
use unshuffle_core::oracle;
use unshuffle_core::pipeline::{run_traced, PipelineConfig};
use unshuffle_core::selfcheck::run_self_check;
use unshuffle_core::solver::{IterTrace, SolverSettings, SolverStatus};
use unshuffle_core::Error as CoreError;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "unshuffle", version, about = "Recover the unknowns of a linear system observed through an unknown shuffle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it in the JSON instance format
    Gen {
        /// Number of unknowns
        #[arg(long)]
        n: usize,
        /// Number of measurements (must exceed n)
        #[arg(long)]
        m: usize,
        /// Signal-to-noise ratio in dB; omit for clean data
        #[arg(long)]
        snr_db: Option<f64>,
        /// Generator seed
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance file end to end and report the recovered solution
    Solve {
        /// Instance JSON file
        #[arg(long = "in")]
        input: PathBuf,
        /// Relaxation order override (default: ceil((n+1)/2))
        #[arg(long)]
        t: Option<usize>,
        /// Number of power-sum equations (default: n+1)
        #[arg(long)]
        eqs: Option<usize>,
        /// Numerical-rank threshold for the certificate and rank sequence
        #[arg(long)]
        rank_tol: Option<f64>,
        /// Iteration cap for the first-order solver
        #[arg(long)]
        max_iter: Option<usize>,
        /// Write a per-iteration trace CSV to this path
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Emit the result record as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all permutations and report the best alignment
    Oracle {
        /// Instance JSON file
        #[arg(long = "in")]
        input: PathBuf,
        /// Enumeration cap on m (m! alignments are solved)
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_M)]
        max_m: usize,
    },
    /// Replicated-trial benchmark over a parameter grid, CSV output
    Bench {
        /// Comma-separated list of n values
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Number of measurements
        #[arg(long)]
        m: usize,
        /// Comma-separated SNR values in dB; omit for clean data
        #[arg(long, value_delimiter = ',')]
        snr_db_list: Vec<f64>,
        /// Trials per configuration
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Seed of trial 0; trial k uses seed_base + k
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        /// Iteration cap override for the solver
        #[arg(long)]
        max_iter: Option<usize>,
        /// Output CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in worked example and verify every check
    VerifyExample,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn exit_code(&self) -> u8 {
        self.code
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::usage(err.to_string())
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Gen {
            n,
            m,
            snr_db,
            seed,
            out,
        } => cmd_gen(n, m, snr_db, seed, out),
        Command::Solve {
            input,
            t,
            eqs,
            rank_tol,
            max_iter,
            trace,
            json,
        } => cmd_solve(input, t, eqs, rank_tol, max_iter, trace, json),
        Command::Oracle { input, max_m } => cmd_oracle(input, max_m),
        Command::Bench {
            n_list,
            m,
            snr_db_list,
            trials,
            seed_base,
            max_iter,
            out,
        } => bench::cmd_bench(n_list, m, snr_db_list, trials, seed_base, max_iter, out)
            .map(|()| ExitCode::SUCCESS),
        Command::VerifyExample => cmd_verify_example(),
    }
}

fn cmd_gen(
    n: usize,
    m: usize,
    snr_db: Option<f64>,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let instance = generate_instance(n, m, snr_db, seed)?;
    let text = instance.to_json();
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn read_instance(path: &std::path::Path) -> Result<ProblemInstance, CliError> {
    ProblemInstance::read_json(path)
        .map_err(|e| CliError::usage(format!("cannot load {}: {e}", path.display())))
}

fn cmd_solve(
    input: PathBuf,
    t: Option<usize>,
    eqs: Option<usize>,
    rank_tol: Option<f64>,
    max_iter: Option<usize>,
    trace_path: Option<PathBuf>,
    json: bool,
) -> Result<ExitCode, CliError> {
    let instance = read_instance(&input)?;
    let mut solver = SolverSettings::default();
    if let Some(r) = rank_tol {
        solver.rank_tol = r;
    }
    if let Some(cap) = max_iter {
        solver.max_iter = cap;
    }
    let config = PipelineConfig {
        t,
        eq_count: eqs,
        solver,
        ..PipelineConfig::default()
    };

    let mut trace_rows: Vec<IterTrace> = Vec::new();
    let result = run_traced(
        &instance,
        &config,
        trace_path.as_ref().map(|_| &mut trace_rows),
    );

    if let Some(path) = &trace_path {
        write_trace(path, &trace_rows)?;
    }

    match result {
        Ok(out) => {
            if json {
                println!("{}", output::solve_record_json(&out));
            } else {
                output::print_solve_text(&out);
            }
            if out.solver.status == SolverStatus::Converged {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_NOT_CONVERGED))
            }
        }
        Err(CoreError::LeadingEntryDegenerate) => {
            // still emit a diagnostic record
            println!(
                "{}",
                serde_json::json!({
                    "error": "leading_entry_degenerate",
                    "detail": CoreError::LeadingEntryDegenerate.to_string(),
                    "n": instance.n,
                    "m": instance.m,
                })
            );
            Ok(ExitCode::from(EXIT_NOT_CONVERGED))
        }
        Err(e) => Err(e.into()),
    }
}

fn write_trace(path: &std::path::Path, rows: &[IterTrace]) -> Result<(), CliError> {
    let mut text = String::from("iter,eq_residual,psd_violation,objective\n");
    for row in rows {
        text.push_str(&format!(
            "{},{:e},{:e},{:e}\n",
            row.iter, row.eq_residual, row.psd_violation, row.objective
        ));
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_oracle(input: PathBuf, max_m: usize) -> Result<ExitCode, CliError> {
    let instance = read_instance(&input)?;
    let result = oracle::brute_force(&instance.a, instance.y.as_slice(), max_m)
        .map_err(|e| CliError::usage(e.to_string()))?;
    println!("{}", output::oracle_record_json(&result));
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_example() -> Result<ExitCode, CliError> {
    let report = run_self_check()?;
    println!("worked-example system:");
    for (k, q) in report.system.iter().enumerate() {
        println!("q{}:", k + 1);
        print!("{q}");
    }
    println!();
    let mut passed = 0;
    for check in &report.checks {
        println!(
            "check {}: {} ({})",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            check.detail
        );
        if check.passed {
            passed += 1;
        }
    }
    println!("{passed}/{} checks passed", report.checks.len());
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}
