//! `molwb`: decide, refute and explore identities over modular ortholattices.
//!
//! Exit codes: 0 when the identity holds (or is valid up to the search
//! budget, or a system has no solution within budget), 1 when a refutation
//! or satisfying assignment was found, 2 on any error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use molwb_core::feas::{Method, SolveParams};
use molwb_core::FieldTag;

use commands::Report;

#[derive(Parser)]
#[command(name = "molwb", version, about = "Decide, refute and explore identities over modular ortholattices")]
struct Cli {
    /// Worker threads for parallel searches (0 = one per core).
    #[arg(long, global = true, env = "MOLWB_THREADS")]
    threads: Option<usize>,
    /// Print the wall-clock time of the command to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SystemFormat {
    Json,
    Smt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Lbfgs,
    Gd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// x·Σ y_i = Σ_j x·Σ_{i≠j} y_i over y0..yd
    DeltaDist,
    /// The diamond form of the same separating identity
    DeltaDiamond,
    /// σ_{d,m}; needs both d and m
    Sigma,
    /// The d+1 diamond terms
    Diamond,
}

fn field_tag(s: &str) -> Result<FieldTag, String> {
    s.parse::<FieldTag>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force an identity in a finite model, or evaluate it under a
    /// subspace assignment file.
    Check {
        identity: String,
        /// Catalog name such as `mo(3)` or `mo(2)xboolean(1)`, or a model file.
        #[arg(long, required_unless_present = "assignment", conflicts_with = "assignment")]
        model: Option<String>,
        #[arg(long)]
        assignment: Option<PathBuf>,
        /// Largest number of assignments to enumerate.
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Search random subspace assignments in L(F^d), d = 1 up to the bound.
    Refute {
        identity: String,
        #[arg(long, default_value = "Q", value_parser = field_tag)]
        field: FieldTag,
        /// Cap on the dimension; the bound never exceeds the identity length.
        #[arg(long)]
        dmax: Option<usize>,
        /// Trials per dimension (default 64·2^d, at most 16384).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the witness as an assignment file.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Look for an assignment satisfying every equation in a file (one per
    /// line, `#` starts a comment).
    Sat {
        file: PathBuf,
        #[arg(long, default_value = "Q", value_parser = field_tag)]
        field: FieldTag,
        #[arg(long, default_value_t = 3)]
        dcap: usize,
        /// Random assignments per dimension.
        #[arg(long, default_value_t = 256)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Print a generated identity or the diamond terms.
    Gen {
        #[arg(value_enum)]
        family: Family,
        d: usize,
        m: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Emit the polynomial system for "identity fails in L(R^d)".
    Encode {
        identity: String,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = SystemFormat::Json)]
        format: SystemFormat,
        /// Encode over Q(i)^d through its real form R^{2d}.
        #[arg(long)]
        gaussian: bool,
    },
    /// Minimize the penalty of the encoded system and verify any solution
    /// exactly in L(Q^d).
    Solve {
        identity: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 32)]
        restarts: u64,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0.5)]
        backtrack: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SolveMethod::Lbfgs)]
        method: SolveMethod,
        /// Correction pairs kept by L-BFGS.
        #[arg(long, default_value_t = 10)]
        memory: usize,
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Finite model utilities.
    Models {
        #[command(subcommand)]
        command: ModelsCommand,
    },
}

#[derive(Subcommand)]
enum ModelsCommand {
    /// Check the MOL axioms and print the report.
    Validate {
        /// Catalog name or model file.
        model: String,
        #[command(flatten)]
        out: Output,
    },
}

fn run(command: Command) -> anyhow::Result<(Report, Option<Format>)> {
    Ok(match command {
        Command::Check { identity, model, assignment, cap, out } => {
            let report = match (model, assignment) {
                (Some(m), _) => commands::check_model(&identity, &m, cap)?,
                (None, Some(path)) => commands::check_assignment(&identity, &path)?,
                (None, None) => unreachable!("clap requires one of --model and --assignment"),
            };
            (report, Some(out.format))
        }
        Command::Refute { identity, field, dmax, trials, seed, witness_out, out } => {
            let report = commands::refute(&identity, field, dmax, trials, seed, witness_out.as_deref())?;
            (report, Some(out.format))
        }
        Command::Sat { file, field, dcap, trials, seed, out } => {
            (commands::sat(&file, field, dcap, trials, seed)?, Some(out.format))
        }
        Command::Gen { family, d, m, out } => (commands::generate(family, d, m)?, Some(out.format)),
        Command::Encode { identity, d, format, gaussian } => {
            (commands::encode(&identity, d, format == SystemFormat::Smt, gaussian)?, None)
        }
        Command::Solve {
            identity,
            d,
            tol,
            restarts,
            max_iters,
            backtrack,
            seed,
            method,
            memory,
            witness_out,
            out,
        } => {
            let params = SolveParams {
                tol,
                restarts,
                max_iters,
                backtrack,
                seed,
                method: match method {
                    SolveMethod::Lbfgs => Method::Lbfgs,
                    SolveMethod::Gd => Method::GradientDescent,
                },
                memory,
            };
            (commands::solve(&identity, d, &params, witness_out.as_deref())?, Some(out.format))
        }
        Command::Models { command: ModelsCommand::Validate { model, out } } => {
            (commands::validate(&model)?, Some(out.format))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(cli.command);
    if cli.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok((report, format)) => {
            match format {
                Some(Format::Json) => println!("{}", report.json),
                _ => println!("{}", report.text),
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
