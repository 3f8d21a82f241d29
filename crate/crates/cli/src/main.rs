mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::{error_json, InputError};
use superelliptic::zeta::DEFAULT_BUDGET;

/// Torsion points on superelliptic curves y^d = f(x).
///
/// Every command prints a JSON report on stdout. Exit code 0 means pass,
/// 1 fail, 2 bad input.
#[derive(Parser)]
#[command(name = "superelliptic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a curve file (`-` for stdin).
    Validate { curve: PathBuf },
    /// Order of the points over x = A, or of (A, C) alone.
    Order {
        curve: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: Option<String>,
        #[arg(long, default_value_t = 64)]
        max: u32,
    },
    /// Points of order d.
    OrderD { curve: PathBuf },
    /// Packets of points of order n.
    Packets {
        curve: PathBuf,
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// The two Picard quartics with order-4 packets over 0 and -1.
    Picard {
        #[arg(long)]
        dump: bool,
    },
    /// L-polynomial and Jacobian order over a finite field.
    Zeta {
        curve: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Randomized and exhaustive checks of the torsion statements.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Gap law on random curves over F_p.
    Gap {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 25)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One packet on every x^n + (bx+1)^d, n a power of p.
    UniquenessCharp {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Degree of the field extension of F_p; defaults to the smallest containing the d-th roots of unity.
        #[arg(long)]
        ext: Option<usize>,
    },
    /// Rationality of the cross-ratio of 1, e, e^2, e^3 for 4 <= n <= nmax.
    LemmaGen {
        #[arg(long)]
        nmax: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Order { .. } => "order",
            Command::OrderD { .. } => "order-d",
            Command::Packets { .. } => "packets",
            Command::Picard { .. } => "picard",
            Command::Zeta { .. } => "zeta",
            Command::Verify { check: Check::Gap { .. } } => "verify gap",
            Command::Verify { check: Check::UniquenessCharp { .. } } => "verify uniqueness-charp",
            Command::Verify { check: Check::LemmaGen { .. } } => "verify lemma-gen",
        }
    }

    fn run(self) -> commands::CmdResult {
        match self {
            Command::Validate { curve } => commands::validate(&commands::load_curve(&curve)?),
            Command::Order { curve, x, y, max } => {
                commands::order(&commands::load_curve(&curve)?, &x, y.as_deref(), max)
            }
            Command::OrderD { curve } => commands::order_d(&commands::load_curve(&curve)?),
            Command::Packets { curve, candidates } => commands::packets(&commands::load_curve(&curve)?, &candidates),
            Command::Picard { dump } => commands::picard(dump),
            Command::Zeta { curve, budget } => commands::zeta(&commands::load_curve(&curve)?, budget),
            Command::Verify { check } => match check {
                Check::Gap { p, d, n, trials, seed } => commands::verify_gap(p, d, n, trials, seed),
                Check::UniquenessCharp { p, n, d, ext } => commands::verify_uniqueness_charp(p, n, d, ext),
                Check::LemmaGen { nmax } => commands::verify_lemma_gen(nmax),
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = InputError::new("usage", e.to_string().trim_end());
            println!("{}", error_json("", &err));
            return ExitCode::from(2);
        }
    };
    let name = cli.command.name();
    let start = Instant::now();
    let outcome = cli.command.run();
    eprintln!("{name}: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(report) => {
            println!("{}", report.to_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(err) => {
            println!("{}", error_json(name, &err));
            ExitCode::from(2)
        }
    }
}
