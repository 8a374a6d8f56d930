use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psieve_core::Error;

mod commands;
mod output;

/// Exit status for usage errors (BSD `EX_USAGE`).
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "psieve", version, about = "Piatetski-Shapiro primes and almost-prime companions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// γ value(s): decimals or fractions, comma separated (e.g. 0.999,85/86).
    #[arg(long, global = true, value_delimiter = ',')]
    pub gamma: Vec<String>,
    /// Upper bound x (integers, `1e6` accepted; comma list for identity-check).
    #[arg(long, global = true, value_delimiter = ',')]
    pub x: Vec<String>,
    /// Level ξ (defaults to the main level at the given γ).
    #[arg(long, global = true)]
    pub xi: Option<f64>,
    #[arg(long, global = true)]
    pub eps: Option<String>,
    #[arg(long, global = true)]
    pub eta: Option<String>,
    /// Residue class a.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<i64>,
    /// Almost-prime order of p + 2.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Power of log x in the discrepancy reference scale.
    #[arg(long = "A", global = true)]
    pub log_power: Option<f64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (falls back to PSIEVE_THREADS, then all cores).
    #[arg(long, global = true, env = "PSIEVE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// π_γ(x), the number of PS primes up to x.
    Count,
    /// PS primes p <= x with Ω(p + 2) <= r.
    Scan,
    /// Discrepancy of PS primes in progressions a mod d, d <= x^ξ.
    Bv,
    /// Level-of-distribution values and feasibility of the constraint set.
    Levels,
    /// Apply an A/B word to an exponent pair.
    Pairs {
        #[arg(long, default_value = "AA")]
        word: String,
        /// Starting pair as "κ,ℓ".
        #[arg(long, default_value = "1/2,1/2")]
        start: String,
    },
    /// The sieve bracket Φ(γ) on a γ grid.
    Phi,
    /// The γ at which Φ changes sign.
    Threshold,
    /// The Richert and triple integrals with error estimates.
    Integrals,
    /// Check the Heath-Brown identity on (X, 2X].
    IdentityCheck,
    /// Main term of the four-prime set against its integral prediction.
    Bset,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::PrecisionExhausted { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let g = &cli.global;
    let result = match &cli.command {
        Command::Count => commands::count(g),
        Command::Scan => commands::scan(g),
        Command::Bv => commands::bv(g),
        Command::Levels => commands::levels(g),
        Command::Pairs { word, start } => commands::pairs(g, word, start),
        Command::Phi => commands::phi(g),
        Command::Threshold => commands::threshold(g),
        Command::Integrals => commands::integrals(g),
        Command::IdentityCheck => commands::identity_check(g),
        Command::Bset => commands::bset(g),
    }
    .and_then(|text| output::write(g, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
