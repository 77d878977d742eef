use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Decide subtorus containment and torsion points of sparse integer
/// polynomial systems.
#[derive(Debug, Parser)]
#[command(name = "torsion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is the subtorus T contained in the zero set of the products?
    /// Exit 0 = YES, 1 = NO, 2 = inconclusive or error.
    Subtorus(SubtorusArgs),
    /// Does the system vanish at a tuple of roots of unity?
    /// Exit 0 = YES, 1 = NO, 2 = inconclusive or error, 3 = no prime found.
    Torsion(TorsionArgs),
    /// Exact ground truth for small instances. Exit 2 if a cap is exceeded.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Unbounded searches and the computed sampling constants.
    Conformance,
    /// Bounded searches; verdicts are marked non-conforming.
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON instance file: {"system": [[poly, ...], ...], "orders": [...]}.
    #[arg(long, value_name = "FILE", conflicts_with = "poly")]
    pub input: Option<std::path::PathBuf>,
    /// One product of the system; factors are separated by `;`. Repeatable.
    #[arg(long, value_name = "STR")]
    pub poly: Vec<String>,
    /// Comma-separated orders d_1,...,d_r; overrides the file.
    #[arg(long, value_name = "LIST")]
    pub orders: Option<String>,
    /// Subtorus exponent vectors, rows separated by `;`, e.g. "2,0;0,3".
    #[arg(long, value_name = "MATRIX")]
    pub dbars: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Mode::Practical)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random points tried before the exhaustive sweep.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Points visited by the sweep before giving up (practical mode only).
    #[arg(long)]
    pub sweep_cap: Option<u64>,
    /// Use q = c*lcm(d) + 1.
    #[arg(long, conflicts_with = "pin_q")]
    pub pin_c: Option<String>,
    /// Use this prime q.
    #[arg(long)]
    pub pin_q: Option<String>,
}

#[derive(Debug, Args)]
pub struct SubtorusArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Linnik exponent: the prime search scans c up to M^C0.
    #[arg(long, default_value_t = 5.5)]
    pub c0: f64,
}

#[derive(Debug, Args)]
pub struct TorsionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// The APH constant C >= 1.
    #[arg(long, default_value_t = 1.0)]
    pub aph_c: f64,
    /// Multiplier cap K in practical mode.
    #[arg(long)]
    pub k_cap: Option<String>,
    /// Number of multipliers J drawn in practical mode.
    #[arg(long)]
    pub trials: Option<String>,
    /// Candidate root mod q, comma-separated, checked before searching. Repeatable.
    #[arg(long, value_name = "LIST")]
    pub witness: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub query: OracleQuery,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    /// The cyclotomic polynomial Phi_m.
    Cyclotomic {
        m: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Res(f, x^d - 1) for univariate f, printed as |value| and sign.
    Resultant(InputArgs),
    /// First torsion point of the system in lexicographic index order.
    BruteForce {
        #[command(flatten)]
        input: InputArgs,
        /// Maximum number of points enumerated.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Does the prime q give a spurious root of unity for f?
    Exceptional {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        q: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Subtorus(a) => commands::subtorus(&a),
        Command::Torsion(a) => commands::torsion(&a),
        Command::Oracle(a) => commands::oracle(&a),
    };
    match result {
        Ok(report) => {
            print!("{}", report.body);
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
