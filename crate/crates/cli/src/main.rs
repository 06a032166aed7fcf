//! Command-line front end: reproducible experiments over the biased
//! subspace measure with machine-readable output.
//!
//! Exit codes: 0 success, 2 usage or invalid parameters, 3 enumeration or
//! vertex cap exceeded, 4 a verified invariant failed.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{OutputFormat, Sink};

#[derive(Parser)]
#[command(name = "qekr", version, about = "Biased measures and extremal bounds on subspace lattices")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Significand bits for real-mode arithmetic (env QEKR_PRECISION_BITS)
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Significand bits for tail computations (env QEKR_TAIL_PRECISION_BITS)
    #[arg(long, global = true)]
    tail_precision_bits: Option<usize>,
    /// Worker threads for parallel search (env QEKR_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on materialized subspaces per enumeration (env QEKR_ENUM_CAP)
    #[arg(long, global = true)]
    enum_cap: Option<u64>,
    /// Cap on search vertices (env QEKR_MAX_VERTICES)
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Output format; JSON is canonical, CSV a projection for tabular commands
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
pub enum TailClaim {
    /// mass above n/2, normalized by q^{(1-theta)tn}
    Upper,
    /// mass below (n+t)/2, normalized by q^{delta n^2}
    Lower,
    /// mass above (n-t-1)/2, normalized by q^{2tn}
    Cross,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
pub enum LimitKind {
    /// star measure and its n-th root against the limit value
    Star,
    /// dimension-threshold family mass and root
    Bn,
    /// cross product-of-stars lower bound
    G,
}

#[derive(Subcommand)]
enum Command {
    /// Layer masses and the measures of the named families
    Measure {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        /// bias as a rational "a/b" or decimal
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// core dimension for the star and threshold families
        #[arg(long, default_value_t = 1)]
        t: u32,
    },
    /// Stream subspaces of F_q^n, one per line
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        /// restrict to one layer
        #[arg(long)]
        k: Option<u32>,
        /// compact hex rows instead of JSON
        #[arg(long)]
        hex: bool,
    },
    /// Exact maximum-measure t-intersecting search
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// wall-clock budget in seconds; best-so-far on expiry
        #[arg(long)]
        time_budget_secs: Option<f64>,
        /// cap on reported optimal families
        #[arg(long)]
        max_optima: Option<usize>,
    },
    /// Threshold, block spectrum, and optionally the full float assembly
    Certify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// assemble the full lattice matrix and verify spectrum and kernel
        #[arg(long)]
        full: bool,
    },
    /// Normalized tail decay rows over an n-grid
    Tails {
        #[arg(long, value_enum)]
        claim: TailClaim,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        n_step: u32,
        /// exponent constant for the lower-tail claim (default (theta-1/2)^2/4)
        #[arg(long)]
        delta: Option<String>,
    },
    /// Convergence rows for star roots, threshold-family roots, or the
    /// cross lower bound
    Limits {
        #[arg(long, value_enum)]
        kind: LimitKind,
        #[arg(long)]
        theta: String,
        /// second bias exponent for the cross bound (defaults to theta)
        #[arg(long)]
        theta2: Option<String>,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        n_step: u32,
    },
    /// Concentration moments: closed forms against direct sums
    Moments {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
    /// Search optimum against the star measure at the conjectural bias
    Conjecture {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
    },
    /// The two small-n product-bound counterexamples, in exact integers
    Counterexample {
        /// subspace pair at n = l + 1
        #[arg(long)]
        subspace: bool,
        /// subset-world binomial arithmetic
        #[arg(long)]
        subset: bool,
        #[arg(long, default_value_t = 3)]
        l: u64,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long)]
        n: Option<u64>,
    },
}

/// Fully resolved run configuration, echoed in every output header.
#[derive(Clone, serde::Serialize)]
pub struct RunConfig {
    pub version: String,
    pub command: String,
    pub precision_bits: usize,
    pub tail_precision_bits: usize,
    pub threads: usize,
    pub enum_cap: u64,
    pub max_vertices: usize,
    pub format: String,
}

fn env_parse<T: std::str::FromStr>(key: &str) -> Option<T> {
    std::env::var(key).ok().and_then(|v| v.parse().ok())
}

impl GlobalOpts {
    fn resolve(&self, command: &str) -> RunConfig {
        let format = match self.format {
            Some(FormatArg::Csv) => "csv",
            _ => "json",
        };
        RunConfig {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            precision_bits: self
                .precision_bits
                .or_else(|| env_parse("QEKR_PRECISION_BITS"))
                .unwrap_or(qekr::DEFAULT_PRECISION_BITS),
            tail_precision_bits: self
                .tail_precision_bits
                .or_else(|| env_parse("QEKR_TAIL_PRECISION_BITS"))
                .unwrap_or(qekr::TAIL_PRECISION_BITS),
            threads: self.threads.or_else(|| env_parse("QEKR_THREADS")).unwrap_or(1),
            enum_cap: self
                .enum_cap
                .or_else(|| env_parse("QEKR_ENUM_CAP"))
                .unwrap_or(qekr::gfspace::DEFAULT_ENUM_CAP),
            max_vertices: self
                .max_vertices
                .or_else(|| env_parse("QEKR_MAX_VERTICES"))
                .unwrap_or(400),
            format: format.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Measure { .. } => "measure",
        Command::Enumerate { .. } => "enumerate",
        Command::Search { .. } => "search",
        Command::Certify { .. } => "certify",
        Command::Tails { .. } => "tails",
        Command::Limits { .. } => "limits",
        Command::Moments { .. } => "moments",
        Command::Conjecture { .. } => "conjecture",
        Command::Counterexample { .. } => "counterexample",
    };
    let config = cli.global.resolve(name);
    let format = match config.format.as_str() {
        "csv" => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    let mut sink = match Sink::open(cli.global.output.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Measure { q, n, ref sigma, t } => {
            commands::measure(&config, format, &mut sink, q, n, sigma, t)
        }
        Command::Enumerate { q, n, k, hex } => {
            commands::enumerate(&config, &mut sink, q, n, k, hex)
        }
        Command::Search { q, n, ref sigma, t, time_budget_secs, max_optima } => {
            commands::search(&config, format, &mut sink, q, n, sigma, t, time_budget_secs, max_optima)
        }
        Command::Certify { q, n, ref sigma, full } => {
            commands::certify(&config, format, &mut sink, q, n, sigma, full)
        }
        Command::Tails { claim, ref theta, t, q, n_min, n_max, n_step, ref delta } => {
            commands::tails(&config, format, &mut sink, claim, theta, t, q, n_min, n_max, n_step, delta.as_deref())
        }
        Command::Limits { kind, ref theta, ref theta2, t, q, n_min, n_max, n_step } => {
            commands::limits(&config, format, &mut sink, kind, theta, theta2.as_deref(), t, q, n_min, n_max, n_step)
        }
        Command::Moments { ref theta, q, n } => {
            commands::moments(&config, format, &mut sink, theta, q, n)
        }
        Command::Conjecture { ref p, q, t, n_min, n_max } => {
            commands::conjecture(&config, format, &mut sink, p, q, t, n_min, n_max)
        }
        Command::Counterexample { subspace, subset, l, q, k, n } => {
            commands::counterexample(&config, format, &mut sink, subspace, subset, l, q, k, n)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
