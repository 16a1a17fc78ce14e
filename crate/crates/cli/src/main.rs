//! `quartic`: experiments and verification suites for quartic Gauss sums.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quartic_core::reduce::Precision;
use quartic_core::{BetaClass, GaussInt};

use config::{parse_precision, OutputFormat, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "quartic", version, about = "Quartic Gauss sums over Z[i]: experiments and verification suites")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Global {
    /// key = value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the parallel stages
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// double | compensated
    #[arg(long, global = true, value_parser = parse_precision)]
    precision: Option<Precision>,
    /// Gauss-sum cache directory (default: $QUARTIC_CACHE_DIR, else no cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write machine-readable results here
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// csv | json (default: from the output extension, else csv)
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quartic or quadratic residue symbol (α/γ)
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        alpha: GaussInt,
        #[arg(long, allow_hyphen_values = true)]
        gamma: GaussInt,
        #[arg(long, default_value_t = 4, value_parser = parse_order)]
        order: u8,
    },
    /// g₄(ν, c) (or g₂ with --order 2)
    GaussSum {
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        nu: GaussInt,
        #[arg(long, allow_hyphen_values = true)]
        c: GaussInt,
        #[arg(long, default_value_t = 4, value_parser = parse_order)]
        order: u8,
        /// Also evaluate the defining sum and compare
        #[arg(long)]
        direct: bool,
    },
    /// The full identity battery
    Identities {
        /// Small ranges, for a smoke test
        #[arg(long)]
        quick: bool,
        /// Largest prime norm for the prime evaluations
        #[arg(long)]
        prime_max: Option<u64>,
        /// Random pairs for twisted multiplicativity
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// S(X)/X^{3/4} along a grid of X
    ConjectureScan {
        /// lo:hi:geometricN, or a comma-separated list
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        #[arg(long)]
        beta: Option<BetaClass>,
    },
    /// Weyl moments Σ g̃₄(π)^k by direct powers and by reduction
    Moments {
        #[arg(long)]
        x: Option<f64>,
        /// Comma-separated nonzero exponents
        #[arg(long, allow_hyphen_values = true, default_value = "1,2,3,4,-1,-2,-3,-4")]
        k: String,
    },
    /// Vaughan identity, Σ₀ = H, Σ₄ = 0 and the Type-II forms at one point
    VaughanCheck {
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        #[arg(long)]
        beta: Option<BetaClass>,
        /// bump | sharp | table:t=y,...
        #[arg(long, default_value = "bump")]
        weight: String,
    },
    /// Level identities of the Gauss-sum Dirichlet series, coefficientwise
    SeriesCheck {
        /// id1 | id2 | id3 | all
        #[arg(long, default_value = "all")]
        identity: String,
        /// One level; default is every squarefree primary level up to --alpha-max
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<GaussInt>,
        #[arg(long, default_value_t = 45)]
        alpha_max: u64,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        nu: GaussInt,
        /// Comma-separated ℓ values (default 0,1,-1,4,-4)
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<String>,
        /// One class; default both
        #[arg(long)]
        beta: Option<BetaClass>,
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// Support and transformation checks of the ramified sums Γ
    GammaCheck {
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        /// Scan b up to k + extra
        #[arg(long, default_value_t = 8)]
        extra: u32,
        #[arg(long, default_value_t = 100)]
        tuples: usize,
    },
    /// Quadratic large-sieve ratio and its growth under doubling
    SieveRatio {
        #[arg(long, default_value = "128,256,512,1024,2048,4096")]
        m_grid: String,
        /// Defaults to the M grid
        #[arg(long)]
        n_grid: Option<String>,
        #[arg(long, default_value = "ones,aligned,random")]
        families: String,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Inspect, verify or compact the Gauss-sum cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheAction {
    Inspect,
    Verify,
    Compact,
}

/// Exit codes: 0 pass, 1 verification failure or runtime error, 2 usage error.
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<quartic_core::Error> for Failure {
    fn from(e: quartic_core::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

pub type CmdResult = Result<bool, Failure>;

fn parse_order(s: &str) -> Result<u8, String> {
    match s.trim() {
        "2" => Ok(2),
        "4" => Ok(4),
        other => Err(format!("order must be 2 or 4, got '{other}'")),
    }
}

fn base_config(global: &Global) -> Result<RunConfig, String> {
    let file = match &global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let flags = RunConfig {
        threads: global.threads,
        precision: global.precision,
        cache_dir: global.cache_dir.clone(),
        output: global.output.clone(),
        format: global.format,
        seed: global.seed,
        ..Default::default()
    };
    let cfg = file.overlay(flags);
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = match base_config(&cli.global) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    match commands::run(cli.command, cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
