use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddfrot::{Ordering, Scheme};

#[derive(Debug, Parser)]
#[command(name = "ddfrot", version, about = "DDF relaying with distributed rotations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo outage probability over an SNR grid.
    #[command(args_override_self = true)]
    Outage(OutageArgs),
    /// Closed-form DMT curves.
    #[command(args_override_self = true)]
    Dmt(DmtArgs),
    /// Built-in oracle checks.
    #[command(args_override_self = true)]
    Oracle(OracleArgs),
    /// Useful rate after relay state signalling.
    #[command(args_override_self = true)]
    Rate(RateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Outage(_) => "outage",
            Command::Dmt(_) => "dmt",
            Command::Oracle(_) => "oracle",
            Command::Rate(_) => "rate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Connectivity {
    Connected,
    Isolated,
}

impl Connectivity {
    pub fn isolated(self) -> bool {
        self == Connectivity::Isolated
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Connectivity::Connected => "connected",
            Connectivity::Isolated => "isolated",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutageArgs {
    /// Relay counts (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub relays: Vec<usize>,
    /// Rotation counts (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub rotations: Vec<usize>,
    /// Frame length in slots.
    #[arg(long, default_value_t = 64)]
    pub frame: usize,
    /// Decoding block lengths (comma-separated); each must divide the frame.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub block: Vec<usize>,
    /// Target rates in bits per channel use (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub rate: Vec<f64>,
    /// SNR grid in dB: `start:stop:step` or a comma-separated list.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    pub snr_db: String,
    #[arg(long, value_delimiter = ',', default_value = "connected")]
    pub connectivity: Vec<Connectivity>,
    #[arg(long, default_value = "random", value_parser = parse_ordering)]
    pub ordering: Ordering,
    #[arg(long, default_value = "rotations", value_parser = parse_scheme)]
    pub scheme: Scheme,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    /// Worker threads; does not change results.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "outage.csv")]
    pub out: PathBuf,
    /// key=value file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DmtArgs {
    /// Relay count for the optimal curve.
    #[arg(long, default_value_t = 1)]
    pub relays: usize,
    /// Frame lengths for the single-relay lower bound (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "16,64,256")]
    pub frames: Vec<usize>,
    /// Multiplexing-gain grid: `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "0:1:0.01")]
    pub grid: String,
    #[arg(long, default_value = "dmt.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Trials for the Monte Carlo oracle.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = crate::oracle::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    /// Bits carried by each symbol.
    #[arg(long, default_value_t = 2)]
    pub bits: usize,
    #[arg(long, default_value_t = 3)]
    pub relays: usize,
    /// Block lengths (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "1,4,8")]
    pub block: Vec<usize>,
    /// Also write the table as CSV with a manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_ordering(s: &str) -> Result<Ordering, String> {
    s.parse()
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

/// Parses `start:stop:step` (stop included, never overshot) or a
/// comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("`{s}` is not a finite number"))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 {
                return Err(format!("grid step {step} must be positive"));
            }
            if stop < start {
                return Err(format!("grid stop {stop} is below start {start}"));
            }
            let spans = (stop - start) / step;
            let count = (spans + 1e-9 * spans.max(1.0)).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => {
            let values = spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err("empty grid".into());
            }
            Ok(values)
        }
        _ => Err(format!("grid `{spec}` must be start:stop:step or a list")),
    }
}
