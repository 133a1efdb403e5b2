use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcldpc::sim::RateMode;

#[derive(Debug, Parser)]
#[command(name = "qcldpc", version, about = "Girth-8 (3, L) QC-LDPC codes")]
pub struct Cli {
    /// Worker threads for library internals (0 = all cores, 1 = sequential).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the explicit construction for (L, d) and write it.
    Construct(ConstructArgs),
    /// Girth of an exponent-matrix file by both checkers.
    Girth(GirthArgs),
    /// Lower bounds on the lifting degree.
    Bound(BoundArgs),
    /// Lift an exponent matrix and write the parity-check matrix as alist.
    Export(ExportArgs),
    /// Min-Sum BER/FER sweep.
    Simulate(SimulateArgs),
    /// Exhaustive search for a girth-8 (3, L) matrix at one lifting degree.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    /// Lifting degree; defaults to the construction minimum.
    #[arg(long)]
    pub p: Option<u64>,
    /// Matrix file; the sidecar goes to the same path with `.json` appended.
    /// Without it the matrix (or, with `--format json`, the sidecar) goes to stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GirthArgs {
    pub file: PathBuf,
    /// Reinterpret the entries modulo this lifting degree.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(
        long = "L",
        required_unless_present = "table1",
        conflicts_with = "table1"
    )]
    pub l: Option<u64>,
    /// File with the second-row headers, whitespace separated.
    #[arg(long, requires = "l")]
    pub a_row: Option<PathBuf>,
    /// Reduce the headers modulo p before looking for arithmetic runs.
    #[arg(long, requires = "a_row")]
    pub p: Option<u64>,
    /// Comparison table over a range of L, e.g. `4..12`.
    #[arg(long, value_parser = parse_range)]
    pub table1: Option<RangeInclusive<u64>>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON simulation config; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Exponent-matrix files to simulate (repeatable).
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Add the construction for this L.
    #[arg(long = "L")]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 1, requires = "l")]
    pub d: u64,
    #[arg(long, requires = "l")]
    pub p: Option<u64>,
    /// Add a uniform random lifting with the same shape and lifting degree as
    /// the first code, drawn with this seed.
    #[arg(long)]
    pub baseline_seed: Option<u64>,
    /// Eb/N0 points in dB: a list `1,2,3` or a range `1..4` with unit steps.
    #[arg(long, value_parser = parse_snr)]
    pub snr: Option<SnrList>,
    #[arg(long)]
    pub max_iterations: Option<u32>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub max_frame_errors: Option<u64>,
    #[arg(long, env = "QCLDPC_SEED")]
    pub seed: Option<u64>,
    /// Check-node normalization factor.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub rate: Option<Rate>,
    /// Write results here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rate {
    ActualRank,
    Design,
}

impl From<Rate> for RateMode {
    fn from(r: Rate) -> Self {
        match r {
            Rate::ActualRank => RateMode::ActualRank,
            Rate::Design => RateMode::Design,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long)]
    pub p: u64,
}

/// `a..b` or `a..=b` (both inclusive), or a single value.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad number {t:?} in range {s:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrList(pub Vec<f64>);

fn parse_snr(s: &str) -> Result<SnrList, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad SNR value {t:?}"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        if lo > hi {
            return Err(format!("empty SNR range {s:?}"));
        }
        let steps = (hi - lo).floor() as usize;
        return Ok(SnrList((0..=steps).map(|k| lo + k as f64).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(SnrList)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..12"), Ok(4..=12));
        assert_eq!(parse_range("4..=12"), Ok(4..=12));
        assert_eq!(parse_range("7"), Ok(7..=7));
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("a..4").is_err());
    }

    #[test]
    fn snr_lists() {
        assert_eq!(parse_snr("1,2.5,4"), Ok(SnrList(vec![1.0, 2.5, 4.0])));
        assert_eq!(parse_snr("1..4"), Ok(SnrList(vec![1.0, 2.0, 3.0, 4.0])));
        assert!(parse_snr("1,x").is_err());
        assert!(parse_snr("nan").is_err());
    }

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
