//! Monte-Carlo BER/FER over BPSK + AWGN with Min-Sum decoding.
//!
//! The all-zero codeword is sent as `+1` symbols. Frame `f` at SNR index `s`
//! draws its noise from a ChaCha stream keyed by `(master_seed, s, f)`, and
//! frames are tallied in index order, so a result depends only on the code
//! and the config, never on the worker count.

pub mod minsum;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Workers};
use crate::exponent::ExponentMatrix;
use crate::lifting::{rank_gf2, SparseBinaryMatrix};

pub use minsum::{DecodeOutcome, MinSumDecoder, Workspace};

/// Frames decoded between two stopping-rule checks.
const BATCH: u64 = 256;
const MAX_FRAME_INDEX: u64 = 1 << 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMode {
    /// `(n - rank H) / n`.
    #[default]
    ActualRank,
    /// `1 - m / n`.
    Design,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Eb/N0 points in dB.
    pub snr_db: Vec<f64>,
    pub max_iterations: u32,
    pub max_frames: u64,
    pub max_frame_errors: u64,
    pub master_seed: u64,
    pub rate_mode: RateMode,
    /// Check-node scaling; 1.0 is plain Min-Sum.
    pub normalization: f64,
    pub workers: Workers,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            snr_db: vec![1.0, 2.0, 3.0, 4.0],
            max_iterations: 20,
            max_frames: 10_000_000,
            max_frame_errors: 100,
            master_seed: 0,
            rate_mode: RateMode::ActualRank,
            normalization: 1.0,
            workers: Workers::Auto,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.snr_db.is_empty() {
            return bad("empty SNR list");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("SNR values must be finite");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if self.max_frames == 0 || self.max_frame_errors == 0 {
            return bad("stopping thresholds must be positive");
        }
        if self.max_frames >= MAX_FRAME_INDEX {
            return bad("max_frames must be below 2^48");
        }
        if !(self.normalization.is_finite() && self.normalization > 0.0) {
            return bad("normalization factor must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iters: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub code_id: String,
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub rate: f64,
    pub notes: Vec<String>,
    pub config: SimConfig,
    pub points: Vec<SimPoint>,
}

/// A parity-check matrix with a label and optional provenance note.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedCode {
    pub id: String,
    pub matrix: SparseBinaryMatrix,
    pub note: Option<String>,
}

impl NamedCode {
    pub fn new(id: impl Into<String>, matrix: SparseBinaryMatrix) -> Self {
        Self {
            id: id.into(),
            matrix,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub fn simulate(h: &SparseBinaryMatrix, cfg: &SimConfig) -> Result<SimResult> {
    simulate_code(&NamedCode::new("code", h.clone()), cfg)
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
}

pub fn simulate_code(code: &NamedCode, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let h = &code.matrix;
    if h.n_rows() == 0 || h.n_cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let n = h.n_cols();
    let rank = rank_gf2(h);
    if rank >= n {
        return Err(Error::InvalidRate);
    }
    let rate = match cfg.rate_mode {
        RateMode::ActualRank => (n - rank) as f64 / n as f64,
        RateMode::Design => 1.0 - h.n_rows() as f64 / n as f64,
    };
    if rate <= 0.0 {
        return Err(Error::InvalidRate);
    }
    let decoder = MinSumDecoder::new(h, cfg.normalization);

    let points = exec::install(cfg.workers, || {
        cfg.snr_db
            .iter()
            .enumerate()
            .map(|(s, &snr)| run_point(&decoder, cfg, rate, s as u64, snr))
            .collect()
    });

    Ok(SimResult {
        code_id: code.id.clone(),
        n,
        m: h.n_rows(),
        rank,
        rate,
        notes: code.note.iter().cloned().collect(),
        config: cfg.clone(),
        points,
    })
}

/// Noise standard deviation for BPSK at `ebn0_db` and code rate `rate`.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

fn frame_rng(master_seed: u64, snr_index: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((snr_index << 48) | frame);
    rng
}

fn run_point(decoder: &MinSumDecoder, cfg: &SimConfig, rate: f64, s: u64, snr: f64) -> SimPoint {
    let sigma = noise_sigma(snr, rate);
    let n = decoder.n_vars();
    let mut tally = Tally::default();
    let mut next = 0u64;
    'batches: while next < cfg.max_frames {
        let len = BATCH.min(cfg.max_frames - next);
        let outcomes = exec::map_range(cfg.workers, len as usize, |k| {
            let mut rng = frame_rng(cfg.master_seed, s, next + k as u64);
            let llr: Vec<f64> = (0..n)
                .map(|_| {
                    let noise: f64 = rng.sample(StandardNormal);
                    2.0 * (1.0 + sigma * noise) / (sigma * sigma)
                })
                .collect();
            let mut ws = decoder.workspace();
            let out = decoder.decode(&llr, cfg.max_iterations, &mut ws);
            (
                out.bits.iter().filter(|&&b| b).count() as u64,
                out.iterations,
            )
        });
        for (bit_errors, iterations) in outcomes {
            tally.frames += 1;
            tally.bit_errors += bit_errors;
            tally.frame_errors += u64::from(bit_errors > 0);
            tally.iterations += u64::from(iterations);
            if tally.frame_errors >= cfg.max_frame_errors {
                break 'batches;
            }
        }
        next += len;
    }
    let frames = tally.frames as f64;
    SimPoint {
        snr_db: snr,
        frames: tally.frames,
        bit_errors: tally.bit_errors,
        frame_errors: tally.frame_errors,
        ber: tally.bit_errors as f64 / (frames * n as f64),
        fer: tally.frame_errors as f64 / frames,
        mean_iters: tally.iterations as f64 / frames,
        seed: cfg.master_seed,
    }
}

/// Normalized `J x L` exponent matrix with entries outside the first row and
/// column drawn uniformly from `0..p`. No girth screening.
pub fn random_lifting(j: usize, l: usize, p: u64, seed: u64) -> Result<ExponentMatrix> {
    if p < 2 {
        return Err(Error::LiftingDegreeTooSmall(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0u64; j * l];
    for i in 1..j {
        for c in 1..l {
            entries[i * l + c] = rng.random_range(0..p);
        }
    }
    ExponentMatrix::from_flat(j, l, p, entries)
}

pub const RANDOM_LIFTING_NOTE: &str =
    "random lifting: uniform shifts, no girth screening (stand-in for a girth-agnostic random-lifting baseline)";

/// Results of several codes on one SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub results: Vec<SimResult>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    code_id: &'a str,
    snr_db: f64,
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    ber: f64,
    fer: f64,
    mean_iters: f64,
    seed: u64,
}

impl SweepTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.results {
            for pt in &r.points {
                w.serialize(CsvRow {
                    code_id: &r.code_id,
                    snr_db: pt.snr_db,
                    frames: pt.frames,
                    bit_errors: pt.bit_errors,
                    frame_errors: pt.frame_errors,
                    ber: pt.ber,
                    fer: pt.fer,
                    mean_iters: pt.mean_iters,
                    seed: pt.seed,
                })
                .map_err(|e| Error::Csv(e.to_string()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep table serializes")
    }
}

pub fn ber_sweep(codes: &[NamedCode], cfg: &SimConfig) -> Result<SweepTable> {
    if codes.is_empty() {
        return Err(Error::NoCodes);
    }
    cfg.validate()?;
    let results = codes
        .iter()
        .map(|c| simulate_code(c, cfg))
        .collect::<Result<_>>()?;
    Ok(SweepTable { results })
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = k as f64 / n;
    let z2 = z * z;
    let center = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((center - half).max(0.0), (center + half).min(1.0))
}
