//! Monte Carlo BER engine.
//!
//! Each SNR point is simulated in fixed-size batches of blocks. Batch `b` of
//! point `s` draws everything from the stream `(seed, s, b)`, batches run in
//! parallel waves and are reduced in batch order; the stopping rule is checked
//! after every batch in that order, so results do not depend on the worker
//! count.

mod config_file;
mod emit;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config_file::{parse_config_text, ConfigMap};
pub use emit::{
    bound_rows, emit, emit_rows, read_csv, sweep_rows, write_csv, write_rows, write_sweep, CsvRow,
    OutputFormat, CSV_HEADER,
};

use crate::analysis::AnalysisError;
use crate::channel::{n0_from_snr, stream_rng, transmit, ChannelError, ChannelRealization, SnrReference, SnrSpec};
use crate::codec::{bit_budget, encode_block, BitWord, CodecError, IcmParams, ParamError};
use crate::detect::{AnyDetector, DetectError, Detector, DetectorKind, LlrMode};
use crate::scalar::Real;

/// Default cap on blocks per batch.
pub const DEFAULT_BATCH_BLOCKS: u64 = 4096;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

/// SNR points in dB with their reference energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    pub points_db: Vec<f64>,
    pub reference: SnrReference,
}

impl SnrGrid {
    pub fn new(points_db: Vec<f64>, reference: SnrReference) -> Self {
        Self {
            points_db,
            reference,
        }
    }

    /// Parses `start:step:stop`, a comma list, or a single value; `inf`
    /// means noiseless.
    pub fn parse(spec: &str, reference: SnrReference) -> Result<Self, HarnessError> {
        let bad = |m: &str| HarnessError::Config(format!("SNR grid '{spec}': {m}"));
        let num = |s: &str| -> Result<f64, HarnessError> {
            s.trim().parse::<f64>().map_err(|e| bad(&e.to_string()))
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let points = match parts.as_slice() {
            [start, step, stop] => {
                let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
                if !(step > 0.0 && start.is_finite() && stop.is_finite()) || stop < start {
                    return Err(bad("need finite start <= stop and step > 0"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|j| start + step * j as f64).collect()
            }
            [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(bad("expected start:step:stop or a comma list")),
        };
        Ok(Self::new(points, reference))
    }

    pub fn specs(&self) -> Vec<SnrSpec> {
        self.points_db
            .iter()
            .map(|&v| SnrSpec::new(v, self.reference))
            .collect()
    }
}

/// An SNR point ends once either limit is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_bit_errors: u64,
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_bit_errors: 100,
            max_bits: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: IcmParams,
    pub detector: DetectorKind,
    pub llr_mode: LlrMode,
    pub snr: SnrGrid,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub batch_blocks: u64,
}

impl SimConfig {
    pub fn new(params: IcmParams, detector: DetectorKind, snr: SnrGrid) -> Self {
        Self {
            params,
            detector,
            llr_mode: LlrMode::Exact,
            snr,
            stop: StopRule::default(),
            seed: 0,
            workers: 0,
            batch_blocks: DEFAULT_BATCH_BLOCKS,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let f = bit_budget(&self.params).f;
        if f == 0 {
            return Err(HarnessError::Config("block carries no bits".into()));
        }
        if f > 64 {
            return Err(CodecError::WordTooWide(f).into());
        }
        if self.snr.points_db.is_empty() {
            return Err(HarnessError::Config("SNR grid is empty".into()));
        }
        if self.snr.points_db.iter().any(|v| v.is_nan()) {
            return Err(HarnessError::Config("SNR grid contains NaN".into()));
        }
        if self.stop.min_bit_errors < 1 {
            return Err(HarnessError::Config("min_bit_errors must be >= 1".into()));
        }
        if self.stop.max_bits < f as u64 {
            return Err(HarnessError::Config(format!(
                "max_bits {} is below one block ({f} bits)",
                self.stop.max_bits
            )));
        }
        if self.batch_blocks == 0 {
            return Err(HarnessError::Config("batch_blocks must be >= 1".into()));
        }
        Ok(())
    }

    /// Short digest of the configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config is serialisable");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MinErrors,
    MaxBits,
}

/// Statistics at one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub blocks: u64,
    pub block_errors: u64,
    pub metric_evals_total: u64,
    pub elapsed_s: f64,
    pub stop: StopReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SimConfig,
    pub rows: Vec<BerPoint>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, Default)]
struct BatchStats {
    blocks: u64,
    bit_errors: u64,
    block_errors: u64,
    metric_evals: u64,
}

// Purpose tag for sweep streams; the SNR index is folded in.
const SWEEP_PURPOSE: u64 = 0x5357_4545_5000_0000;

fn run_batch<T: Real>(
    cfg: &SimConfig,
    detector: &AnyDetector<T>,
    snr_index: usize,
    n0: f64,
    first_block: u64,
    blocks: u64,
) -> Result<BatchStats, HarnessError> {
    let p = &cfg.params;
    let f = bit_budget(p).f;
    let mask = if f == 64 { u64::MAX } else { (1u64 << f) - 1 };
    let batch = first_block / cfg.batch_blocks;
    let mut rng = stream_rng(cfg.seed, SWEEP_PURPOSE | snr_index as u64, batch);
    let mut stats = BatchStats {
        blocks,
        ..Default::default()
    };
    for _ in 0..blocks {
        let sent = BitWord::new(rng.random::<u64>() & mask, f)?;
        let cw = encode_block::<T>(p, sent)?;
        let ch = ChannelRealization::<T>::draw(p.n() as usize, n0, &mut rng)?;
        let y = transmit(&cw, &ch, &mut rng)?;
        let r = detector.detect(&y, &ch.gains, n0)?;
        let errors = sent.hamming(&r.bits) as u64;
        stats.bit_errors += errors;
        stats.block_errors += (errors > 0) as u64;
        stats.metric_evals += r.metric_evals.total();
    }
    Ok(stats)
}

/// Runs the configured sweep with `f64` arithmetic.
pub fn run_sweep(cfg: &SimConfig) -> Result<SweepResult, HarnessError> {
    run_sweep_with::<f64>(cfg)
}

pub fn run_sweep_with<T: Real>(cfg: &SimConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let p = &cfg.params;
    let f = bit_budget(p).f as u64;
    let detector = AnyDetector::<T>::new(*p, cfg.detector, cfg.llr_mode)?;
    let n0s: Vec<f64> = cfg
        .snr
        .specs()
        .into_iter()
        .map(|s| n0_from_snr(p, s))
        .collect::<Result<_, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let wave = (pool.current_num_threads() * 2).max(1) as u64;
    let max_blocks = cfg.stop.max_bits / f;

    let mut rows = Vec::with_capacity(n0s.len());
    for (si, (&snr_db, &n0)) in cfg.snr.points_db.iter().zip(&n0s).enumerate() {
        let started = Instant::now();
        let mut total = BatchStats::default();
        let mut next_batch = 0u64;
        let stop = 'point: loop {
            let batches: Vec<(u64, u64)> = (next_batch..next_batch + wave)
                .map(|b| b * cfg.batch_blocks)
                .filter(|&first| first < max_blocks)
                .map(|first| (first, cfg.batch_blocks.min(max_blocks - first)))
                .collect();
            if batches.is_empty() {
                break StopReason::MaxBits;
            }
            next_batch += batches.len() as u64;
            let results: Vec<Result<BatchStats, HarnessError>> = pool.install(|| {
                batches
                    .par_iter()
                    .map(|&(first, len)| run_batch(cfg, &detector, si, n0, first, len))
                    .collect()
            });
            for r in results {
                let r = r?;
                total.blocks += r.blocks;
                total.bit_errors += r.bit_errors;
                total.block_errors += r.block_errors;
                total.metric_evals += r.metric_evals;
                if total.bit_errors >= cfg.stop.min_bit_errors {
                    break 'point StopReason::MinErrors;
                }
                if total.blocks >= max_blocks {
                    break 'point StopReason::MaxBits;
                }
            }
        };
        let bits = total.blocks * f;
        rows.push(BerPoint {
            snr_db,
            bits,
            bit_errors: total.bit_errors,
            ber: total.bit_errors as f64 / bits as f64,
            blocks: total.blocks,
            block_errors: total.block_errors,
            metric_evals_total: total.metric_evals,
            elapsed_s: started.elapsed().as_secs_f64(),
            stop,
        });
    }
    Ok(SweepResult {
        config: cfg.clone(),
        rows,
        provenance: Provenance {
            config_hash: cfg.hash(),
            seed: cfg.seed,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Classical schemes reached by collapsing the composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Baseline {
    /// `I = K`: index modulation with `k` of `N` subcarriers active.
    OfdmIm { k: u32, m: u32 },
    /// `I = K = N`: plain `m`-PSK OFDM.
    Ofdm { m: u32 },
}

impl Baseline {
    pub fn params(&self, n: u32) -> Result<IcmParams, ParamError> {
        match *self {
            Baseline::OfdmIm { k, m } => IcmParams::payload(n, k, k, m),
            Baseline::Ofdm { m } => IcmParams::payload(n, n, n, m),
        }
    }
}

/// Runs `cfg` with its parameters replaced by `baseline` at the same `N`
/// and energy; every other setting is kept.
pub fn run_baselines(cfg: &SimConfig, baseline: Baseline) -> Result<SweepResult, HarnessError> {
    let n = cfg.params.n();
    let base = baseline.params(n)?;
    let params = IcmParams::with_energy(n, base.k(), base.i(), base.mode(), cfg.params.energy_total())?;
    let cfg = SimConfig {
        params,
        ..cfg.clone()
    };
    run_sweep(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(detector: DetectorKind) -> SimConfig {
        let mut cfg = SimConfig::new(
            IcmParams::payload(4, 2, 5, 2).unwrap(),
            detector,
            SnrGrid::parse("0:10:20", SnrReference::Es).unwrap(),
        );
        cfg.stop = StopRule {
            min_bit_errors: 200,
            max_bits: 600_000,
        };
        cfg.seed = 7;
        cfg.batch_blocks = 500;
        cfg
    }

    #[test]
    fn grid_parsing() {
        let g = SnrGrid::parse("0:5:40", SnrReference::Eb).unwrap();
        assert_eq!(g.points_db, vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0]);
        let g = SnrGrid::parse("1.5,3,inf", SnrReference::Es).unwrap();
        assert_eq!(g.points_db[2], f64::INFINITY);
        assert!(SnrGrid::parse("5:0:10", SnrReference::Es).is_err());
        assert!(SnrGrid::parse("10:1:5", SnrReference::Es).is_err());
        assert!(SnrGrid::parse("a:b", SnrReference::Es).is_err());
    }

    #[test]
    fn results_ignore_worker_count() {
        let mut a = small(DetectorKind::Lcml);
        a.workers = 1;
        let mut b = a.clone();
        b.workers = 5;
        let ra = run_sweep(&a).unwrap();
        let rb = run_sweep(&b).unwrap();
        let strip = |r: &SweepResult| -> Vec<(u64, u64, u64, u64)> {
            r.rows.iter().map(|p| (p.bits, p.bit_errors, p.block_errors, p.metric_evals_total)).collect()
        };
        assert_eq!(strip(&ra), strip(&rb));
        assert_ne!(a.hash(), small(DetectorKind::Ml).hash());
    }

    #[test]
    fn stopping_rule_binds() {
        let cfg = small(DetectorKind::Ml);
        let r = run_sweep(&cfg).unwrap();
        for row in &r.rows {
            assert!(row.bits <= cfg.stop.max_bits);
            match row.stop {
                StopReason::MinErrors => assert!(row.bit_errors >= cfg.stop.min_bit_errors),
                StopReason::MaxBits => assert_eq!(row.bits, cfg.stop.max_bits / 6 * 6),
            }
            assert_eq!(row.ber, row.bit_errors as f64 / row.bits as f64);
            assert_eq!(row.metric_evals_total, row.blocks * 64);
            assert!(row.block_errors <= row.blocks && row.block_errors <= row.bit_errors);
        }
        assert!(r.rows[0].ber > r.rows[2].ber);
    }

    #[test]
    fn noiseless_sweep_is_error_free() {
        let mut cfg = SimConfig::new(
            IcmParams::payload(4, 3, 4, 2).unwrap(),
            DetectorKind::Ml,
            SnrGrid::new(vec![f64::INFINITY], SnrReference::Es),
        );
        cfg.stop.max_bits = 60_000;
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows[0].blocks, 10_000);
        assert_eq!(r.rows[0].bit_errors, 0);
        assert_eq!(r.rows[0].stop, StopReason::MaxBits);
    }

    #[test]
    fn invalid_configs_fail_early() {
        let mut cfg = small(DetectorKind::Ml);
        cfg.snr.points_db.clear();
        assert!(matches!(run_sweep(&cfg), Err(HarnessError::Config(_))));
        let mut cfg = small(DetectorKind::Ml);
        cfg.stop.min_bit_errors = 0;
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small(DetectorKind::Ml);
        cfg.stop.max_bits = 3;
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small(DetectorKind::Ml);
        cfg.params = IcmParams::diversity(3, 3, 3).unwrap();
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn baselines_swap_parameters_only() {
        let mut cfg = small(DetectorKind::Ml);
        cfg.stop.max_bits = 60_000;
        let r = run_baselines(&cfg, Baseline::OfdmIm { k: 2, m: 4 }).unwrap();
        assert_eq!(r.config.params, IcmParams::payload(4, 2, 2, 4).unwrap());
        assert_eq!(r.config.seed, cfg.seed);
        let r = run_baselines(&cfg, Baseline::Ofdm { m: 2 }).unwrap();
        assert_eq!(r.config.params.scheme_label(), "OFDM(2-PSK)");
    }
}
