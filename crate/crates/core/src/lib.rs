//! Index-composition modulation for OFDM: encoding, a Rayleigh block-fading
//! channel, ML and low-complexity detection, union bounds, spectral
//! efficiency optimisation and a Monte Carlo BER harness.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the scalar.

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod combin;
pub mod detect;
pub mod harness;
pub mod scalar;
pub mod seopt;

use thiserror::Error;

pub use analysis::{
    pairwise_terms, pep_closed_form, pep_monte_carlo, q_function, union_bound_ber, AnalysisError,
    BoundCurve, BoundPoint, PairwiseTerm,
};
pub use channel::{
    n0_from_snr, stream_rng, transmit, ChannelError, ChannelRealization, SnrReference, SnrSpec,
};
pub use codec::{
    bit_budget, decode_block, encode_block, enumerate_codebook, BitBudget, BitWord, CodebookLine,
    CodecError, Codeword, IcmParams, Mode, ParamError,
};
pub use combin::{
    binom, rank_combination, rank_composition, unrank_combination, unrank_composition,
    CombinError, Composition, IndexSet, Rank,
};
pub use detect::{
    compute_llr, detect_lcml, detect_ml, AnyDetector, DetectError, DetectionResult, Detector,
    DetectorKind, LcmlDetector, LlrMode, LlrVector, MetricEvals, MlDetector,
};
pub use harness::{
    run_baselines, run_sweep, run_sweep_with, Baseline, BerPoint, HarnessError, SimConfig,
    SnrGrid, StopReason, StopRule, SweepResult,
};
pub use scalar::Real;
pub use seopt::{alpha_star, k_star, optimize, se_asymptotic, se_exact, SeProblem, SeRow, SeoptError};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type Codeword64 = Codeword<f64>;
pub type Codeword32 = Codeword<f32>;
pub type ChannelRealization64 = ChannelRealization<f64>;
pub type ChannelRealization32 = ChannelRealization<f32>;
pub type MlDetector64 = MlDetector<f64>;
pub type MlDetector32 = MlDetector<f32>;
pub type LcmlDetector64 = LcmlDetector<f64>;
pub type LcmlDetector32 = LcmlDetector<f32>;
pub type AnyDetector64 = AnyDetector<f64>;
pub type AnyDetector32 = AnyDetector<f32>;
pub type LlrVector64 = LlrVector<f64>;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Combin(#[from] CombinError),
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
    #[error(transparent)]
    Seopt(#[from] SeoptError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}
