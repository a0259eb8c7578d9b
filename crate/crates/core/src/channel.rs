//! Frequency-domain block channel `y = diag(x) h + n` with i.i.d. Rayleigh
//! gains and complex Gaussian noise, plus the seeded stream generator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{bit_budget, Codeword, IcmParams};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("dimension mismatch: {symbols} symbols, {gains} gains")]
    Dimension { symbols: usize, gains: usize },
    #[error("noise variance must be finite and non-negative, got {0}")]
    NoiseVariance(f64),
    #[error("per-bit SNR needs a block carrying at least one bit")]
    NoBits,
    #[error("SNR must not be NaN")]
    Snr,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for the stream `(seed, purpose, counter)`.
///
/// Distinct keys give independent ChaCha8 streams, so any partition of work
/// over keys reproduces the same draws.
pub fn stream_rng(seed: u64, purpose: u64, counter: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = splitmix64(seed) ^ splitmix64(purpose.rotate_left(17) ^ 0x5851_f42d_4c95_7f2d);
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(counter);
    rng
}

/// One draw of `CN(0, variance)`.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex<T> {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::of(re * scale), T::of(im * scale))
}

/// `n` i.i.d. `CN(0, 1)` fading gains.
pub fn draw_channel<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..n).map(|_| complex_gaussian(rng, 1.0)).collect()
}

/// Per-block channel state: gains and noise variance. `n0 == 0` is the
/// noiseless sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub gains: Vec<Complex<T>>,
    pub n0: f64,
}

impl<T: Real> ChannelRealization<T> {
    pub fn new(gains: Vec<Complex<T>>, n0: f64) -> Result<Self, ChannelError> {
        if !(n0.is_finite() && n0 >= 0.0) {
            return Err(ChannelError::NoiseVariance(n0));
        }
        Ok(Self { gains, n0 })
    }

    pub fn draw<R: Rng + ?Sized>(n: usize, n0: f64, rng: &mut R) -> Result<Self, ChannelError> {
        Self::new(draw_channel(n, rng), n0)
    }
}

/// Received vector `y_n = x_n h_n + w_n`, `w_n ~ CN(0, n0)`.
pub fn transmit<T: Real, R: Rng + ?Sized>(
    cw: &Codeword<T>,
    ch: &ChannelRealization<T>,
    rng: &mut R,
) -> Result<Vec<Complex<T>>, ChannelError> {
    transmit_symbols(&cw.symbols, ch, rng)
}

pub fn transmit_symbols<T: Real, R: Rng + ?Sized>(
    symbols: &[Complex<T>],
    ch: &ChannelRealization<T>,
    rng: &mut R,
) -> Result<Vec<Complex<T>>, ChannelError> {
    if symbols.len() != ch.gains.len() {
        return Err(ChannelError::Dimension {
            symbols: symbols.len(),
            gains: ch.gains.len(),
        });
    }
    Ok(symbols
        .iter()
        .zip(&ch.gains)
        .map(|(&x, &h)| {
            let clean = x * h;
            if ch.n0 > 0.0 {
                clean + complex_gaussian::<T, R>(rng, ch.n0)
            } else {
                clean
            }
        })
        .collect())
}

/// Which energy the SNR axis is normalised to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrReference {
    /// Average energy per subcarrier, `E_T / N`.
    Es,
    /// Energy per information bit, `E_T / f`.
    Eb,
}

impl fmt::Display for SnrReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrReference::Es => "es",
            SnrReference::Eb => "eb",
        })
    }
}

impl FromStr for SnrReference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "es" | "symbol" | "subcarrier" => Ok(SnrReference::Es),
            "eb" | "bit" => Ok(SnrReference::Eb),
            other => Err(format!("unknown SNR reference '{other}' (es|eb)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSpec {
    /// Decibels; `+inf` disables noise.
    pub value_db: f64,
    pub reference: SnrReference,
}

impl SnrSpec {
    pub fn new(value_db: f64, reference: SnrReference) -> Self {
        Self {
            value_db,
            reference,
        }
    }
}

/// Noise variance realising `s` for blocks of `p`.
pub fn n0_from_snr(p: &IcmParams, s: SnrSpec) -> Result<f64, ChannelError> {
    if s.value_db.is_nan() {
        return Err(ChannelError::Snr);
    }
    let reference_energy = match s.reference {
        SnrReference::Es => p.energy_total() / p.n() as f64,
        SnrReference::Eb => {
            let f = bit_budget(p).f;
            if f == 0 {
                return Err(ChannelError::NoBits);
            }
            p.energy_total() / f as f64
        }
    };
    Ok(reference_energy * 10f64.powf(-s.value_db / 10.0))
}
