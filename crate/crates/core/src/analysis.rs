//! Pairwise error probabilities under i.i.d. Rayleigh fading and the union
//! bound on the bit error rate.
//!
//! The unconditional PEP uses `Q(x) ~ e^{-x^2/2}/12 + e^{-2x^2/3}/4`; with a
//! diagonal difference matrix the fading average factors per subcarrier:
//!
//! `P(i -> j) ~ 1/12 prod_n (1 + d_n/(4 N0))^-1 + 1/4 prod_n (1 + d_n/(3 N0))^-1`,
//! `d_n = |x_n^i - x_n^j|^2`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::channel::{complex_gaussian, n0_from_snr, ChannelError, SnrSpec};
use crate::codec::{bit_budget, enumerate_codebook, BitWord, CodecError, Codeword, IcmParams};
use crate::scalar::{CompensatedSum, Real};

/// Largest block word the double sum is evaluated for.
pub const MAX_BOUND_BITS: u32 = 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("noise variance must be positive, got {0}")]
    NoiseVariance(f64),
    #[error("union bound over 2^{0} codewords exceeds the 2^{MAX_BOUND_BITS} budget")]
    BudgetExceeded(u32),
    #[error("codewords have different lengths ({0} vs {1})")]
    Length(usize, usize),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// One ordered term of the union bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTerm {
    pub i: u64,
    pub j: u64,
    pub pep: f64,
    pub bit_diff: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub snr_db: f64,
    pub ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub points: Vec<BoundPoint>,
}

/// Gaussian tail function.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

fn distance_profile<T: Real>(a: &Codeword<T>, b: &Codeword<T>) -> Result<Vec<T>, AnalysisError> {
    if a.symbols.len() != b.symbols.len() {
        return Err(AnalysisError::Length(a.symbols.len(), b.symbols.len()));
    }
    Ok(a.symbols
        .iter()
        .zip(&b.symbols)
        .map(|(x, y)| (x - y).norm_sqr())
        .collect())
}

fn pep_from_profile<T: Real>(d: &[T], n0: T) -> T {
    let (q1, q2) = (T::of(4.0) * n0, T::of(3.0) * n0);
    let mut p1 = T::one();
    let mut p2 = T::one();
    for &dn in d {
        if dn > T::zero() {
            p1 /= T::one() + dn / q1;
            p2 /= T::one() + dn / q2;
        }
    }
    p1 / T::of(12.0) + p2 / T::of(4.0)
}

/// Fading-averaged PEP `P(cw_i -> cw_j)` with the two-exponential Q bound.
pub fn pep_closed_form<T: Real>(
    cw_i: &Codeword<T>,
    cw_j: &Codeword<T>,
    n0: f64,
) -> Result<T, AnalysisError> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(AnalysisError::NoiseVariance(n0));
    }
    let d = distance_profile(cw_i, cw_j)?;
    Ok(pep_from_profile(&d, T::of(n0)))
}

/// Monte Carlo PEP: mean over `trials` Rayleigh draws of the exact
/// conditional `Q(sqrt(||(X_i - X_j) h||^2 / (2 N0)))`.
pub fn pep_monte_carlo<T: Real, R: Rng + ?Sized>(
    cw_i: &Codeword<T>,
    cw_j: &Codeword<T>,
    n0: f64,
    trials: u64,
    rng: &mut R,
) -> Result<f64, AnalysisError> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(AnalysisError::NoiseVariance(n0));
    }
    let d: Vec<f64> = distance_profile(cw_i, cw_j)?.iter().map(|v| v.as_f64()).collect();
    let mut acc = CompensatedSum::<f64>::new();
    for _ in 0..trials.max(1) {
        let energy: f64 = d
            .iter()
            .map(|&dn| dn * complex_gaussian::<f64, R>(rng, 1.0).norm_sqr())
            .sum();
        acc.add(q_function((energy / (2.0 * n0)).sqrt()));
    }
    Ok(acc.value() / trials.max(1) as f64)
}

/// Number of label bits in error when word `i` is decided as `j`.
pub fn bit_difference(i: BitWord, j: BitWord) -> u32 {
    i.hamming(&j)
}

fn used_codebook<T: Real>(p: &IcmParams) -> Result<(u32, Vec<Codeword<T>>), AnalysisError> {
    let f = bit_budget(p).f;
    if f > MAX_BOUND_BITS {
        return Err(AnalysisError::BudgetExceeded(f));
    }
    Ok((f, enumerate_codebook::<T>(p, true)?))
}

/// Every ordered pair `i != j` of the used codebook at one noise level.
pub fn pairwise_terms<T: Real>(p: &IcmParams, n0: f64) -> Result<Vec<PairwiseTerm>, AnalysisError> {
    let (_, book) = used_codebook::<T>(p)?;
    let mut out = Vec::with_capacity(book.len() * book.len().saturating_sub(1));
    for (i, a) in book.iter().enumerate() {
        for (j, b) in book.iter().enumerate() {
            if i != j {
                out.push(PairwiseTerm {
                    i: i as u64,
                    j: j as u64,
                    pep: pep_closed_form(a, b, n0)?.as_f64(),
                    bit_diff: (i ^ j).count_ones(),
                });
            }
        }
    }
    Ok(out)
}

/// Union bound `P_b <= 1/(f 2^f) sum_i sum_{j != i} P(i -> j) D(i -> j)`,
/// clipped to 0.5. The sum over `i` runs in parallel and is reduced in
/// index order.
pub fn union_bound_ber<T: Real>(
    p: &IcmParams,
    snr_grid: &[SnrSpec],
) -> Result<BoundCurve, AnalysisError> {
    let (f, book) = used_codebook::<T>(p)?;
    let n0s: Vec<f64> = snr_grid
        .iter()
        .map(|&s| n0_from_snr(p, s))
        .collect::<Result<_, _>>()?;
    // Noiseless points carry no error events; keep them out of the products.
    let live: Vec<(usize, T)> = n0s
        .iter()
        .enumerate()
        .filter(|(_, &n0)| n0 > 0.0)
        .map(|(k, &n0)| (k, T::of(n0)))
        .collect();

    let per_word: Vec<Vec<T>> = (0..book.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![CompensatedSum::<T>::new(); live.len()];
            let mut d = vec![T::zero(); p.n() as usize];
            for (j, b) in book.iter().enumerate() {
                if i == j {
                    continue;
                }
                for ((dn, x), y) in d.iter_mut().zip(&book[i].symbols).zip(&b.symbols) {
                    *dn = (x - y).norm_sqr();
                }
                let bits = T::of_u64((i ^ j).count_ones() as u64);
                for (slot, &(_, n0)) in acc.iter_mut().zip(&live) {
                    slot.add(pep_from_profile(&d, n0) * bits);
                }
            }
            acc.iter().map(|a| a.value()).collect()
        })
        .collect();

    let scale = T::of(f as f64) * T::of_u64(book.len() as u64);
    let mut ber = vec![T::zero(); n0s.len()];
    for (slot, &(k, _)) in live.iter().enumerate() {
        let mut acc = CompensatedSum::<T>::new();
        for row in &per_word {
            acc.add(row[slot]);
        }
        ber[k] = acc.value() / scale;
    }
    Ok(BoundCurve {
        points: snr_grid
            .iter()
            .zip(ber)
            .map(|(s, b)| BoundPoint {
                snr_db: s.value_db,
                ber: b.as_f64().min(0.5),
            })
            .collect(),
    })
}
