//! Receivers: exhaustive maximum-likelihood search over the used
//! sub-codebook, and the low-complexity detector that ranks subcarriers by
//! their activity log-likelihood ratio before deciding energies and symbols
//! one subcarrier at a time.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{
    active_symbol, bit_budget, decode_block, enumerate_codebook, BitBudget, BitWord, CodecError,
    Codeword, IcmParams,
};
use crate::combin::{
    rank_combination, rank_composition, unrank_combination, unrank_composition, Composition,
    IndexSet,
};
use crate::scalar::{log_sum_exp, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error("dimension mismatch: expected {expected}, got y={y} h={h}")]
    Dimension { expected: usize, y: usize, h: usize },
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Squared-Euclidean-distance evaluations spent by one detection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricEvals {
    /// Per-subcarrier LLR stage.
    pub llr: u64,
    /// Codeword search (ML) or sequential per-subcarrier decisions (LC-ML).
    pub search: u64,
    /// Extra evaluations spent repairing an unused composition.
    pub repair: u64,
}

impl MetricEvals {
    pub fn total(&self) -> u64 {
        self.llr + self.search + self.repair
    }
}

impl std::ops::AddAssign for MetricEvals {
    fn add_assign(&mut self, rhs: Self) {
        self.llr += rhs.llr;
        self.search += rhs.search;
        self.repair += rhs.repair;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub index_set: IndexSet,
    pub composition: Composition,
    pub psk_ranks: Vec<u32>,
    pub bits: BitWord,
    pub metric_evals: MetricEvals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector<T> {
    pub values: Vec<T>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LlrMode {
    /// Full log-sum-exp over the per-subcarrier signal set.
    #[default]
    Exact,
    /// Keep only the closest signal point.
    Approx,
}

impl fmt::Display for LlrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LlrMode::Exact => "exact",
            LlrMode::Approx => "approx",
        })
    }
}

impl FromStr for LlrMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(LlrMode::Exact),
            "approx" | "max" => Ok(LlrMode::Approx),
            other => Err(format!("unknown LLR mode '{other}' (exact|approx)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Ml,
    Lcml,
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorKind::Ml => "ml",
            DetectorKind::Lcml => "lcml",
        })
    }
}

impl FromStr for DetectorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ml" => Ok(DetectorKind::Ml),
            "lcml" | "lc-ml" => Ok(DetectorKind::Lcml),
            other => Err(format!("unknown detector '{other}' (ml|lcml)")),
        }
    }
}

pub trait Detector<T: Real>: Send + Sync {
    fn detect(
        &self,
        y: &[Complex<T>],
        h: &[Complex<T>],
        n0: f64,
    ) -> Result<DetectionResult, DetectError>;
}

fn check_dims<T>(n: usize, y: &[Complex<T>], h: &[Complex<T>]) -> Result<(), DetectError> {
    if y.len() != n || h.len() != n {
        return Err(DetectError::Dimension {
            expected: n,
            y: y.len(),
            h: h.len(),
        });
    }
    Ok(())
}

#[inline]
fn dist<T: Real>(y: Complex<T>, h: Complex<T>, x: Complex<T>) -> T {
    (y - h * x).norm_sqr()
}

/// Exhaustive search over all `2^f` used codewords.
#[derive(Debug, Clone)]
pub struct MlDetector<T> {
    params: IcmParams,
    codebook: Vec<Codeword<T>>,
    // codeword-major, N symbols per word.
    symbols: Vec<Complex<T>>,
}

impl<T: Real> MlDetector<T> {
    pub fn new(params: IcmParams) -> Result<Self, DetectError> {
        let codebook = enumerate_codebook::<T>(&params, true)?;
        let symbols = codebook.iter().flat_map(|c| c.symbols.iter().copied()).collect();
        Ok(Self {
            params,
            codebook,
            symbols,
        })
    }

    pub fn codebook(&self) -> &[Codeword<T>] {
        &self.codebook
    }
}

impl<T: Real> Detector<T> for MlDetector<T> {
    fn detect(
        &self,
        y: &[Complex<T>],
        h: &[Complex<T>],
        _n0: f64,
    ) -> Result<DetectionResult, DetectError> {
        let n = self.params.n() as usize;
        check_dims(n, y, h)?;
        let mut best = 0;
        let mut best_metric = T::infinity();
        for (w, row) in self.symbols.chunks_exact(n).enumerate() {
            let mut metric = T::zero();
            for j in 0..n {
                metric += dist(y[j], h[j], row[j]);
            }
            // Strict comparison keeps the lowest word on ties.
            if metric < best_metric {
                best_metric = metric;
                best = w;
            }
        }
        let cw = &self.codebook[best];
        let f = bit_budget(&self.params).f;
        Ok(DetectionResult {
            index_set: cw.index_set.clone(),
            composition: cw.composition.clone(),
            psk_ranks: cw.psk_ranks.clone(),
            bits: BitWord::new(best as u64, f).map_err(DetectError::Codec)?,
            metric_evals: MetricEvals {
                search: self.codebook.len() as u64,
                ..Default::default()
            },
        })
    }
}

/// Convenience wrapper building the codebook on every call.
pub fn detect_ml<T: Real>(
    p: &IcmParams,
    y: &[Complex<T>],
    h: &[Complex<T>],
    n0: f64,
) -> Result<DetectionResult, DetectError> {
    MlDetector::new(*p)?.detect(y, h, n0)
}

/// Signal point on an active subcarrier, tagged by its labels.
#[derive(Debug, Clone, Copy)]
struct Point<T> {
    part: u32,
    psk_rank: u32,
    symbol: Complex<T>,
}

// Per-subcarrier signal set, parts 1..=I-K+1 outer, PSK ranks inner.
fn alphabet<T: Real>(p: &IcmParams) -> Vec<Point<T>> {
    let m = p.psk_order();
    (1..=p.max_part())
        .flat_map(|part| {
            (0..m).map(move |r| Point {
                part,
                psk_rank: r,
                symbol: active_symbol(p, part, r),
            })
        })
        .collect()
}

fn llr_values<T: Real>(
    points: &[Point<T>],
    y: &[Complex<T>],
    h: &[Complex<T>],
    n0: f64,
    mode: LlrMode,
) -> Vec<T> {
    let mut scratch = vec![T::zero(); points.len()];
    y.iter()
        .zip(h)
        .map(|(&yn, &hn)| {
            let idle = yn.norm_sqr();
            if n0 == 0.0 {
                // Noiseless limit of n0 * delta(n); same ordering as delta.
                let best = points
                    .iter()
                    .map(|pt| dist(yn, hn, pt.symbol))
                    .fold(T::infinity(), T::min);
                return idle - best;
            }
            let inv = T::of(1.0 / n0);
            for (s, pt) in scratch.iter_mut().zip(points) {
                *s = -dist(yn, hn, pt.symbol) * inv;
            }
            let active = match mode {
                LlrMode::Exact => log_sum_exp(&scratch),
                LlrMode::Approx => scratch.iter().copied().fold(T::neg_infinity(), T::max),
            };
            active + idle * inv
        })
        .collect()
}

/// Per-subcarrier activity LLR: log of the summed likelihood of every
/// (energy, symbol) hypothesis over the likelihood of an idle subcarrier
/// (uniform priors).
pub fn compute_llr<T: Real>(
    p: &IcmParams,
    y: &[Complex<T>],
    h: &[Complex<T>],
    n0: f64,
    mode: LlrMode,
) -> Result<LlrVector<T>, DetectError> {
    check_dims(p.n() as usize, y, h)?;
    Ok(LlrVector {
        values: llr_values(&alphabet(p), y, h, n0, mode),
    })
}

/// Low-complexity detector.
///
/// 1. LLR per subcarrier.
/// 2. The `K` largest LLRs form the active set (an unused set is replaced
///    by the used set with the largest LLR sum).
/// 3. Active subcarriers are visited in descending channel power.
/// 4. Each visit picks the closest (energy, symbol) whose part still leaves
///    at least one unit for every unvisited subcarrier; the last one takes
///    the remainder. An unused composition is replaced by the used one with
///    the smallest block metric for the detected set and symbols.
///
/// Sort ties go to the lower subcarrier index.
#[derive(Debug, Clone)]
pub struct LcmlDetector<T> {
    params: IcmParams,
    budget: BitBudget,
    llr_mode: LlrMode,
    points: Vec<Point<T>>,
    used_sets: Vec<IndexSet>,
    used_compositions: Vec<Composition>,
}

impl<T: Real> LcmlDetector<T> {
    pub fn new(params: IcmParams, llr_mode: LlrMode) -> Result<Self, DetectError> {
        let budget = bit_budget(&params);
        let used_sets = (0..budget.index_patterns())
            .map(|r| unrank_combination(params.n(), params.k(), r))
            .collect::<Result<_, _>>()
            .map_err(CodecError::from)?;
        let used_compositions = (0..budget.compositions())
            .map(|r| unrank_composition(params.i(), params.k(), r))
            .collect::<Result<_, _>>()
            .map_err(CodecError::from)?;
        Ok(Self {
            params,
            budget,
            llr_mode,
            points: alphabet(&params),
            used_sets,
            used_compositions,
        })
    }

    /// LLR-stage evaluations per block, `N (I - K + 1) M`.
    pub fn llr_evals(&self) -> u64 {
        self.params.n() as u64 * self.points.len() as u64
    }

    fn choose_index_set(&self, llr: &[T]) -> Result<IndexSet, DetectError> {
        let p = &self.params;
        let mut order: Vec<usize> = (0..llr.len()).collect();
        order.sort_by(|&a, &b| descending(llr[a], llr[b]).then(a.cmp(&b)));
        let mut top: Vec<u32> = order[..p.k() as usize].iter().map(|&j| j as u32 + 1).collect();
        top.sort_unstable();
        let set = IndexSet::new(p.n(), top).map_err(CodecError::from)?;
        let rank = rank_combination(p.n(), p.k(), &set).map_err(CodecError::from)?;
        if rank < self.budget.index_patterns() {
            return Ok(set);
        }
        let mut best = &self.used_sets[0];
        let mut best_score = T::neg_infinity();
        for s in &self.used_sets {
            let score: T = s.positions().map(|j| llr[j]).sum();
            if score > best_score {
                best_score = score;
                best = s;
            }
        }
        Ok(best.clone())
    }
}

fn descending<T: Real>(a: T, b: T) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

impl<T: Real> Detector<T> for LcmlDetector<T> {
    fn detect(
        &self,
        y: &[Complex<T>],
        h: &[Complex<T>],
        n0: f64,
    ) -> Result<DetectionResult, DetectError> {
        let p = &self.params;
        let n = p.n() as usize;
        let k = p.k() as usize;
        check_dims(n, y, h)?;
        let mut evals = MetricEvals {
            llr: self.llr_evals(),
            ..Default::default()
        };

        let llr = llr_values(&self.points, y, h, n0, self.llr_mode);
        let index_set = self.choose_index_set(&llr)?;

        let mut visit: Vec<usize> = index_set.positions().collect();
        visit.sort_by(|&a, &b| descending(h[a].norm_sqr(), h[b].norm_sqr()).then(a.cmp(&b)));

        let m = p.psk_order() as usize;
        let mut part_at = vec![0u32; n];
        let mut rank_at = vec![0u32; n];
        let mut assigned = 0u32;
        for (step, &pos) in visit.iter().enumerate() {
            let unvisited = (k - step - 1) as u32;
            let (lo, hi) = if unvisited == 0 {
                let rest = p.i() - assigned;
                (rest, rest)
            } else {
                (1, p.i() - assigned - unvisited)
            };
            // Points are grouped by part, M per part.
            let candidates = &self.points[(lo as usize - 1) * m..hi as usize * m];
            let mut best = candidates[0];
            let mut best_d = T::infinity();
            for pt in candidates {
                let d = dist(y[pos], h[pos], pt.symbol);
                if d < best_d {
                    best_d = d;
                    best = *pt;
                }
            }
            evals.search += candidates.len() as u64;
            part_at[pos] = best.part;
            rank_at[pos] = best.psk_rank;
            assigned += best.part;
        }
        debug_assert_eq!(assigned, p.i());

        let parts: Vec<u32> = index_set.positions().map(|j| part_at[j]).collect();
        let psk_ranks: Vec<u32> = match p.mode() {
            crate::codec::Mode::Payload { .. } => index_set.positions().map(|j| rank_at[j]).collect(),
            crate::codec::Mode::Diversity => Vec::new(),
        };
        let mut composition = Composition::new(p.i(), parts).map_err(CodecError::from)?;
        let comp_rank = rank_composition(p.i(), p.k(), &composition).map_err(CodecError::from)?;
        if comp_rank >= self.budget.compositions() {
            let mut best_metric = T::infinity();
            for c in &self.used_compositions {
                let metric: T = index_set
                    .positions()
                    .zip(c.parts())
                    .enumerate()
                    .map(|(j, (pos, &part))| {
                        let r = psk_ranks.get(j).copied().unwrap_or(0);
                        dist(y[pos], h[pos], active_symbol(p, part, r))
                    })
                    .sum();
                if metric < best_metric {
                    best_metric = metric;
                    composition = c.clone();
                }
            }
            evals.repair += self.used_compositions.len() as u64;
        }

        let cw = Codeword::<T>::from_parts(p, index_set, composition, psk_ranks)?;
        let bits = decode_block(p, &cw)?;
        Ok(DetectionResult {
            index_set: cw.index_set,
            composition: cw.composition,
            psk_ranks: cw.psk_ranks,
            bits,
            metric_evals: evals,
        })
    }
}

pub fn detect_lcml<T: Real>(
    p: &IcmParams,
    y: &[Complex<T>],
    h: &[Complex<T>],
    n0: f64,
) -> Result<DetectionResult, DetectError> {
    LcmlDetector::new(*p, LlrMode::Exact)?.detect(y, h, n0)
}

/// Either detector behind one type.
#[derive(Debug, Clone)]
pub enum AnyDetector<T> {
    Ml(MlDetector<T>),
    Lcml(LcmlDetector<T>),
}

impl<T: Real> AnyDetector<T> {
    pub fn new(p: IcmParams, kind: DetectorKind, llr_mode: LlrMode) -> Result<Self, DetectError> {
        Ok(match kind {
            DetectorKind::Ml => AnyDetector::Ml(MlDetector::new(p)?),
            DetectorKind::Lcml => AnyDetector::Lcml(LcmlDetector::new(p, llr_mode)?),
        })
    }
}

impl<T: Real> Detector<T> for AnyDetector<T> {
    fn detect(
        &self,
        y: &[Complex<T>],
        h: &[Complex<T>],
        n0: f64,
    ) -> Result<DetectionResult, DetectError> {
        match self {
            AnyDetector::Ml(d) => d.detect(y, h, n0),
            AnyDetector::Lcml(d) => d.detect(y, h, n0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{stream_rng, transmit, ChannelRealization};
    use crate::codec::encode_block;

    fn configs() -> Vec<IcmParams> {
        vec![
            IcmParams::payload(4, 2, 5, 2).unwrap(),
            IcmParams::payload(4, 3, 4, 2).unwrap(),
            IcmParams::payload(4, 3, 8, 4).unwrap(),
            IcmParams::diversity(4, 3, 8).unwrap(),
            IcmParams::payload(4, 2, 2, 4).unwrap(),
            IcmParams::payload(4, 4, 4, 2).unwrap(),
            IcmParams::payload(6, 1, 5, 2).unwrap(),
        ]
    }

    #[test]
    fn noiseless_detection_recovers_every_codeword() {
        let mut rng = stream_rng(3, 0, 0);
        for p in configs() {
            let f = bit_budget(&p).f;
            let ml = MlDetector::<f64>::new(p).unwrap();
            let lc = LcmlDetector::<f64>::new(p, LlrMode::Exact).unwrap();
            for w in 0..(1u64 << f) {
                let word = BitWord::new(w, f).unwrap();
                let cw: Codeword<f64> = encode_block(&p, word).unwrap();
                let ch = ChannelRealization::draw(p.n() as usize, 0.0, &mut rng).unwrap();
                let y = transmit(&cw, &ch, &mut rng).unwrap();
                let a = ml.detect(&y, &ch.gains, 0.0).unwrap();
                let b = lc.detect(&y, &ch.gains, 0.0).unwrap();
                assert_eq!(a.bits, word, "{p:?}");
                assert_eq!(b.bits, word, "{p:?}");
                assert_eq!(a.index_set, b.index_set);
            }
        }
    }

    #[test]
    fn metric_counts_match_closed_forms() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let mut rng = stream_rng(8, 0, 0);
        let ch = ChannelRealization::<f64>::draw(4, 0.1, &mut rng).unwrap();
        let cw: Codeword<f64> = encode_block(&p, BitWord::new(13, 6).unwrap()).unwrap();
        let y = transmit(&cw, &ch, &mut rng).unwrap();
        let r = detect_ml(&p, &y, &ch.gains, 0.1).unwrap();
        assert_eq!(r.metric_evals.search, 64);
        let r = detect_lcml(&p, &y, &ch.gains, 0.1).unwrap();
        assert_eq!(r.metric_evals.llr, 32);
    }

    #[test]
    fn idle_observation_favours_inactive() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let y = vec![Complex::new(0.0f64, 0.0); 4];
        let h = vec![
            Complex::new(1.0, 0.0),
            Complex::new(0.1, -0.3),
            Complex::new(-2.0, 0.5),
            Complex::new(0.0, 0.01),
        ];
        // Order of |h|^2: 2, 0, 1, 3. A silent output looks most idle where
        // the channel is strongest.
        for n0 in [1e-3, 0.1, 1.0, 10.0] {
            for mode in [LlrMode::Exact, LlrMode::Approx] {
                let l = compute_llr(&p, &y, &h, n0, mode).unwrap().values;
                assert!(l[2] < l[0] && l[0] < l[1] && l[1] < l[3], "{l:?}");
                if n0 <= 0.1 {
                    assert!(l[2] < 0.0);
                }
            }
        }
    }

    #[test]
    fn perfect_match_llr_grows_without_bound() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let h = vec![Complex::new(0.8, 0.3); 4];
        let amp = (p.energy_total() / p.i() as f64).sqrt();
        let y: Vec<_> = h.iter().map(|&g| g * amp).collect();
        let mut prev = f64::NEG_INFINITY;
        for n0 in [1.0, 1e-1, 1e-2, 1e-3, 1e-4] {
            let v = compute_llr(&p, &y, &h, n0, LlrMode::Exact).unwrap().values[0];
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 1e3);
        assert!(prev.is_finite());
    }

    #[test]
    fn exact_and_approx_llr_close_at_high_snr() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let book = enumerate_codebook::<f64>(&p, true).unwrap();
        let n0 = 1e-3;
        let mut rng = stream_rng(21, 0, 0);
        let trials = 10_000;
        let mut total = 0.0;
        let mut within = 0usize;
        for t in 0..trials {
            let cw = &book[t % book.len()];
            let ch = ChannelRealization::draw(4, n0, &mut rng).unwrap();
            let y = transmit(cw, &ch, &mut rng).unwrap();
            let a = compute_llr(&p, &y, &ch.gains, n0, LlrMode::Exact).unwrap();
            let b = compute_llr(&p, &y, &ch.gains, n0, LlrMode::Approx).unwrap();
            for (x, z) in a.values.iter().zip(&b.values) {
                // log-sum-exp bounds the max term from above.
                assert!(x >= z);
                total += x - z;
                within += (x - z < 0.1) as usize;
            }
        }
        let mean = total / (4 * trials) as f64;
        assert!(mean < 0.1, "mean gap {mean}");
        assert!(within as f64 / (4 * trials) as f64 > 0.95);
    }

    #[test]
    fn lcml_always_emits_used_codewords() {
        // C(5,2)=10 -> 8 used sets; C(6,1)=6 -> 4 used compositions: both repairs fire.
        let p = IcmParams::payload(5, 2, 7, 2).unwrap();
        let lc = LcmlDetector::<f64>::new(p, LlrMode::Exact).unwrap();
        let b = bit_budget(&p);
        let mut rng = stream_rng(4, 0, 0);
        let mut repairs = 0;
        for t in 0..5000u64 {
            let word = BitWord::new(t % (1 << b.f), b.f).unwrap();
            let cw: Codeword<f64> = encode_block(&p, word).unwrap();
            let ch = ChannelRealization::draw(5, 0.5, &mut rng).unwrap();
            let y = transmit(&cw, &ch, &mut rng).unwrap();
            let r = lc.detect(&y, &ch.gains, 0.5).unwrap();
            let back = Codeword::<f64>::from_parts(&p, r.index_set, r.composition, r.psk_ranks).unwrap();
            assert_eq!(decode_block(&p, &back).unwrap(), r.bits);
            assert_eq!(r.metric_evals.llr, 5 * 6 * 2);
            repairs += (r.metric_evals.repair > 0) as usize;
        }
        assert!(repairs > 0);
    }

    #[test]
    fn sequential_budget_reserves_one_unit_per_subcarrier() {
        // The strongest subcarrier sees a huge energy but must leave one unit
        // for each of the other two.
        let p = IcmParams::diversity(3, 3, 6).unwrap();
        let lc = LcmlDetector::<f64>::new(p, LlrMode::Exact).unwrap();
        let h = vec![Complex::new(0.5, 0.0), Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)];
        let unit: Complex<f64> = active_symbol(&p, 1, 0);
        let y = vec![h[0] * unit, h[1] * unit, h[2] * Complex::new(5.0, 0.0)];
        let r = lc.detect(&y, &h, 0.1).unwrap();
        assert_eq!(r.composition.parts(), &[1, 1, 4]);
        assert_eq!(r.metric_evals.repair, 0);
        // 4 candidates on the first visit, 6 - 4 - 1 on the second, 1 on the last.
        assert_eq!(r.metric_evals.search, 6);
    }

    #[test]
    fn dimension_errors() {
        let p = IcmParams::payload(4, 2, 5, 2).unwrap();
        let y = vec![Complex::new(0.0f64, 0.0); 3];
        let h = vec![Complex::new(1.0f64, 0.0); 4];
        assert!(matches!(detect_ml(&p, &y, &h, 1.0), Err(DetectError::Dimension { .. })));
        assert!(matches!(detect_lcml(&p, &y, &h, 1.0), Err(DetectError::Dimension { .. })));
        assert!(compute_llr(&p, &y, &h, 1.0, LlrMode::Exact).is_err());
    }

    #[test]
    fn f32_detection_works() {
        let p = IcmParams::payload(4, 3, 8, 4).unwrap();
        let ml = MlDetector::<f32>::new(p).unwrap();
        let lc = LcmlDetector::<f32>::new(p, LlrMode::Approx).unwrap();
        let mut rng = stream_rng(1, 1, 1);
        for w in (0..4096u64).step_by(97) {
            let word = BitWord::new(w, 12).unwrap();
            let cw: Codeword<f32> = encode_block(&p, word).unwrap();
            let ch = ChannelRealization::draw(4, 0.0, &mut rng).unwrap();
            let y = transmit(&cw, &ch, &mut rng).unwrap();
            assert_eq!(ml.detect(&y, &ch.gains, 0.0).unwrap().bits, word);
            assert_eq!(lc.detect(&y, &ch.gains, 0.0).unwrap().bits, word);
        }
    }
}
