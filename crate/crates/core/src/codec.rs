//! Codebook construction and the bit <-> codeword mapping for one block.
//!
//! An `f`-bit block word is read most-significant-first as
//! `[f1 index bits | f2 composition bits | f3 payload bits]`. Each field is an
//! unsigned rank; the payload field holds `K` Gray-labelled PSK groups, the
//! first group modulating the lowest active subcarrier.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::{
    self, floor_log2, rank_combination, rank_composition, unrank_combination,
    unrank_composition, CombinError, Composition, IndexSet, Rank,
};
use crate::scalar::Real;

/// Largest codebook `enumerate_codebook` will materialise.
pub const MAX_ENUMERATED_CODEWORDS: u128 = 1 << 24;

/// Upper limits that keep every binomial in this crate inside `u128`.
pub const MAX_BLOCK_SIZE: u32 = 128;
pub const MAX_COMPOSITION_TOTAL: u32 = 129;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("need 1 <= K <= N, got N={n} K={k}")]
    ActiveCount { n: u32, k: u32 },
    #[error("composition total I={i} must be at least K={k}")]
    CompositionTotal { i: u32, k: u32 },
    #[error("PSK order {0} must be a power of two >= 2")]
    PskOrder(u32),
    #[error("total block energy must be positive and finite, got {0}")]
    Energy(f64),
    #[error("N={n}, I={i} exceed the supported limits ({MAX_BLOCK_SIZE}, {MAX_COMPOSITION_TOTAL})")]
    TooLarge { n: u32, i: u32 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Combin(#[from] CombinError),
    #[error("bit word has {got} bits, block needs {expected}")]
    WrongBitLength { expected: u32, got: u32 },
    #[error("block carries {0} bits; at most 64 are supported per word")]
    WordTooWide(u32),
    #[error("codeword is outside the used sub-codebook: {0}")]
    NotUsed(String),
    #[error("codeword does not match the parameters: {0}")]
    Mismatch(String),
    #[error("codebook of {0} codewords is too large to enumerate")]
    CodebookTooLarge(u128),
}

/// What the active subcarriers carry besides their energy level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Mode {
    /// Unit-energy `m`-PSK symbol scaled to the composition energy.
    Payload { m: u32 },
    /// No payload; the phase is tied to the energy level to spread the
    /// per-subcarrier signal set.
    Diversity,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Payload { .. } => "payload",
            Mode::Diversity => "diversity",
        }
    }
}

/// Block parameters `(N, K, I, M, E_T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcmParams {
    n: u32,
    k: u32,
    i: u32,
    mode: Mode,
    energy_total: f64,
}

impl IcmParams {
    /// Parameters with `E_T = N`, i.e. unit average energy per subcarrier.
    pub fn new(n: u32, k: u32, i: u32, mode: Mode) -> Result<Self, ParamError> {
        Self::with_energy(n, k, i, mode, n as f64)
    }

    pub fn payload(n: u32, k: u32, i: u32, m: u32) -> Result<Self, ParamError> {
        Self::new(n, k, i, Mode::Payload { m })
    }

    pub fn diversity(n: u32, k: u32, i: u32) -> Result<Self, ParamError> {
        Self::new(n, k, i, Mode::Diversity)
    }

    pub fn with_energy(
        n: u32,
        k: u32,
        i: u32,
        mode: Mode,
        energy_total: f64,
    ) -> Result<Self, ParamError> {
        if k < 1 || k > n {
            return Err(ParamError::ActiveCount { n, k });
        }
        if i < k {
            return Err(ParamError::CompositionTotal { i, k });
        }
        if n > MAX_BLOCK_SIZE || i > MAX_COMPOSITION_TOTAL {
            return Err(ParamError::TooLarge { n, i });
        }
        if let Mode::Payload { m } = mode {
            if m < 2 || !m.is_power_of_two() {
                return Err(ParamError::PskOrder(m));
            }
        }
        if !(energy_total.is_finite() && energy_total > 0.0) {
            return Err(ParamError::Energy(energy_total));
        }
        Ok(Self {
            n,
            k,
            i,
            mode,
            energy_total,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn energy_total(&self) -> f64 {
        self.energy_total
    }

    /// PSK order, or 1 in diversity mode (a single phase per energy level).
    pub fn psk_order(&self) -> u32 {
        match self.mode {
            Mode::Payload { m } => m,
            Mode::Diversity => 1,
        }
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.psk_order().trailing_zeros()
    }

    /// Largest admissible composition part, `I - K + 1`.
    pub fn max_part(&self) -> u32 {
        self.i - self.k + 1
    }

    /// Energy carried by a subcarrier whose composition part is `part`.
    pub fn level_energy(&self, part: u32) -> f64 {
        part as f64 * self.energy_total / self.i as f64
    }

    /// Human-readable scheme label; `I = K` and `I = K = N` reduce to the
    /// classical schemes.
    pub fn scheme_label(&self) -> String {
        match self.mode {
            Mode::Diversity => format!("OFDM-ICM({},{},{})", self.n, self.k, self.i),
            Mode::Payload { m } if self.i == self.k && self.k == self.n => {
                format!("OFDM({m}-PSK)")
            }
            Mode::Payload { m } if self.i == self.k => {
                format!("OFDM-IM({},{},{m})", self.n, self.k)
            }
            Mode::Payload { m } => {
                format!("OFDM-ICM({},{},{},{m})", self.n, self.k, self.i)
            }
        }
    }
}

/// Bits carried by the active set (`f1`), the composition (`f2`) and the
/// payload (`f3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitBudget {
    pub f1: u32,
    pub f2: u32,
    pub f3: u32,
    pub f: u32,
}

impl BitBudget {
    /// Information bits per subcarrier.
    pub fn spectral_efficiency(&self, n: u32) -> f64 {
        self.f as f64 / n as f64
    }

    /// Number of used index patterns, `2^f1`.
    pub fn index_patterns(&self) -> Rank {
        1 << self.f1
    }

    /// Number of used compositions, `2^f2`.
    pub fn compositions(&self) -> Rank {
        1 << self.f2
    }
}

pub fn bit_budget(p: &IcmParams) -> BitBudget {
    // Parameter limits guarantee these fit in u128.
    let subsets = combin::binom::<Rank>(p.n, p.k).expect("bounded by MAX_BLOCK_SIZE");
    let comps = combin::composition_count(p.i, p.k).expect("bounded by MAX_COMPOSITION_TOTAL");
    let f1 = floor_log2(subsets);
    let f2 = floor_log2(comps);
    let f3 = p.k * p.bits_per_symbol();
    BitBudget {
        f1,
        f2,
        f3,
        f: f1 + f2 + f3,
    }
}

/// An `f`-bit block word; bit 0 of the sequence is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    value: u64,
    len: u32,
}

impl BitWord {
    pub fn new(value: u64, len: u32) -> Result<Self, CodecError> {
        if len > 64 {
            return Err(CodecError::WordTooWide(len));
        }
        if len < 64 && value >> len != 0 {
            return Err(CodecError::WrongBitLength {
                expected: len,
                got: 64 - value.leading_zeros(),
            });
        }
        Ok(Self { value, len })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, CodecError> {
        if bits.len() > 64 {
            return Err(CodecError::WordTooWide(bits.len() as u32));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(Self {
            value,
            len: bits.len() as u32,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len)
            .map(|j| (self.value >> (self.len - 1 - j)) & 1 == 1)
            .collect()
    }

    /// Number of differing bits.
    pub fn hamming(&self, other: &BitWord) -> u32 {
        (self.value ^ other.value).count_ones()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Binary-reflected Gray label of PSK point `rank`.
pub fn gray_label(rank: u32) -> u32 {
    rank ^ (rank >> 1)
}

/// PSK point whose Gray label is `label`.
pub fn gray_rank(label: u32) -> u32 {
    let mut r = label;
    let mut shift = label >> 1;
    while shift != 0 {
        r ^= shift;
        shift >>= 1;
    }
    r
}

/// Unit-energy `m`-PSK point `exp(j 2 pi rank / m)`.
pub fn psk_point<T: Real>(rank: u32, m: u32) -> Complex<T> {
    let theta = T::TAU() * T::of_u64(rank as u64) / T::of_u64(m as u64);
    Complex::from_polar(T::one(), theta)
}

/// The transmitted symbol on an active subcarrier with composition part
/// `part` and PSK rank `psk_rank` (ignored in diversity mode).
pub fn active_symbol<T: Real>(p: &IcmParams, part: u32, psk_rank: u32) -> Complex<T> {
    let amplitude = T::of(p.level_energy(part)).sqrt();
    match p.mode {
        Mode::Payload { m } => psk_point::<T>(psk_rank, m) * amplitude,
        Mode::Diversity => {
            let theta = T::TAU() * T::of_u64(part as u64) / T::of_u64(p.max_part() as u64);
            Complex::from_polar(amplitude, theta)
        }
    }
}

/// One block: symbol vector with the combinatorial labels that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Codeword<T> {
    pub symbols: Vec<Complex<T>>,
    pub index_set: IndexSet,
    pub composition: Composition,
    /// PSK rank per active subcarrier in ascending index order; empty in
    /// diversity mode.
    pub psk_ranks: Vec<u32>,
}

impl<T: Real> Codeword<T> {
    /// Builds the symbol vector from its labels.
    pub fn from_parts(
        p: &IcmParams,
        index_set: IndexSet,
        composition: Composition,
        psk_ranks: Vec<u32>,
    ) -> Result<Self, CodecError> {
        check_labels(p, &index_set, &composition, &psk_ranks)?;
        let mut symbols = vec![Complex::new(T::zero(), T::zero()); p.n as usize];
        for (j, pos) in index_set.positions().enumerate() {
            let r = psk_ranks.get(j).copied().unwrap_or(0);
            symbols[pos] = active_symbol(p, composition.parts()[j], r);
        }
        Ok(Self {
            symbols,
            index_set,
            composition,
            psk_ranks,
        })
    }

    /// Per-subcarrier energies `nu_k E_T / I`, computed from the labels.
    pub fn energies(&self, p: &IcmParams) -> Vec<T> {
        let mut e = vec![T::zero(); self.symbols.len()];
        for (pos, &v) in self.index_set.positions().zip(self.composition.parts()) {
            e[pos] = T::of(p.level_energy(v));
        }
        e
    }

    /// Per-subcarrier amplitudes `sqrt(nu_k E_T / I)`.
    pub fn amplitudes(&self, p: &IcmParams) -> Vec<T> {
        self.energies(p).into_iter().map(|e| e.sqrt()).collect()
    }

    pub fn energy(&self) -> T {
        self.symbols.iter().map(|s| s.norm_sqr()).sum()
    }
}

fn check_labels(
    p: &IcmParams,
    index_set: &IndexSet,
    composition: &Composition,
    psk_ranks: &[u32],
) -> Result<(), CodecError> {
    if index_set.len() as u32 != p.k || index_set.as_slice().last().is_some_and(|&a| a > p.n) {
        return Err(CodecError::Mismatch(format!("index set {index_set}")));
    }
    if composition.len() as u32 != p.k || composition.total() != p.i {
        return Err(CodecError::Mismatch(format!("composition {composition}")));
    }
    match p.mode {
        Mode::Payload { m } => {
            if psk_ranks.len() as u32 != p.k || psk_ranks.iter().any(|&r| r >= m) {
                return Err(CodecError::Mismatch(format!("PSK ranks {psk_ranks:?}")));
            }
        }
        Mode::Diversity => {
            if !psk_ranks.is_empty() {
                return Err(CodecError::Mismatch("diversity mode has no payload".into()));
            }
        }
    }
    Ok(())
}

fn checked_budget(p: &IcmParams) -> Result<BitBudget, CodecError> {
    let b = bit_budget(p);
    if b.f > 64 {
        return Err(CodecError::WordTooWide(b.f));
    }
    Ok(b)
}

/// Maps an `f`-bit word to its codeword.
pub fn encode_block<T: Real>(p: &IcmParams, word: BitWord) -> Result<Codeword<T>, CodecError> {
    let b = checked_budget(p)?;
    if word.len() != b.f {
        return Err(CodecError::WrongBitLength {
            expected: b.f,
            got: word.len(),
        });
    }
    let v = word.value() as u128;
    let field = |shift: u32, width: u32| -> u128 { (v >> shift) & ((1u128 << width) - 1) };
    let index_rank = field(b.f2 + b.f3, b.f1);
    let comp_rank = field(b.f3, b.f2);
    let index_set = unrank_combination(p.n, p.k, index_rank)?;
    let composition = unrank_composition(p.i, p.k, comp_rank)?;
    let bps = p.bits_per_symbol();
    let psk_ranks = match p.mode {
        Mode::Payload { .. } => (0..p.k)
            .map(|j| gray_rank(field((p.k - 1 - j) * bps, bps) as u32))
            .collect(),
        Mode::Diversity => Vec::new(),
    };
    Codeword::from_parts(p, index_set, composition, psk_ranks)
}

/// Inverse of [`encode_block`]; rejects codewords outside the used sub-codebook.
pub fn decode_block<T: Real>(p: &IcmParams, cw: &Codeword<T>) -> Result<BitWord, CodecError> {
    let b = checked_budget(p)?;
    if cw.symbols.len() as u32 != p.n {
        return Err(CodecError::Mismatch(format!(
            "{} symbols for N={}",
            cw.symbols.len(),
            p.n
        )));
    }
    check_labels(p, &cw.index_set, &cw.composition, &cw.psk_ranks)?;
    let index_rank = rank_combination(p.n, p.k, &cw.index_set)?;
    if index_rank >= b.index_patterns() {
        return Err(CodecError::NotUsed(format!(
            "index set {} has rank {index_rank} >= 2^{}",
            cw.index_set, b.f1
        )));
    }
    let comp_rank = rank_composition(p.i, p.k, &cw.composition)?;
    if comp_rank >= b.compositions() {
        return Err(CodecError::NotUsed(format!(
            "composition {} has rank {comp_rank} >= 2^{}",
            cw.composition, b.f2
        )));
    }
    let bps = p.bits_per_symbol();
    let payload = cw
        .psk_ranks
        .iter()
        .fold(0u128, |acc, &r| (acc << bps) | gray_label(r) as u128);
    let value = (index_rank << (b.f2 + b.f3)) | (comp_rank << b.f3) | payload;
    BitWord::new(value as u64, b.f)
}

/// Size of the full codebook, `C(N,K) C(I-1,K-1) M^K`.
pub fn codebook_size(p: &IcmParams) -> Result<u128, CodecError> {
    let subsets = combin::binom::<Rank>(p.n, p.k)?;
    let comps = combin::composition_count(p.i, p.k)?;
    let payloads = (p.psk_order() as u128)
        .checked_pow(p.k)
        .ok_or(CodecError::CodebookTooLarge(u128::MAX))?;
    subsets
        .checked_mul(comps)
        .and_then(|x| x.checked_mul(payloads))
        .ok_or(CodecError::CodebookTooLarge(u128::MAX))
}

/// Lists codewords. The full codebook comes composition-major, then index
/// set, then payload; the used sub-codebook comes in bit-word order, so
/// element `w` encodes word `w`.
pub fn enumerate_codebook<T: Real>(
    p: &IcmParams,
    used_only: bool,
) -> Result<Vec<Codeword<T>>, CodecError> {
    if used_only {
        let b = checked_budget(p)?;
        let count = 1u128 << b.f;
        if count > MAX_ENUMERATED_CODEWORDS {
            return Err(CodecError::CodebookTooLarge(count));
        }
        return (0..count as u64)
            .map(|w| encode_block(p, BitWord::new(w, b.f)?))
            .collect();
    }
    let count = codebook_size(p)?;
    if count > MAX_ENUMERATED_CODEWORDS {
        return Err(CodecError::CodebookTooLarge(count));
    }
    let subsets = combin::binom::<Rank>(p.n, p.k)?;
    let comps = combin::composition_count(p.i, p.k)?;
    let payloads = (p.psk_order() as u64).pow(p.k);
    let mut out = Vec::with_capacity(count as usize);
    for c in 0..comps {
        let composition = unrank_composition(p.i, p.k, c)?;
        for s in 0..subsets {
            let index_set = unrank_combination(p.n, p.k, s)?;
            for payload in 0..payloads {
                let psk_ranks = payload_ranks(p, payload);
                out.push(Codeword::from_parts(
                    p,
                    index_set.clone(),
                    composition.clone(),
                    psk_ranks,
                )?);
            }
        }
    }
    Ok(out)
}

// Digits of `payload` in base M, most significant first.
fn payload_ranks(p: &IcmParams, mut payload: u64) -> Vec<u32> {
    match p.mode {
        Mode::Diversity => Vec::new(),
        Mode::Payload { m } => {
            let mut r = vec![0; p.k as usize];
            for slot in r.iter_mut().rev() {
                *slot = (payload % m as u64) as u32;
                payload /= m as u64;
            }
            r
        }
    }
}

/// One line of the codebook dump:
/// `<word|unused> <index rank> <composition rank> <psk ranks|-> <index set> <composition> (re,im)...`
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookLine {
    pub word: Option<BitWord>,
    pub index_rank: Rank,
    pub composition_rank: Rank,
    pub psk_ranks: Vec<u32>,
    pub index_set: Vec<u32>,
    pub composition: Vec<u32>,
    pub symbols: Vec<Complex<f64>>,
}

impl CodebookLine {
    pub fn from_codeword<T: Real>(p: &IcmParams, cw: &Codeword<T>) -> Result<Self, CodecError> {
        let word = match decode_block(p, cw) {
            Ok(w) => Some(w),
            Err(CodecError::NotUsed(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            word,
            index_rank: rank_combination(p.n, p.k, &cw.index_set)?,
            composition_rank: rank_composition(p.i, p.k, &cw.composition)?,
            psk_ranks: cw.psk_ranks.clone(),
            index_set: cw.index_set.as_slice().to_vec(),
            composition: cw.composition.parts().to_vec(),
            symbols: cw
                .symbols
                .iter()
                .map(|s| Complex::new(s.re.as_f64(), s.im.as_f64()))
                .collect(),
        })
    }
}

fn join<I: IntoIterator<Item = u32>>(it: I) -> String {
    it.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CodebookLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.word {
            Some(w) if w.is_empty() => write!(f, "-")?,
            Some(w) => write!(f, "{w}")?,
            None => write!(f, "unused")?,
        }
        let psk = if self.psk_ranks.is_empty() {
            "-".to_string()
        } else {
            join(self.psk_ranks.iter().copied())
        };
        write!(
            f,
            " {} {} {} {{{}}} ({})",
            self.index_rank,
            self.composition_rank,
            psk,
            join(self.index_set.iter().copied()),
            join(self.composition.iter().copied())
        )?;
        for s in &self.symbols {
            write!(f, " ({:.17e},{:.17e})", s.re, s.im)?;
        }
        Ok(())
    }
}

impl FromStr for CodebookLine {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let mut fields = line.split_whitespace();
        let mut next = |what: &str| fields.next().ok_or_else(|| format!("missing {what}"));
        let word = match next("word")? {
            "unused" => None,
            "-" => Some(BitWord { value: 0, len: 0 }),
            bits => {
                let v: Result<Vec<bool>, String> = bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(format!("bad bit '{c}'")),
                    })
                    .collect();
                Some(BitWord::from_bits(&v?).map_err(|e| e.to_string())?)
            }
        };
        let parse_rank = |s: &str| s.parse::<Rank>().map_err(|e| e.to_string());
        let index_rank = parse_rank(next("index rank")?)?;
        let composition_rank = parse_rank(next("composition rank")?)?;
        let list = |s: &str| -> Result<Vec<u32>, String> {
            if s.is_empty() || s == "-" {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|v| v.parse::<u32>().map_err(|e| e.to_string()))
                .collect()
        };
        let psk_ranks = list(next("psk ranks")?)?;
        let strip = |s: &str, open: char, close: char| -> Result<String, String> {
            s.strip_prefix(open)
                .and_then(|s| s.strip_suffix(close))
                .map(str::to_string)
                .ok_or_else(|| format!("expected {open}..{close}, got {s}"))
        };
        let index_set = list(&strip(next("index set")?, '{', '}')?)?;
        let composition = list(&strip(next("composition")?, '(', ')')?)?;
        let symbols = fields
            .map(|s| {
                let inner = strip(s, '(', ')')?;
                let (re, im) = inner.split_once(',').ok_or("symbol needs re,im")?;
                Ok(Complex::new(
                    re.parse::<f64>().map_err(|e| e.to_string())?,
                    im.parse::<f64>().map_err(|e| e.to_string())?,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Self {
            word,
            index_rank,
            composition_rank,
            psk_ranks,
            index_set,
            composition,
            symbols,
        })
    }
}
