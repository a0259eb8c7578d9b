//! Exact integer combinatorics: binomial coefficients and lexicographic
//! ranking/unranking of `k`-subsets and of compositions of `i` into `k` parts.
//!
//! Subsets are ordered lexicographically on their sorted element lists, so
//! rank 0 is `{1, .., k}`. A composition `(v_1, .., v_k)` of `i` is identified
//! with its `k - 1` cut positions `v_1, v_1 + v_2, ..` in `{1, .., i - 1}` and
//! inherits the subset order, so rank 0 is `(1, .., 1, i - k + 1)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{CheckedMul, PrimInt};
use thiserror::Error;

/// Rank type for subsets and compositions.
pub type Rank = u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinError {
    #[error("binomial C({n}, {k}) overflows the result type")]
    Overflow { n: u32, k: u32 },
    #[error("rank {rank} out of range (count {count})")]
    RankOutOfRange { rank: Rank, count: Rank },
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`. Overflow of `U` is an error.
pub fn binom<U>(n: u32, k: u32) -> Result<U, CombinError>
where
    U: PrimInt + Integer + CheckedMul,
{
    if k > n {
        return Ok(U::zero());
    }
    let k = k.min(n - k);
    let overflow = CombinError::Overflow { n, k };
    let mut acc = U::one();
    for step in 0..k {
        // acc = C(n, step); C(n, step + 1) = acc * (n - step) / (step + 1).
        let num = U::from(n - step).ok_or_else(|| overflow.clone())?;
        let den = U::from(step + 1).ok_or_else(|| overflow.clone())?;
        let g = acc.gcd(&den);
        let (acc_r, den_r) = (acc / g, den / g);
        // den_r is coprime to acc_r, so it divides num exactly.
        acc = acc_r
            .checked_mul(&(num / den_r))
            .ok_or_else(|| overflow.clone())?;
    }
    Ok(acc)
}

/// `floor(log2(x))` for `x >= 1`, zero for `x == 0`.
pub fn floor_log2(x: Rank) -> u32 {
    if x == 0 {
        0
    } else {
        Rank::BITS - 1 - x.leading_zeros()
    }
}

/// Sorted set of active positions, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<u32>);

impl IndexSet {
    /// Validates a set of 1-based indices drawn from `{1, .., n}`.
    pub fn new(n: u32, indices: Vec<u32>) -> Result<Self, CombinError> {
        if indices.is_empty() {
            return Err(CombinError::InvalidIndexSet("empty".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CombinError::InvalidIndexSet(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        if indices[0] < 1 || *indices.last().unwrap() > n {
            return Err(CombinError::InvalidIndexSet(format!(
                "{indices:?} not within 1..={n}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based positions, for indexing into symbol vectors.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&a| (a - 1) as usize)
    }

    pub fn contains(&self, index: u32) -> bool {
        self.0.binary_search(&index).is_ok()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (j, a) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Ordered `k`-tuple of positive parts summing to `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(i: u32, parts: Vec<u32>) -> Result<Self, CombinError> {
        let k = parts.len() as u32;
        if k == 0 {
            return Err(CombinError::InvalidComposition("no parts".into()));
        }
        if k > i {
            return Err(CombinError::InvalidComposition(format!(
                "{k} parts cannot compose {i}"
            )));
        }
        let max_part = i - k + 1;
        if let Some(bad) = parts.iter().find(|&&v| v < 1 || v > max_part) {
            return Err(CombinError::InvalidComposition(format!(
                "part {bad} outside 1..={max_part}"
            )));
        }
        let total: u64 = parts.iter().map(|&v| v as u64).sum();
        if total != i as u64 {
            return Err(CombinError::InvalidComposition(format!(
                "parts {parts:?} sum to {total}, expected {i}"
            )));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn cuts(&self) -> Vec<u32> {
        let mut acc = 0;
        self.0[..self.0.len() - 1]
            .iter()
            .map(|&v| {
                acc += v;
                acc
            })
            .collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, v) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

// Raw lexicographic subset (un)ranking; allows k == 0.
fn unrank_subset(n: u32, k: u32, mut rank: Rank) -> Result<Vec<u32>, CombinError> {
    let count = binom::<Rank>(n, k)?;
    if rank >= count {
        return Err(CombinError::RankOutOfRange { rank, count });
    }
    let mut out = Vec::with_capacity(k as usize);
    let mut candidate = 1;
    while (out.len() as u32) < k {
        let remaining = k - out.len() as u32;
        let with_candidate = binom::<Rank>(n - candidate, remaining - 1)?;
        if rank < with_candidate {
            out.push(candidate);
        } else {
            rank -= with_candidate;
        }
        candidate += 1;
    }
    Ok(out)
}

fn rank_subset(n: u32, k: u32, set: &[u32]) -> Result<Rank, CombinError> {
    debug_assert_eq!(set.len() as u32, k);
    let mut rank: Rank = 0;
    let mut prev = 0;
    for (j, &a) in set.iter().enumerate() {
        let remaining = k - j as u32;
        for skipped in prev + 1..a {
            rank += binom::<Rank>(n - skipped, remaining - 1)?;
        }
        prev = a;
    }
    Ok(rank)
}

/// The `rank`-th `k`-subset of `{1, .., n}` in lexicographic order.
pub fn unrank_combination(n: u32, k: u32, rank: Rank) -> Result<IndexSet, CombinError> {
    if k == 0 || k > n {
        return Err(CombinError::InvalidArguments(format!(
            "need 1 <= k <= n, got n={n} k={k}"
        )));
    }
    Ok(IndexSet(unrank_subset(n, k, rank)?))
}

pub fn rank_combination(n: u32, k: u32, set: &IndexSet) -> Result<Rank, CombinError> {
    if set.len() as u32 != k {
        return Err(CombinError::InvalidIndexSet(format!(
            "{set} has {} elements, expected {k}",
            set.len()
        )));
    }
    if *set.0.last().unwrap() > n {
        return Err(CombinError::InvalidIndexSet(format!("{set} exceeds {n}")));
    }
    rank_subset(n, k, &set.0)
}

/// The `rank`-th composition of `i` into `k` parts.
pub fn unrank_composition(i: u32, k: u32, rank: Rank) -> Result<Composition, CombinError> {
    if k == 0 || k > i {
        return Err(CombinError::InvalidArguments(format!(
            "need 1 <= k <= i, got i={i} k={k}"
        )));
    }
    let cuts = unrank_subset(i - 1, k - 1, rank)?;
    let mut parts = Vec::with_capacity(k as usize);
    let mut prev = 0;
    for c in cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(i - prev);
    Ok(Composition(parts))
}

pub fn rank_composition(i: u32, k: u32, c: &Composition) -> Result<Rank, CombinError> {
    if c.len() as u32 != k {
        return Err(CombinError::InvalidComposition(format!(
            "{c} has {} parts, expected {k}",
            c.len()
        )));
    }
    if c.total() != i {
        return Err(CombinError::InvalidComposition(format!(
            "{c} sums to {}, expected {i}",
            c.total()
        )));
    }
    rank_subset(i - 1, k - 1, &c.cuts())
}

/// Number of compositions of `i` into `k` parts, `C(i - 1, k - 1)`.
pub fn composition_count(i: u32, k: u32) -> Result<Rank, CombinError> {
    if k == 0 || k > i {
        return Ok(0);
    }
    binom(i - 1, k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<u128>> {
        let mut t = vec![vec![0u128; n + 1]; n + 1];
        for a in 0..=n {
            t[a][0] = 1;
            for b in 1..=a {
                t[a][b] = t[a - 1][b - 1] + if b < a { t[a - 1][b] } else { 0 };
            }
        }
        t
    }

    // Brute-force lexicographic enumeration of k-subsets of 1..=n.
    fn all_subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
        fn go(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() as u32 == k {
                out.push(cur.clone());
                return;
            }
            for a in start..=n {
                cur.push(a);
                go(a + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(1, n, k, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn binom_small_cases() {
        assert_eq!(binom::<u64>(4, 3).unwrap(), 4);
        assert_eq!(binom::<u64>(7, 2).unwrap(), 21);
        for n in 0..20 {
            assert_eq!(binom::<u64>(n, 0).unwrap(), 1);
        }
        assert_eq!(binom::<u64>(3, 5).unwrap(), 0);
    }

    #[test]
    fn binom_matches_pascal_triangle() {
        let t = pascal(130);
        for n in 0..=130u32 {
            for k in 0..=n {
                assert_eq!(binom::<u128>(n, k).unwrap(), t[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn binom_reports_overflow() {
        assert_eq!(binom::<u64>(64, 32).unwrap(), 1_832_624_140_942_590_534);
        assert_eq!(
            binom::<u64>(70, 35),
            Err(CombinError::Overflow { n: 70, k: 35 })
        );
        assert!(binom::<u8>(12, 6).is_err());
        assert_eq!(binom::<u8>(10, 2).unwrap(), 45);
        assert!(binom::<u128>(127, 63).is_ok());
    }

    #[test]
    fn floor_log2_values() {
        assert_eq!(floor_log2(1), 0);
        assert_eq!(floor_log2(4), 2);
        assert_eq!(floor_log2(21), 4);
        assert_eq!(floor_log2(3), 1);
        assert_eq!(floor_log2(0), 0);
    }

    #[test]
    fn unrank_combination_lexicographic_order() {
        let expect = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]];
        for (r, e) in expect.iter().enumerate() {
            assert_eq!(unrank_combination(4, 3, r as Rank).unwrap().as_slice(), e);
        }
        assert_eq!(unrank_combination(5, 5, 0).unwrap().as_slice(), &[1, 2, 3, 4, 5]);
        assert_eq!(unrank_combination(6, 3, 19).unwrap().as_slice(), &[4, 5, 6]);
        assert!(matches!(
            unrank_combination(4, 3, 4),
            Err(CombinError::RankOutOfRange { rank: 4, count: 4 })
        ));
    }

    #[test]
    fn rank_combination_examples() {
        let s = IndexSet::new(4, vec![2, 3, 4]).unwrap();
        assert_eq!(rank_combination(4, 3, &s).unwrap(), 3);
        let s = IndexSet::new(4, vec![1, 2, 3]).unwrap();
        assert_eq!(rank_combination(4, 3, &s).unwrap(), 0);

        let all = all_subsets(6, 3);
        let pos = all.iter().position(|v| v == &[1, 4, 6]).unwrap();
        let s = IndexSet::new(6, vec![1, 4, 6]).unwrap();
        assert_eq!(rank_combination(6, 3, &s).unwrap(), pos as Rank);
    }

    #[test]
    fn malformed_index_sets_rejected() {
        assert!(IndexSet::new(4, vec![]).is_err());
        assert!(IndexSet::new(4, vec![2, 2]).is_err());
        assert!(IndexSet::new(4, vec![3, 1]).is_err());
        assert!(IndexSet::new(4, vec![0, 1]).is_err());
        assert!(IndexSet::new(4, vec![1, 5]).is_err());
        let s = IndexSet::new(4, vec![1, 2]).unwrap();
        assert!(rank_combination(4, 3, &s).is_err());
        assert!(rank_combination(3, 2, &IndexSet::new(4, vec![1, 4]).unwrap()).is_err());
    }

    #[test]
    fn combinations_match_enumeration_exhaustively() {
        for n in 1..=12 {
            for k in 1..=n {
                let all = all_subsets(n, k);
                assert_eq!(all.len() as Rank, binom::<Rank>(n, k).unwrap());
                for (r, v) in all.iter().enumerate() {
                    let s = unrank_combination(n, k, r as Rank).unwrap();
                    assert_eq!(s.as_slice(), v.as_slice());
                    assert_eq!(rank_combination(n, k, &s).unwrap(), r as Rank);
                }
            }
        }
    }

    #[test]
    fn unrank_composition_examples() {
        let e = [[1, 1, 2], [1, 2, 1], [2, 1, 1]];
        for (r, v) in e.iter().enumerate() {
            assert_eq!(unrank_composition(4, 3, r as Rank).unwrap().parts(), v);
        }
        assert_eq!(unrank_composition(3, 2, 0).unwrap().parts(), &[1, 2]);
        assert_eq!(unrank_composition(3, 2, 1).unwrap().parts(), &[2, 1]);
        assert_eq!(unrank_composition(5, 5, 0).unwrap().parts(), &[1; 5]);
        assert_eq!(unrank_composition(7, 1, 0).unwrap().parts(), &[7]);
        assert!(unrank_composition(4, 3, 3).is_err());
    }

    #[test]
    fn rank_composition_examples_and_errors() {
        let c = Composition::new(4, vec![2, 1, 1]).unwrap();
        assert_eq!(rank_composition(4, 3, &c).unwrap(), 2);
        let c = Composition::new(3, vec![1, 2]).unwrap();
        assert_eq!(rank_composition(3, 2, &c).unwrap(), 0);

        assert!(Composition::new(4, vec![1, 1, 1]).is_err());
        assert!(Composition::new(4, vec![0, 2, 2]).is_err());
        assert!(Composition::new(4, vec![3, 1]).is_ok());
        assert!(Composition::new(4, vec![4, 0]).is_err());
        let c = Composition::new(5, vec![2, 3]).unwrap();
        assert!(rank_composition(4, 2, &c).is_err());
    }

    #[test]
    fn compositions_of_eight_into_three_round_trip() {
        assert_eq!(composition_count(8, 3).unwrap(), 21);
        let mut seen = std::collections::HashSet::new();
        for r in 0..21 {
            let c = unrank_composition(8, 3, r).unwrap();
            assert_eq!(c.total(), 8);
            assert_eq!(rank_composition(8, 3, &c).unwrap(), r);
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn compositions_exhaustive_up_to_sixteen() {
        // Oracle: brute force over all k-tuples of parts, lexicographic on cut positions.
        for i in 1..=16u32 {
            for k in 1..=i {
                let count = composition_count(i, k).unwrap();
                let mut seen = std::collections::HashSet::new();
                for r in 0..count {
                    let c = unrank_composition(i, k, r).unwrap();
                    assert_eq!(c.total(), i);
                    assert!(c.parts().iter().all(|&v| v >= 1 && v <= i - k + 1));
                    assert_eq!(rank_composition(i, k, &c).unwrap(), r);
                    assert!(seen.insert(c));
                }
                assert_eq!(seen.len() as Rank, count);
            }
        }
    }

    #[test]
    fn distinct_compositions_differ_in_two_parts() {
        for i in 2..=10u32 {
            for k in 1..=i {
                let all: Vec<_> = (0..composition_count(i, k).unwrap())
                    .map(|r| unrank_composition(i, k, r).unwrap())
                    .collect();
                for a in &all {
                    for b in &all {
                        if a != b {
                            let diff = a.parts().iter().zip(b.parts()).filter(|(x, y)| x != y).count();
                            assert!(diff >= 2, "{a} vs {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_formats() {
        assert_eq!(IndexSet::new(4, vec![2, 3, 4]).unwrap().to_string(), "{2,3,4}");
        assert_eq!(Composition::new(4, vec![1, 1, 2]).unwrap().to_string(), "(1,1,2)");
    }
}
