//! The Stern sequence and rows of the diatomic array.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of entries a single computation may materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemoryCap(pub u64);

impl MemoryCap {
    pub const DEFAULT: MemoryCap = MemoryCap(1 << 28);

    pub fn check(self, what: &'static str, requested: u128) -> Result<()> {
        if requested > self.0 as u128 {
            Err(Error::ResourceCap {
                what,
                requested,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemoryCap {
    fn default() -> Self {
        MemoryCap::DEFAULT
    }
}

/// Rows past this index hold values beyond `u32` (`F_48 > 2^32`).
pub const MAX_ROW: u32 = 45;

/// `s(n)`, evaluated over the binary digits of `n` from the top.
///
/// Walking the prefix `k` of `n` keeps the pair `(s(k), s(k+1))`; appending a
/// zero bit maps it to `(s(k), s(k) + s(k+1))` and a one bit to
/// `(s(k) + s(k+1), s(k+1))`.
pub fn stern(n: u64) -> BigInt {
    // s(n) <= F_{66} for n < 2^64, so u64 never overflows here.
    let (mut a, mut b) = (0u64, 1u64);
    for bit in (0..(64 - n.leading_zeros())).rev() {
        if (n >> bit) & 1 == 0 {
            b += a;
        } else {
            a += b;
        }
    }
    BigInt::from(a)
}

/// `s(n)` for an arbitrary-precision argument.
pub fn stern_big(n: &BigUint) -> BigInt {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for bit in (0..n.bits()).rev() {
        if n.bit(bit) {
            a += &b;
        } else {
            b += &a;
        }
    }
    BigInt::from(a)
}

/// Row `r` of the diatomic array: `s(2^r), s(2^r + 1), ..., s(2^{r+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SternRow {
    r: u32,
    values: Vec<u32>,
}

impl SternRow {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sequence index of the first entry, `2^r`.
    pub fn first_index(&self) -> u64 {
        1u64 << self.r
    }

    /// Entry `k`, equal to `s(2^r + k)`.
    pub fn get(&self, k: usize) -> Option<BigInt> {
        self.values.get(k).map(|&v| BigInt::from(v))
    }

    pub fn values(&self) -> impl Iterator<Item = BigInt> + '_ {
        self.values.iter().map(|&v| BigInt::from(v))
    }

    /// Raw machine words backing the row.
    pub fn words(&self) -> &[u32] {
        &self.values
    }

    pub fn max(&self) -> BigInt {
        BigInt::from(self.values.iter().copied().max().unwrap_or(0))
    }

    pub fn distinct(&self) -> BTreeSet<BigInt> {
        let words: BTreeSet<u32> = self.values.iter().copied().collect();
        words.into_iter().map(BigInt::from).collect()
    }

    /// Sequence indices `n` with `s(n) == value`, ascending.
    pub fn positions_of(&self, value: &BigInt) -> Vec<u64> {
        let Ok(word) = u32::try_from(value) else {
            return Vec::new();
        };
        let base = self.first_index();
        self.values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == word)
            .map(|(k, _)| base + k as u64)
            .collect()
    }
}

/// Builds row `r` with the default memory cap.
pub fn stern_row(r: u32) -> Result<SternRow> {
    stern_row_capped(r, MemoryCap::DEFAULT)
}

/// Builds row `r` by repeatedly copying the previous row and inserting the
/// sum between each pair of neighbours, starting from `1, 1`.
pub fn stern_row_capped(r: u32, cap: MemoryCap) -> Result<SternRow> {
    let entries = (1u128 << r.min(127)) + 1;
    cap.check("diatomic row", entries)?;
    if r > MAX_ROW {
        return Err(Error::ResourceCap {
            what: "diatomic row",
            requested: entries,
            cap: (1u64 << MAX_ROW) + 1,
        });
    }

    let mut row = Vec::with_capacity(entries as usize);
    row.extend_from_slice(&[1u32, 1]);
    let mut next = Vec::with_capacity(entries as usize);
    for _ in 0..r {
        next.clear();
        for pair in row.windows(2) {
            next.push(pair[0]);
            next.push(pair[0] + pair[1]);
        }
        next.push(1);
        std::mem::swap(&mut row, &mut next);
    }
    Ok(SternRow { r, values: row })
}

/// The `m`-th largest distinct value of a row together with where it occurs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedValue {
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
    /// Sequence indices in `[2^r, 2^{r+1}]`, ascending.
    pub positions: Vec<u64>,
}

/// The `m_max` largest distinct values of row `r`, found by a full scan.
pub fn brute_force_top(r: u32, m_max: usize) -> Result<Vec<RankedValue>> {
    brute_force_top_capped(r, m_max, MemoryCap::DEFAULT)
}

pub fn brute_force_top_capped(r: u32, m_max: usize, cap: MemoryCap) -> Result<Vec<RankedValue>> {
    let row = stern_row_capped(r, cap)?;
    Ok(top_of_row(&row, m_max))
}

/// Ranks the largest distinct values of an already built row.
pub fn top_of_row(row: &SternRow, m_max: usize) -> Vec<RankedValue> {
    if m_max == 0 {
        return Vec::new();
    }
    // bounded set of the largest distinct values seen so far
    let mut top = BTreeSet::new();
    for &v in row.words() {
        if top.len() < m_max {
            top.insert(v);
        } else if v > *top.first().expect("nonempty") && top.insert(v) {
            top.pop_first();
        }
    }

    let ranked: Vec<u32> = top.into_iter().rev().collect();
    let mut positions = vec![Vec::new(); ranked.len()];
    let base = row.first_index();
    for (k, v) in row.words().iter().enumerate() {
        if let Some(idx) = ranked.iter().position(|t| t == v) {
            positions[idx].push(base + k as u64);
        }
    }

    ranked
        .into_iter()
        .zip(positions)
        .enumerate()
        .map(|(idx, (value, positions))| RankedValue {
            m: idx as u64 + 1,
            value: BigInt::from(value),
            positions,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibonacci::fib;

    fn recursive(n: u64) -> u64 {
        match n {
            0 => 0,
            1 => 1,
            _ if n.is_multiple_of(2) => recursive(n / 2),
            _ => recursive(n / 2) + recursive(n / 2 + 1),
        }
    }

    fn words(row: &SternRow) -> Vec<u32> {
        row.words().to_vec()
    }

    #[test]
    fn stern_examples() {
        assert_eq!(stern(0), BigInt::from(0));
        assert_eq!(stern(11), BigInt::from(5));
        assert_eq!(stern(1 << 20), BigInt::from(1));
    }

    #[test]
    fn stern_matches_recursion() {
        for n in 0..5000 {
            assert_eq!(stern(n), BigInt::from(recursive(n)));
            assert_eq!(stern_big(&BigUint::from(n)), stern(n));
        }
        for n in 1..=(1u64 << 16) {
            assert_eq!(stern(2 * n), stern(n));
            assert_eq!(stern(2 * n + 1), stern(n) + stern(n + 1));
        }
    }

    #[test]
    fn stern_big_beyond_u64() {
        let n = (BigUint::one() << 100u32) + BigUint::one();
        // s(2^k + 1) = k + 1
        assert_eq!(stern_big(&n), BigInt::from(101));
    }

    #[test]
    fn row_examples() {
        assert_eq!(words(&stern_row(0).unwrap()), vec![1, 1]);
        assert_eq!(words(&stern_row(2).unwrap()), vec![1, 3, 2, 3, 1]);
        assert_eq!(
            words(&stern_row(4).unwrap()),
            vec![1, 5, 4, 7, 3, 8, 5, 7, 2, 7, 5, 8, 3, 7, 4, 5, 1]
        );
    }

    #[test]
    fn row_matches_sequence_and_is_palindromic() {
        for r in 0..=16u32 {
            let row = stern_row(r).unwrap();
            assert_eq!(row.len(), (1 << r) + 1);
            let w = row.words();
            for k in 0..w.len() {
                assert_eq!(BigInt::from(w[k]), stern((1u64 << r) + k as u64));
                assert_eq!(w[k], w[w.len() - 1 - k]);
            }
        }
    }

    #[test]
    fn row_max_is_fibonacci() {
        for r in 0..=20u32 {
            let row = stern_row(r).unwrap();
            let max = row.max();
            assert_eq!(max, fib(r as i64 + 2));
            assert!(!row.positions_of(&max).is_empty());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = stern_row(30).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
        assert!(stern_row_capped(5, MemoryCap(33)).is_ok());
        assert!(stern_row_capped(5, MemoryCap(32)).is_err());
        assert!(stern_row_capped(60, MemoryCap(u64::MAX)).is_err());
    }

    #[test]
    fn top_examples() {
        let values = |r, m| -> Vec<BigInt> {
            brute_force_top(r, m).unwrap().into_iter().map(|v| v.value).collect()
        };
        assert_eq!(values(4, 3), vec![8.into(), 7.into(), 5.into()]);
        assert_eq!(values(0, 5), vec![BigInt::from(1)]);
        assert_eq!(values(7, 4), vec![34.into(), 31.into(), 30.into(), 29.into()]);
        assert!(values(3, 0).is_empty());
    }

    #[test]
    fn top_positions() {
        let top = brute_force_top(4, 2).unwrap();
        assert_eq!(top[0].positions, vec![21, 27]);
        assert_eq!(top[1].positions, vec![19, 23, 25, 29]);
        assert_eq!(brute_force_top(0, 1).unwrap()[0].positions, vec![1, 2]);
    }

    #[test]
    fn top_matches_full_sort() {
        for r in 0..=14u32 {
            let row = stern_row(r).unwrap();
            let mut distinct: Vec<u32> = words(&row);
            distinct.sort_unstable_by(|a, b| b.cmp(a));
            distinct.dedup();
            let top = top_of_row(&row, 6);
            assert_eq!(top.len(), distinct.len().min(6));
            for (t, d) in top.iter().zip(&distinct) {
                assert_eq!(t.value, BigInt::from(*d));
                for &n in &t.positions {
                    assert_eq!(stern(n), t.value);
                }
            }
        }
    }
}
