//! Alternating binary expansions
//! `A(l_0, ..., l_d) = sum_{i=0}^{d} (-1)^{d-i} 2^{l_0 + ... + l_i}`.
//!
//! Every positive integer has exactly two of them. The canonical one has
//! `d >= 1` and `l_1 = 1`; the other is obtained by [`sibling_expansion`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An alternating binary expansion `(l_0; l_1, ..., l_d)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AltBinExpansion {
    l0: u64,
    tail: Vec<u64>,
}

impl AltBinExpansion {
    pub fn new(l0: u64, tail: Vec<u64>) -> Result<Self> {
        if let Some(pos) = tail.iter().position(|&l| l == 0) {
            return Err(Error::Validation(format!(
                "gap l_{} must be at least 1",
                pos + 1
            )));
        }
        Ok(AltBinExpansion { l0, tail })
    }

    /// Builds the expansion whose partial exponents `k_0 < k_1 < ... < k_d` are given.
    pub fn from_exponents(exponents: &[u64]) -> Result<Self> {
        let (&first, rest) = exponents
            .split_first()
            .ok_or_else(|| Error::Validation("no exponents".into()))?;
        let mut prev = first;
        let mut tail = Vec::with_capacity(rest.len());
        for &k in rest {
            if k <= prev {
                return Err(Error::Validation("exponents must increase strictly".into()));
            }
            tail.push(k - prev);
            prev = k;
        }
        Ok(AltBinExpansion { l0: first, tail })
    }

    pub fn l0(&self) -> u64 {
        self.l0
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    pub fn d(&self) -> usize {
        self.tail.len()
    }

    /// Partial exponents `k_i = l_0 + ... + l_i`.
    pub fn exponents(&self) -> Vec<u64> {
        let mut k = self.l0;
        std::iter::once(k)
            .chain(self.tail.iter().map(|&l| {
                k += l;
                k
            }))
            .collect()
    }

    /// Top exponent `k_d`.
    pub fn top_exponent(&self) -> u64 {
        self.l0 + self.tail.iter().sum::<u64>()
    }

    pub fn is_canonical(&self) -> bool {
        self.tail.first() == Some(&1)
    }

    pub fn into_parts(self) -> (u64, Vec<u64>) {
        (self.l0, self.tail)
    }
}

fn pow2(k: u64) -> BigUint {
    BigUint::one() << k
}

/// Evaluates the expansion.
pub fn evaluate(e: &AltBinExpansion) -> BigUint {
    // A(l_0..l_d) = 2^{k_d} - A(l_0..l_{d-1}); the running value stays positive.
    let mut value = BigUint::zero();
    for k in e.exponents() {
        value = pow2(k) - value;
    }
    value
}

/// The unique expansion of `n` with `d >= 1` and `l_1 = 1`.
///
/// Peels `n -> 2^k - n` with `2^{k-1} <= n < 2^k` until a power of two is
/// reached, collecting the exponents from the top down.
pub fn canonical_expansion(n: &BigUint) -> Result<AltBinExpansion> {
    if n.is_zero() {
        return Err(Error::Domain("0 has no alternating binary expansion".into()));
    }
    let mut exponents = Vec::new();
    let mut rest = n.clone();
    loop {
        let k = rest.bits();
        if rest == pow2(k - 1) {
            // A(k-1, 1) = 2^{k-1}
            exponents.push(k);
            exponents.push(k - 1);
            break;
        }
        exponents.push(k);
        rest = pow2(k) - rest;
    }
    exponents.reverse();
    AltBinExpansion::from_exponents(&exponents)
}

/// The other expansion of the same integer as a canonical expansion.
pub fn sibling_expansion(e: &AltBinExpansion) -> Result<AltBinExpansion> {
    if !e.is_canonical() {
        return Err(Error::Contract(format!("{e} is not canonical (needs l_1 = 1)")));
    }
    let tail = match e.tail.as_slice() {
        [_] => Vec::new(),
        [_, l2, rest @ ..] => std::iter::once(l2 + 1).chain(rest.iter().copied()).collect(),
        [] => unreachable!("canonical expansions have d >= 1"),
    };
    Ok(AltBinExpansion { l0: e.l0, tail })
}

/// Every expansion with top exponent at most `max_exponent`, one per nonempty
/// subset of `{0, ..., max_exponent}`.
pub fn all_expansions(max_exponent: u32) -> impl Iterator<Item = AltBinExpansion> {
    let subsets = 1u64 << (max_exponent + 1);
    (1..subsets).map(|mask| {
        let exponents: Vec<u64> = (0..64).filter(|b| (mask >> b) & 1 == 1).collect();
        AltBinExpansion::from_exponents(&exponents).expect("subset exponents are increasing")
    })
}

impl fmt::Display for AltBinExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({}", self.l0)?;
        for (i, l) in self.tail.iter().enumerate() {
            let sep = if i == 0 { ';' } else { ',' };
            write!(f, "{sep}{l}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for AltBinExpansion {
    type Err = Error;

    /// Parses `A(l0)` or `A(l0; l1,...,ld)`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("A(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Validation(format!("expected A(l0; l1,...,ld), got {s:?}")))?;
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::Validation(format!("bad integer {t:?} in {s:?}")))
        };
        let (head, tail) = match inner.split_once(';') {
            Some((h, t)) => (h, Some(t)),
            None => (inner, None),
        };
        let l0 = num(head)?;
        let tail = match tail {
            None => Vec::new(),
            Some(t) => t.split(',').map(num).collect::<Result<_>>()?,
        };
        AltBinExpansion::new(l0, tail)
    }
}
