//! Fibonacci numbers over all integer indices and the identities used to
//! compare products `F_i * F_j` with a fixed index sum.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Largest index whose Fibonacci number fits in a `u128`.
const TABLE_MAX: usize = 186;

fn table() -> &'static [u128; TABLE_MAX + 1] {
    static TABLE: OnceLock<[u128; TABLE_MAX + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u128; TABLE_MAX + 1];
        t[1] = 1;
        for n in 2..=TABLE_MAX {
            t[n] = t[n - 1] + t[n - 2];
        }
        t
    })
}

/// Symmetric 2x2 matrix `(a b; b c)`. Powers of `(1 1; 1 0)` stay in this form.
#[derive(Clone)]
struct SymMat {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl SymMat {
    fn identity() -> Self {
        SymMat {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    fn q() -> Self {
        SymMat {
            a: BigInt::one(),
            b: BigInt::one(),
            c: BigInt::zero(),
        }
    }

    // Products of commuting powers of Q are symmetric, so only three entries are needed.
    fn mul(&self, rhs: &SymMat) -> SymMat {
        SymMat {
            a: &self.a * &rhs.a + &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.c,
            c: &self.b * &rhs.b + &self.c * &rhs.c,
        }
    }
}

/// `F_n` for a nonnegative index, via `(1 1; 1 0)^n = (F_{n+1} F_n; F_n F_{n-1})`.
fn fib_nonneg(n: u64) -> BigInt {
    if n as usize <= TABLE_MAX {
        return BigInt::from(table()[n as usize]);
    }
    let mut result = SymMat::identity();
    let mut base = SymMat::q();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result.b
}

/// The Fibonacci number `F_n` for any integer `n`.
///
/// Negative indices follow `F_{-n} = (-1)^{n+1} F_n`.
pub fn fib(n: i64) -> BigInt {
    let f = fib_nonneg(n.unsigned_abs());
    if n < 0 && n % 2 == 0 {
        -f
    } else {
        f
    }
}

/// Vajda's product: `F_{n+i} F_{n+j} - F_n F_{n+i+j}`, which equals `(-1)^n F_i F_j`.
pub fn vajda(n: i64, i: i64, j: i64) -> BigInt {
    fib(n + i) * fib(n + j) - fib(n) * fib(n + i + j)
}

/// One value of the sorted set `{F_i F_j : i, j >= 0, i + j = n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedProductEntry {
    /// 1-based rank in increasing order.
    pub rank: u64,
    pub i: u64,
    pub j: u64,
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
}

/// Offset `c` selecting the index pair of the `m`-th smallest product.
pub fn product_offset(n: u64, m: u64) -> u64 {
    if m <= (n + 4) / 4 || n % 2 == 1 {
        0
    } else {
        1
    }
}

/// The `ceil((n+1)/2)` distinct values of `F_i F_j` with `i + j = n`, smallest first.
///
/// Entry `m` uses `i = 2m - 2 - c` and `j = n - i`, see [`product_offset`].
pub fn ordered_products(n: u64) -> Vec<OrderedProductEntry> {
    let count = (n + 2) / 2;
    (1..=count)
        .map(|m| {
            let i = 2 * m - 2 - product_offset(n, m);
            let j = n - i;
            OrderedProductEntry {
                rank: m,
                i,
                j,
                value: fib(i as i64) * fib(j as i64),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn naive(n: i64) -> BigInt {
        // walk the recursion forwards or backwards from (F_0, F_1)
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        if n >= 0 {
            for _ in 0..n {
                let next = &a + &b;
                a = std::mem::replace(&mut b, next);
            }
            a
        } else {
            // F_{k-1} = F_{k+1} - F_k
            for _ in 0..(-n) {
                let prev = &b - &a;
                b = std::mem::replace(&mut a, prev);
            }
            a
        }
    }

    #[test]
    fn examples() {
        assert_eq!(fib(0), BigInt::from(0));
        assert_eq!(fib(10), BigInt::from(55));
        assert_eq!(fib(-4), BigInt::from(-3));
    }

    #[test]
    fn matches_naive_walk_including_matrix_path() {
        for n in -300..=300 {
            assert_eq!(fib(n), naive(n), "n = {n}");
        }
        assert_eq!(fib(1000), naive(1000));
    }

    #[test]
    fn recursion_and_reflection() {
        for n in -60..=60i64 {
            assert_eq!(fib(n), fib(n - 1) + fib(n - 2));
        }
        for n in 0..=60i64 {
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(fib(-n), fib(n) * sign);
        }
    }

    #[test]
    fn sign_trichotomy() {
        for n in -40..=40i64 {
            let f = fib(n);
            assert_eq!(f.is_zero(), n == 0);
            assert_eq!(f > BigInt::zero(), n > 0 || n % 2 != 0);
            assert_eq!(f < BigInt::zero(), n < 0 && n % 2 == 0);
        }
    }

    #[test]
    fn vajda_examples() {
        assert_eq!(vajda(0, 3, 5), BigInt::from(10));
        assert_eq!(vajda(2, 1, 1), BigInt::from(1));
        assert_eq!(vajda(1, 2, 2), BigInt::from(-1));
    }

    #[test]
    fn product_difference_identity() {
        for i in -20..=20i64 {
            for j in -20..=20i64 {
                for k in -20..=20i64 {
                    let l = i + j - k;
                    if !(-20..=20).contains(&l) {
                        continue;
                    }
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    assert_eq!(
                        fib(i) * fib(j) - fib(k) * fib(l),
                        fib(i - k) * fib(j - k) * sign
                    );
                }
            }
        }
        for n in -15..=15 {
            for i in -15..=15 {
                for j in -15..=15 {
                    let sign = if n % 2 == 0 { 1 } else { -1 };
                    assert_eq!(vajda(n, i, j), fib(i) * fib(j) * sign);
                }
            }
        }
    }

    #[test]
    fn ordered_product_examples() {
        let e = ordered_products(0);
        assert_eq!(e, vec![OrderedProductEntry { rank: 1, i: 0, j: 0, value: 0.into() }]);

        let pairs = |n| {
            ordered_products(n)
                .into_iter()
                .map(|e| (e.i, e.j, e.value))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            pairs(5),
            vec![(0, 5, 0.into()), (2, 3, 2.into()), (4, 1, 3.into())]
        );
        assert_eq!(
            pairs(6),
            vec![
                (0, 6, 0.into()),
                (2, 4, 3.into()),
                (3, 3, 4.into()),
                (5, 1, 5.into())
            ]
        );
    }

    #[test]
    fn ordered_products_match_brute_force() {
        for n in 0..=40u64 {
            let brute: BTreeSet<BigInt> = (0..=n)
                .map(|i| naive(i as i64) * naive((n - i) as i64))
                .collect();
            let got = ordered_products(n);
            assert_eq!(got.len(), brute.len(), "n = {n}");
            for (entry, want) in got.iter().zip(&brute) {
                assert_eq!(&entry.value, want);
                assert_eq!(entry.i + entry.j, n);
                assert_eq!(naive(entry.i as i64) * naive(entry.j as i64), entry.value);
            }
        }
    }
}
