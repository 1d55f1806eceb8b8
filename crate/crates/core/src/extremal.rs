//! The largest values of a diatomic row, the kappa identities behind them,
//! and checkers for two recurrences among the largest row values.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::altbin::canonical_expansion;
use crate::continuant::{continuant, continuant_of, w, Composition, ShapeClass};
use crate::error::{Error, Result};
use crate::fibonacci::{fib, ordered_products};
use crate::stern::MemoryCap;

fn f(n: i64) -> BigInt {
    fib(n)
}

/// Number of ranks covered by the closed form in row `r`.
pub fn theorem_ranks(r: u64) -> u64 {
    r.div_ceil(2)
}

/// `L_m(r) = F_{r+2} - F_i F_j` with its index witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormResult {
    pub r: u64,
    pub m: u64,
    pub b: u64,
    pub i: u64,
    pub j: u64,
    #[serde(with = "crate::decimal")]
    pub value: BigInt,
}

/// `b(m, r)`: 0 when `m <= floor((r+3)/4)` or `r` is even, else 1.
pub fn offset_b(r: u64, m: u64) -> u64 {
    if m <= r.div_ceil(4) || r.is_multiple_of(2) {
        0
    } else {
        1
    }
}

/// The `m`-th largest distinct value of row `r` for `1 <= m <= ceil(r/2)`:
/// `L_m(r) = F_{r+2} - F_{2m-2-b} F_{r-2m+1+b}`.
pub fn closed_form_l(r: u64, m: u64) -> Result<ClosedFormResult> {
    let ranks = theorem_ranks(r);
    if m == 0 || m > ranks {
        return Err(Error::Range(format!(
            "closed form covers ranks 1..={ranks} of row {r}, asked for rank {m}"
        )));
    }
    let b = offset_b(r, m);
    let i = 2 * m - 2 - b;
    let j = r + 1 + b - 2 * m;
    let value = f(r as i64 + 2) - f(i as i64) * f(j as i64);
    Ok(ClosedFormResult { r, m, b, i, j, value })
}

/// `{F_{r+2} - F_i F_j : i, j >= 0, i + j = r - 1}`; empty for `r = 0`.
pub fn top_value_set(r: u64) -> BTreeSet<BigInt> {
    if r == 0 {
        return BTreeSet::new();
    }
    let top = f(r as i64 + 2);
    (0..r)
        .map(|i| &top - f(i as i64) * f((r - 1 - i) as i64))
        .collect()
}

/// A continuant computed directly and through one or more closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub shape: Composition,
    pub direct: BigInt,
    /// `(label, value)` for each closed form.
    pub closed: Vec<(&'static str, BigInt)>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.closed.iter().all(|(_, v)| *v == self.direct)
    }
}

/// The closed forms of `kappa_{p0,p1}(2)`, `kappa_{p0,p1}(3)` and
/// `kappa_{p0,p1,p2}(2,2)`, each beside the continuant of its expanded shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaClosedForms {
    pub pads: (u64, u64, u64),
    pub kappa2: IdentityCheck,
    pub kappa3: IdentityCheck,
    pub kappa22: IdentityCheck,
}

impl KappaClosedForms {
    pub fn all_hold(&self) -> bool {
        self.kappa2.holds() && self.kappa3.holds() && self.kappa22.holds()
    }

    pub fn checks(&self) -> [&IdentityCheck; 3] {
        [&self.kappa2, &self.kappa3, &self.kappa22]
    }
}

pub fn kappa_closed_forms(p0: u64, p1: u64, p2: u64) -> KappaClosedForms {
    let (a, b, c) = (p0 as i64, p1 as i64, p2 as i64);
    let s = a + b;
    let t = a + b + c;

    let shape2 = w(&[p0, p1], &[2]);
    let kappa2 = IdentityCheck {
        name: "kappa2",
        direct: continuant(&shape2),
        shape: shape2,
        closed: vec![
            (
                "matrix product",
                2 * f(a + 1) * f(b + 1) + f(a + 1) * f(b) + f(a) * f(b + 1),
            ),
            ("F(s+3) - F(p0)F(p1)", f(s + 3) - f(a) * f(b)),
            (
                "F(s+2) + F(s) + F(p0-1)F(p1-1)",
                f(s + 2) + f(s) + f(a - 1) * f(b - 1),
            ),
        ],
    };

    let shape3 = w(&[p0, p1], &[3]);
    let kappa3 = IdentityCheck {
        name: "kappa3",
        direct: continuant(&shape3),
        shape: shape3,
        closed: vec![
            (
                "matrix product",
                3 * f(a + 1) * f(b + 1) + f(a + 1) * f(b) + f(a) * f(b + 1),
            ),
            (
                "F(s+3) + F(s+1) - 2F(s-2) - 2F(p0-2)F(p1-2)",
                f(s + 3) + f(s + 1) - 2 * f(s - 2) - 2 * f(a - 2) * f(b - 2),
            ),
        ],
    };

    let shape22 = w(&[p0, p1, p2], &[2, 2]);
    let matrix22 = f(a + 1) * f(b) * f(c)
        + f(a) * f(b + 1) * f(c)
        + 2 * f(a + 1) * f(b + 1) * f(c)
        + f(a + 1) * f(b - 1) * f(c + 1)
        + f(a) * f(b) * f(c + 1)
        + 4 * f(a + 1) * f(b) * f(c + 1)
        + 2 * f(a) * f(b + 1) * f(c + 1)
        + 4 * f(a + 1) * f(b + 1) * f(c + 1);
    let correction = f(b)
        * (f(a - 1) * f(c - 1) + 3 * f(a - 2) * f(c - 1) + 3 * f(a - 1) * f(c - 2))
        + 2 * f(a - 2) * f(b + 1) * f(c - 2);
    let lemma22 = (f(t + 4) + f(t + 2) - f(t - 4)) - correction;
    let kappa22 = IdentityCheck {
        name: "kappa22",
        direct: continuant(&shape22),
        shape: shape22,
        closed: vec![("matrix product", matrix22), ("F(t+4) + F(t+2) - F(t-4) - ...", lemma22)],
    };

    KappaClosedForms {
        pads: (p0, p1, p2),
        kappa2,
        kappa3,
        kappa22,
    }
}

/// An extremum over a shape class computed three ways: by a Fibonacci
/// formula, as the continuant of the shape claimed to attain it, and by
/// enumerating the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub formula: BigInt,
    pub witness: Composition,
    pub witness_value: BigInt,
    pub enumerated: BigInt,
}

impl Extremum {
    pub fn agrees(&self) -> bool {
        self.formula == self.witness_value && self.formula == self.enumerated
    }
}

/// Extremal continuants over the weight-1 and weight-2 classes of row `r`,
/// and the comparison that separates them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalBounds {
    pub r: u64,
    /// `F_{r+2}`, the value on `E_{r,0}`.
    pub top: BigInt,
    /// `max E_{r,1} = kappa_{2,r-3}(2) = F_{r+2} - F_{r-3}`, strictly below `top`.
    pub max_e1: Extremum,
    /// `min E_{r,1} = kappa_{1,r-2}(2) = F_{r+1} + F_{r-1}`.
    pub min_e1: Extremum,
    /// `max U_r = kappa_{2,r-4}(3) = F_{r+1} + F_{r-1} - 2F_{r-4}`.
    pub max_u: Extremum,
    /// `max V_r = kappa_{2,0,r-5}(2,2) = F_{r+1} + F_{r-1} - F_{r-7}`.
    pub max_v: Extremum,
    /// `max E_{r-1,0} = F_{r+1}`.
    pub max_prev0: Extremum,
    /// `max E_{r,2}` by enumerating the weight class itself.
    pub max_e2_enumerated: BigInt,
    /// `max(E_{r-1,0} ∪ E_{r,2})`, enumerated.
    pub lower_max: BigInt,
    /// `min E_{r,1}`, enumerated.
    pub upper_min: BigInt,
}

impl ExtremalBounds {
    /// Whether the separation `lower_max <= upper_min` is expected to be strict.
    pub fn strict_expected(&self) -> bool {
        self.r != 7
    }

    pub fn all_hold(&self) -> bool {
        let quantities = [&self.max_e1, &self.min_e1, &self.max_u, &self.max_v, &self.max_prev0];
        quantities.iter().all(|q| q.agrees())
            && self.max_e1.enumerated < self.top
            && self.max_e2_enumerated
                == (&self.max_u.enumerated).max(&self.max_v.enumerated).clone()
            && self.lower_max <= self.upper_min
            && (self.lower_max < self.upper_min) == self.strict_expected()
    }
}

fn extremum<F>(
    class: ShapeClass,
    formula: BigInt,
    witness: Composition,
    pick: F,
) -> Result<Extremum>
where
    F: Fn(BigInt, BigInt) -> BigInt,
{
    MemoryCap::DEFAULT.check("shape enumeration", class.size_bound())?;
    let enumerated = class
        .iter()
        .map(|c| continuant(&c))
        .reduce(&pick)
        .ok_or_else(|| Error::Range("empty shape class".into()))?;
    if !class.contains(&witness) {
        return Err(Error::Contract(format!("witness {witness} is not in {class:?}")));
    }
    Ok(Extremum {
        formula,
        witness_value: continuant(&witness),
        witness,
        enumerated,
    })
}

/// Computes every extremal quantity for row `r >= 6` both in closed form and
/// by enumeration.
pub fn extremal_bounds(r: u64) -> Result<ExtremalBounds> {
    if r < 6 {
        return Err(Error::Range(format!("extremal bounds need r >= 6, got {r}")));
    }
    let ri = r as i64;
    let max = |x: BigInt, y: BigInt| x.max(y);
    let min = |x: BigInt, y: BigInt| x.min(y);

    let top = f(ri + 2);
    let second_product = ordered_products(r - 1)[1].value.clone();
    let max_e1 = extremum(
        ShapeClass::EWeight { r: ri, a: 1 },
        &top - second_product,
        w(&[2, r - 3], &[2]),
        max,
    )?;
    let min_e1 = extremum(
        ShapeClass::EWeight { r: ri, a: 1 },
        f(ri + 1) + f(ri - 1),
        w(&[1, r - 2], &[2]),
        min,
    )?;
    let max_u = extremum(
        ShapeClass::U { r: ri },
        f(ri + 1) + f(ri - 1) - 2 * f(ri - 4),
        w(&[2, r - 4], &[3]),
        max,
    )?;
    let max_v = extremum(
        ShapeClass::V { r: ri },
        f(ri + 1) + f(ri - 1) - f(ri - 7),
        w(&[2, 0, r - 5], &[2, 2]),
        max,
    )?;
    let max_prev0 = extremum(
        ShapeClass::EWeight { r: ri - 1, a: 0 },
        f(ri + 1),
        Composition::ones(r as usize),
        max,
    )?;

    let e2 = ShapeClass::EWeight { r: ri, a: 2 };
    MemoryCap::DEFAULT.check("shape enumeration", e2.size_bound())?;
    let max_e2_enumerated = e2
        .iter()
        .map(|c| continuant(&c))
        .max()
        .ok_or_else(|| Error::Range("empty E_{r,2}".into()))?;
    let lower_max = (&max_prev0.enumerated).max(&max_e2_enumerated).clone();
    let upper_min = min_e1.enumerated.clone();

    Ok(ExtremalBounds {
        r,
        top,
        max_e1,
        min_e1,
        max_u,
        max_v,
        max_prev0,
        max_e2_enumerated,
        lower_max,
        upper_min,
    })
}

/// `{K(l) : l in E'_r}`, the value set of row `r`.
pub fn row_values_via_continuants(r: u64) -> Result<BTreeSet<BigInt>> {
    row_values_via_continuants_capped(r, MemoryCap::DEFAULT)
}

pub fn row_values_via_continuants_capped(r: u64, cap: MemoryCap) -> Result<BTreeSet<BigInt>> {
    let class = ShapeClass::EPrime { r: r as i64 };
    cap.check("shape enumeration", class.size_bound())?;
    Ok(class.iter().map(|c| continuant(&c)).collect())
}

/// `s(n)` through the canonical expansion `n = A(l_0; l_1, ..., l_d)` as `K(l_1, ..., l_d)`.
pub fn stern_continuant_bridge(n: &BigUint) -> Result<BigInt> {
    let e = canonical_expansion(n)?;
    Ok(continuant_of(e.tail()))
}

/// Values on both sides of a recurrence, evaluated at one `(r, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureWitness {
    pub r: u64,
    pub m: u64,
    #[serde(with = "crate::decimal")]
    pub lhs: BigInt,
    #[serde(with = "crate::decimal")]
    pub rhs: BigInt,
    /// The `L` values involved, in the order they appear in the recurrence.
    #[serde(with = "crate::decimal::vec")]
    pub values: Vec<BigInt>,
    pub holds: bool,
}

/// `L_m(r)` from the closed form, or `F_{r+2}` for rank 1 where the closed
/// form's range is empty (`r = 0`).
fn largest(r: u64, m: u64) -> Result<BigInt> {
    if m == 1 {
        return Ok(f(r as i64 + 2));
    }
    Ok(closed_form_l(r, m)?.value)
}

/// `L_m(r) = L_m(r-1) + L_m(r-2)` for `m >= 1`, `r >= 4m - 2`.
pub fn check_conjecture7(r: u64, m: u64) -> Result<ConjectureWitness> {
    if m == 0 || r < 4 * m - 2 {
        return Err(Error::Range(format!(
            "the L_m(r) recurrence needs m >= 1 and r >= 4m - 2, got r = {r}, m = {m}"
        )));
    }
    let (a, b, c) = (largest(r, m)?, largest(r - 1, m)?, largest(r - 2, m)?);
    let rhs = &b + &c;
    Ok(ConjectureWitness {
        r,
        m,
        holds: a == rhs,
        lhs: a.clone(),
        rhs,
        values: vec![a, b, c],
    })
}

/// `L_{m-1}(r) - L_m(r) = F_{r-(4m-5)}` for `m >= 2`, `r >= 4m - 4`.
pub fn check_conjecture9(r: u64, m: u64) -> Result<ConjectureWitness> {
    if m < 2 || r < 4 * m - 4 {
        return Err(Error::Range(format!(
            "the rank-gap identity needs m >= 2 and r >= 4m - 4, got r = {r}, m = {m}"
        )));
    }
    let prev = largest(r, m - 1)?;
    let cur = largest(r, m)?;
    let lhs = &prev - &cur;
    let rhs = f(r as i64 - (4 * m as i64 - 5));
    Ok(ConjectureWitness {
        r,
        m,
        holds: lhs == rhs,
        lhs,
        rhs,
        values: vec![prev, cur],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stern::{brute_force_top, stern, stern_row};

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn closed_form_examples() {
        let c = closed_form_l(6, 1).unwrap();
        assert_eq!((c.value.clone(), c.b, c.i, c.j), (n(21), 0, 0, 5));
        let c = closed_form_l(7, 3).unwrap();
        assert_eq!((c.value.clone(), c.b, c.i, c.j), (n(30), 1, 3, 3));
        let c = closed_form_l(4, 2).unwrap();
        assert_eq!((c.value.clone(), c.b, c.i, c.j), (n(7), 0, 2, 1));
    }

    #[test]
    fn closed_form_witness_invariants() {
        for r in 1..=60u64 {
            for m in 1..=theorem_ranks(r) {
                let c = closed_form_l(r, m).unwrap();
                assert_eq!(c.i + c.j, r - 1);
                assert_eq!(c.i, 2 * m - 2 - c.b);
                assert_eq!(c.value, fib(r as i64 + 2) - fib(c.i as i64) * fib(c.j as i64));
            }
        }
    }

    #[test]
    fn closed_form_range() {
        assert!(matches!(closed_form_l(7, 5), Err(Error::Range(_))));
        assert!(matches!(closed_form_l(7, 0), Err(Error::Range(_))));
        assert!(matches!(closed_form_l(0, 1), Err(Error::Range(_))));
        assert!(closed_form_l(7, 4).is_ok());
    }

    #[test]
    fn closed_form_against_scan_small_rows() {
        for r in 1..=14u64 {
            let ranks = theorem_ranks(r);
            let top = brute_force_top(r as u32, ranks as usize).unwrap();
            for m in 1..=ranks {
                assert_eq!(closed_form_l(r, m).unwrap().value, top[m as usize - 1].value);
            }
            let set: BTreeSet<BigInt> = top.into_iter().map(|t| t.value).collect();
            assert_eq!(set, top_value_set(r));
        }
    }

    #[test]
    fn top_value_set_examples() {
        assert_eq!(top_value_set(1), BTreeSet::from([n(2)]));
        assert_eq!(top_value_set(7), BTreeSet::from([n(34), n(31), n(30), n(29)]));
        assert!(top_value_set(0).is_empty());
        for r in 1..=40 {
            assert_eq!(top_value_set(r).len() as u64, theorem_ranks(r));
        }
    }

    #[test]
    fn kappa_examples() {
        let k = kappa_closed_forms(1, 1, 0);
        assert_eq!(k.kappa2.direct, n(4));
        assert!(k.kappa2.holds());
        let k = kappa_closed_forms(0, 0, 0);
        assert_eq!(k.kappa2.direct, n(2));
        assert!(k.all_hold());
        let k = kappa_closed_forms(2, 0, 1);
        assert_eq!(k.kappa22.shape.entries(), &[1, 1, 2, 2, 1]);
        assert_eq!(k.kappa22.direct, n(17));
        assert!(k.kappa22.holds());
    }

    #[test]
    fn kappa_small_sweep() {
        for p0 in 0..=8 {
            for p1 in 0..=8 {
                for p2 in 0..=8 {
                    let k = kappa_closed_forms(p0, p1, p2);
                    for check in k.checks() {
                        assert!(check.holds(), "{p0} {p1} {p2}: {check:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn bounds_examples() {
        let b = extremal_bounds(8).unwrap();
        assert_eq!(b.min_e1.enumerated, n(47));
        assert!(b.all_hold());
        let b = extremal_bounds(6).unwrap();
        assert_eq!(b.max_v.enumerated, n(17));
        assert!(b.all_hold());
        let b = extremal_bounds(7).unwrap();
        assert_eq!(b.lower_max, b.upper_min);
        assert!(b.all_hold());
        assert!(matches!(extremal_bounds(5), Err(Error::Range(_))));
    }

    #[test]
    fn row_value_examples() {
        assert_eq!(row_values_via_continuants(0).unwrap(), BTreeSet::from([n(1)]));
        assert_eq!(
            row_values_via_continuants(2).unwrap(),
            BTreeSet::from([n(1), n(2), n(3)])
        );
        for r in 0..=10 {
            assert_eq!(
                row_values_via_continuants(r).unwrap(),
                stern_row(r as u32).unwrap().distinct()
            );
        }
    }

    #[test]
    fn bridge_examples() {
        assert_eq!(stern_continuant_bridge(&BigUint::from(11u32)).unwrap(), n(5));
        assert_eq!(stern_continuant_bridge(&BigUint::from(5u32)).unwrap(), stern(5));
        for k in 0..70 {
            let p = BigUint::from(1u32) << k;
            assert_eq!(stern_continuant_bridge(&p).unwrap(), n(1));
        }
        assert!(stern_continuant_bridge(&BigUint::from(0u32)).is_err());
    }

    #[test]
    fn conjecture_examples() {
        let c = check_conjecture7(6, 2).unwrap();
        assert!(c.holds);
        assert_eq!(c.values, vec![n(19), n(12), n(7)]);
        let c = check_conjecture7(4, 1).unwrap();
        assert_eq!(c.values, vec![n(8), n(5), n(3)]);
        assert!(c.holds);
        assert!(check_conjecture7(10, 3).unwrap().holds);
        assert!(check_conjecture7(2, 1).unwrap().holds);
        assert!(matches!(check_conjecture7(5, 2), Err(Error::Range(_))));

        let c = check_conjecture9(6, 2).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (n(2), n(2)));
        assert_eq!(c.values, vec![n(21), n(19)]);
        let c = check_conjecture9(4, 2).unwrap();
        assert_eq!((c.lhs.clone(), c.rhs.clone()), (n(1), n(1)));
        assert!(check_conjecture9(12, 3).unwrap().holds);
        assert!(matches!(check_conjecture9(7, 3), Err(Error::Range(_))));
        assert!(matches!(check_conjecture9(20, 1), Err(Error::Range(_))));
    }
}
