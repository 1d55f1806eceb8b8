//! Continuants `K(l_1, ..., l_d)` evaluated at positive integers, the
//! continuant-preserving rewrites, the value-increasing split, and the shape
//! classes `E_r`, `E'_r`, `E_{r,a}`, `U_r`, `V_r` that organize row values.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stern::MemoryCap;

/// A finite tuple of positive integers, the argument list of a continuant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Composition(Vec<u64>);

impl Composition {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&l| l == 0) {
            return Err(Error::Validation(format!(
                "composition entry {} is 0, entries must be positive",
                pos + 1
            )));
        }
        Ok(Composition(entries))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    /// `w_d`: `d` ones.
    pub fn ones(d: usize) -> Self {
        Composition(vec![1; d])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for Composition {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<u64> {
    fn from(c: Composition) -> Self {
        c.0
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `l1,l2,...,ld`, optionally wrapped in parentheses. An empty
    /// string or `()` is the empty composition.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Ok(Composition::empty());
        }
        let entries = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Validation(format!("bad composition entry {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(entries)
    }
}

/// Continuant of arbitrary nonnegative arguments.
///
/// Tracks the first row of `(x_1 1; 1 0) ... (x_d 1; 1 0)`, whose `(1,1)`
/// entry is the continuant. Uses `u128` until it would overflow.
pub fn continuant_of(entries: &[u64]) -> BigInt {
    let (mut a, mut b) = (1u128, 0u128);
    for (idx, &x) in entries.iter().enumerate() {
        match a.checked_mul(x as u128).and_then(|ax| ax.checked_add(b)) {
            Some(next) => {
                b = a;
                a = next;
            }
            None => return continuant_big(BigInt::from(a), BigInt::from(b), &entries[idx..]),
        }
    }
    BigInt::from(a)
}

fn continuant_big(mut a: BigInt, mut b: BigInt, rest: &[u64]) -> BigInt {
    for &x in rest {
        let next = &a * x + &b;
        b = std::mem::replace(&mut a, next);
    }
    a
}

/// `K(l_1, ..., l_d)`; `K() = 1`.
pub fn continuant(c: &Composition) -> BigInt {
    continuant_of(c.entries())
}

/// `h(l) = sum (l_i - 1)`.
pub fn weight(c: &Composition) -> u64 {
    c.sum() - c.len() as u64
}

/// Replaces entry `j` (0-based) by the two entries `u, v` with `u + v = l_j`.
///
/// The continuant never decreases; it stays equal exactly when `j` is the
/// first entry and `u = 1`, or `j` is the last entry and `v = 1`.
pub fn split(c: &Composition, j: usize, u: u64, v: u64) -> Result<Composition> {
    let Some(&lj) = c.entries().get(j) else {
        return Err(Error::Contract(format!(
            "split index {j} out of range for {c} (0-based)"
        )));
    };
    if u == 0 || v == 0 || u.checked_add(v) != Some(lj) {
        return Err(Error::Contract(format!(
            "split of entry {lj} into ({u}, {v}) needs positive parts summing to it"
        )));
    }
    let mut out = Vec::with_capacity(c.len() + 1);
    out.extend_from_slice(&c.entries()[..j]);
    out.push(u);
    out.push(v);
    out.extend_from_slice(&c.entries()[j + 1..]);
    Ok(Composition(out))
}

/// Whether [`split`] at `(j, u, v)` keeps the continuant unchanged.
pub fn split_preserves(c: &Composition, j: usize, u: u64, v: u64) -> bool {
    (j == 0 && u == 1) || (j + 1 == c.len() && v == 1)
}

/// Compositions with the same continuant as `c` reachable by one end rewrite:
/// `K(1, x_1, ...) = K(x_1 + 1, ...)`, its mirror `K(..., x_d, 1) = K(..., x_d + 1)`,
/// and the inverses of both.
pub fn rewrite_identities(c: &Composition) -> BTreeSet<Composition> {
    let e = c.entries();
    let d = e.len();
    let mut out = BTreeSet::new();
    if d >= 2 && e[0] == 1 {
        let mut v = e[1..].to_vec();
        v[0] += 1;
        out.insert(Composition(v));
    }
    if d >= 2 && e[d - 1] == 1 {
        let mut v = e[..d - 1].to_vec();
        v[d - 2] += 1;
        out.insert(Composition(v));
    }
    if d >= 1 && e[0] >= 2 {
        let mut v = Vec::with_capacity(d + 1);
        v.push(1);
        v.push(e[0] - 1);
        v.extend_from_slice(&e[1..]);
        out.insert(Composition(v));
    }
    if d >= 1 && e[d - 1] >= 2 {
        let mut v = e.to_vec();
        v[d - 1] -= 1;
        v.push(1);
        out.insert(Composition(v));
    }
    out
}

pub fn reverse(c: &Composition) -> Composition {
    Composition(c.entries().iter().rev().copied().collect())
}

/// Padded shape `w_{p_0,...,p_s}(X_1, ..., X_s)`: blocks of `p_i` ones
/// separated by the marks `X_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KappaShape {
    pads: Vec<u64>,
    marks: Vec<u64>,
}

impl KappaShape {
    pub fn new(pads: Vec<u64>, marks: Vec<u64>) -> Result<Self> {
        if pads.len() != marks.len() + 1 {
            return Err(Error::Validation(format!(
                "{} marks need {} pads, got {}",
                marks.len(),
                marks.len() + 1,
                pads.len()
            )));
        }
        if marks.iter().any(|&x| x < 2) {
            return Err(Error::Validation("marks must be at least 2".into()));
        }
        Ok(KappaShape { pads, marks })
    }

    pub fn pads(&self) -> &[u64] {
        &self.pads
    }

    pub fn marks(&self) -> &[u64] {
        &self.marks
    }

    /// The composition `w`.
    pub fn expand(&self) -> Composition {
        let len = self.pads.iter().sum::<u64>() as usize + self.marks.len();
        let mut out = Vec::with_capacity(len);
        for (i, &p) in self.pads.iter().enumerate() {
            if i > 0 {
                out.push(self.marks[i - 1]);
            }
            out.extend(std::iter::repeat_n(1, p as usize));
        }
        Composition(out)
    }
}

impl fmt::Display for KappaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.pads), join(&self.marks))
    }
}

impl FromStr for KappaShape {
    type Err = Error;

    /// Parses `p0,...,ps|X1,...,Xs`; the part after `|` may be empty or absent.
    fn from_str(s: &str) -> Result<Self> {
        let (pads, marks) = s.split_once('|').unwrap_or((s, ""));
        let list = |t: &str| -> Result<Vec<u64>> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(Vec::new());
            }
            t.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Validation(format!("bad integer {p:?} in {s:?}")))
                })
                .collect()
        };
        KappaShape::new(list(pads)?, list(marks)?)
    }
}

/// `w_{pads}(marks)`. Panics on a malformed shape.
pub fn w(pads: &[u64], marks: &[u64]) -> Composition {
    KappaShape::new(pads.to_vec(), marks.to_vec())
        .expect("well-formed kappa shape")
        .expand()
}

/// `kappa_{p_0..p_s}(X_1..X_s) = K(w_{p_0..p_s}(X_1..X_s))`.
pub fn kappa(ks: &KappaShape) -> BigInt {
    continuant(&ks.expand())
}

/// Families of compositions with unit first and last entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeClass {
    /// `E_r`: sum exactly `r + 1`.
    E { r: i64 },
    /// `E'_r`: sum at most `r + 1`.
    EPrime { r: i64 },
    /// `E_{r,a}`: members of `E_r` with weight `a`.
    EWeight { r: i64, a: u64 },
    /// `E'_{r,a}`: members of `E'_r` with weight `a`.
    EPrimeWeight { r: i64, a: u64 },
    /// `U_r = { w_{p0,p1}(3) : p0, p1 >= 1, p0 + p1 = r - 2 }`.
    U { r: i64 },
    /// `V_r = { w_{p0,p1,p2}(2,2) : p0, p2 >= 1, p1 >= 0, p0 + p1 + p2 = r - 3 }`.
    V { r: i64 },
}

fn unit_ends(e: &[u64]) -> bool {
    e.first() == Some(&1) && e.last() == Some(&1)
}

impl ShapeClass {
    pub fn contains(&self, c: &Composition) -> bool {
        let e = c.entries();
        let sum = c.sum() as i64;
        let marks = || e.iter().filter(|&&l| l != 1).copied().collect::<Vec<_>>();
        match *self {
            ShapeClass::E { r } => unit_ends(e) && sum == r + 1,
            ShapeClass::EPrime { r } => unit_ends(e) && sum <= r + 1,
            ShapeClass::EWeight { r, a } => unit_ends(e) && sum == r + 1 && weight(c) == a,
            ShapeClass::EPrimeWeight { r, a } => unit_ends(e) && sum <= r + 1 && weight(c) == a,
            ShapeClass::U { r } => unit_ends(e) && sum == r + 1 && marks() == [3],
            ShapeClass::V { r } => unit_ends(e) && sum == r + 1 && marks() == [2, 2],
        }
    }

    /// Upper bound on the number of members, checked against the memory cap.
    pub fn size_bound(&self) -> u128 {
        let exact = |r: i64| -> u128 {
            match r {
                r if r < 0 => 0,
                r if r < 2 => 1,
                r => 1u128 << (r - 2).min(126),
            }
        };
        match *self {
            ShapeClass::E { r } | ShapeClass::EWeight { r, .. } => exact(r),
            ShapeClass::EPrime { r } | ShapeClass::EPrimeWeight { r, .. } => {
                (0..=r.min(128)).map(exact).fold(0, u128::saturating_add)
            }
            ShapeClass::U { r } | ShapeClass::V { r } => {
                let r = r.max(0) as u128;
                r * r + 1
            }
        }
    }

    /// Lazily generated members. `E`-type classes come out grouped by
    /// increasing sum and lexicographically within each sum; `U` and `V`
    /// come out by increasing pads.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Composition> + Send> {
        match *self {
            ShapeClass::E { r } => exact_sum(r),
            ShapeClass::EPrime { r } => Box::new((0..=r).flat_map(exact_sum)),
            ShapeClass::EWeight { r, a } => Box::new(exact_sum(r).filter(move |c| weight(c) == a)),
            ShapeClass::EPrimeWeight { r, a } => Box::new(
                (0..=r)
                    .flat_map(exact_sum)
                    .filter(move |c| weight(c) == a),
            ),
            ShapeClass::U { r } => {
                let total = r - 2;
                Box::new((1..total).map(move |p0| w(&[p0 as u64, (total - p0) as u64], &[3])))
            }
            ShapeClass::V { r } => {
                let total = r - 3;
                Box::new((1..total).flat_map(move |p0| {
                    (0..total - p0).map(move |p1| {
                        let p2 = total - p0 - p1;
                        w(&[p0 as u64, p1 as u64, p2 as u64], &[2, 2])
                    })
                }))
            }
        }
    }
}

/// Members of `E_r` in lexicographic order.
fn exact_sum(r: i64) -> Box<dyn Iterator<Item = Composition> + Send> {
    match r {
        r if r < 0 => Box::new(std::iter::empty()),
        0 => Box::new(std::iter::once(Composition(vec![1]))),
        1 => Box::new(std::iter::once(Composition(vec![1, 1]))),
        r => Box::new(LexCompositions::new((r - 1) as u64).map(|inner| {
            let mut v = Vec::with_capacity(inner.len() + 2);
            v.push(1);
            v.extend_from_slice(&inner);
            v.push(1);
            Composition(v)
        })),
    }
}

/// All compositions of `n >= 1` in lexicographic order, from `(1, ..., 1)` to `(n)`.
struct LexCompositions {
    current: Option<Vec<u64>>,
}

impl LexCompositions {
    fn new(n: u64) -> Self {
        LexCompositions {
            current: (n > 0).then(|| vec![1; n as usize]),
        }
    }
}

impl Iterator for LexCompositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        if out.len() > 1 {
            // drop the last part x, bump its predecessor, refill with x - 1 ones
            let mut next = out.clone();
            let x = next.pop().expect("len > 1");
            *next.last_mut().expect("len > 1") += 1;
            next.extend(std::iter::repeat_n(1, (x - 1) as usize));
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All members of a shape class, checked against the default memory cap.
pub fn enumerate_shapes(sc: ShapeClass) -> Result<Vec<Composition>> {
    enumerate_shapes_capped(sc, MemoryCap::DEFAULT)
}

pub fn enumerate_shapes_capped(sc: ShapeClass, cap: MemoryCap) -> Result<Vec<Composition>> {
    cap.check("shape enumeration", sc.size_bound())?;
    Ok(sc.iter().collect())
}

/// One step towards the top of the continuant order: for `c` in `E'_r` but
/// outside `E_{r,0}` and `E_{r,1}`, returns a member of `E_{r-1,0}` or
/// `E_{r,2}` whose continuant is at least `K(c)`.
///
/// Weight 0 maps to `w_r` and weight 1 (`w_{p0,p1}(2)`) maps to
/// `w_{p0, r-2-p0}(3)`. Heavier inputs split their leftmost interior entry
/// `l_j >= 2` into `(l_j - 1, 1)` until one of those cases applies, or stop
/// when the split would land in `E_{r,1}` (the input is then in `E_{r,2}`).
pub fn reduce_step(c: &Composition, r: u64) -> Result<Composition> {
    let ri = r as i64;
    if !(ShapeClass::EPrime { r: ri }).contains(c) {
        return Err(Error::Contract(format!("{c} is not in E'_{r}")));
    }
    if (ShapeClass::EWeight { r: ri, a: 0 }).contains(c)
        || (ShapeClass::EWeight { r: ri, a: 1 }).contains(c)
    {
        return Err(Error::Contract(format!("{c} lies in E_({r},0) or E_({r},1)")));
    }

    let mut current = c.clone();
    loop {
        match weight(&current) {
            0 => return Ok(Composition::ones(r as usize)),
            1 => {
                let p0 = current
                    .entries()
                    .iter()
                    .position(|&l| l == 2)
                    .expect("weight 1 has a single 2") as u64;
                return Ok(w(&[p0, r - 2 - p0], &[3]));
            }
            _ => {
                let e = current.entries();
                let j = (1..e.len() - 1)
                    .find(|&j| e[j] >= 2)
                    .expect("unit ends force an interior entry >= 2");
                let next = split(&current, j, e[j] - 1, 1)?;
                if (ShapeClass::EWeight { r: ri, a: 1 }).contains(&next) {
                    return Ok(current);
                }
                current = next;
            }
        }
    }
}
