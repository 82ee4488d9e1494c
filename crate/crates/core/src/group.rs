//! The base group `H = Z^r x Z_{q_1} x ... x Z_{q_s}` and the direct sum `H + C`.
//!
//! Elements of `H` carry their free coordinates as plain integers and their
//! torsion coordinates reduced into `0..q_i`. An element of `H + C` pairs an
//! element of `H` with the power `k` of the cyclic generator `c`; the power is
//! an arbitrary-precision integer because anchor powers grow super-exponentially.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Concrete presentation of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion_moduli: Vec<u64>,
}

impl GroupDescriptor {
    pub fn free(rank: usize) -> Self {
        GroupDescriptor { free_rank: rank, torsion_moduli: Vec::new() }
    }

    pub fn new(free_rank: usize, torsion_moduli: Vec<u64>) -> Result<Self> {
        let d = GroupDescriptor { free_rank, torsion_moduli };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.free_rank + self.torsion_moduli.len() == 0 {
            return Err(Error::Domain("group must have at least one coordinate".into()));
        }
        if let Some(q) = self.torsion_moduli.iter().find(|&&q| q < 2) {
            return Err(Error::Domain(format!("torsion modulus {q} must be at least 2")));
        }
        Ok(())
    }

    /// Number of coordinates (free then torsion).
    pub fn arity(&self) -> usize {
        self.free_rank + self.torsion_moduli.len()
    }

    /// `|H|` when the group is finite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion_moduli.iter().try_fold(1u128, |acc, &q| acc.checked_mul(q as u128))
    }

    pub fn zero_h(&self) -> HElement {
        HElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_moduli.len()],
        }
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement { h: self.zero_h(), k: BigInt::zero() }
    }

    /// Builds an element, reducing torsion coordinates (negative values allowed).
    pub fn h_element(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<HElement> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_moduli.len() {
            return Err(Error::Shape(format!(
                "element has {} free and {} torsion coordinates, group expects {} and {}",
                free.len(),
                torsion.len(),
                self.free_rank,
                self.torsion_moduli.len()
            )));
        }
        let torsion = torsion
            .iter()
            .zip(&self.torsion_moduli)
            .map(|(&t, &q)| (t as i128).rem_euclid(q as i128) as u64)
            .collect();
        Ok(HElement { free, torsion })
    }

    pub fn check_h(&self, h: &HElement) -> Result<()> {
        if h.free.len() != self.free_rank || h.torsion.len() != self.torsion_moduli.len() {
            return Err(Error::Shape(format!(
                "element {h} does not match group with free rank {} and torsion {:?}",
                self.free_rank, self.torsion_moduli
            )));
        }
        for (&t, &q) in h.torsion.iter().zip(&self.torsion_moduli) {
            if t >= q {
                return Err(Error::Shape(format!("torsion coordinate {t} not reduced mod {q}")));
            }
        }
        Ok(())
    }

    pub fn check(&self, x: &ExtElement) -> Result<()> {
        self.check_h(&x.h)
    }

    /// `a + factor * b` in `H`.
    pub fn add_scaled_h(&self, a: &HElement, b: &HElement, factor: i64) -> HElement {
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + factor * y).collect();
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion_moduli)
            .map(|((&x, &y), &q)| {
                let q = q as i128;
                (x as i128 + factor as i128 * y as i128).rem_euclid(q) as u64
            })
            .collect();
        HElement { free, torsion }
    }

    pub fn add_h(&self, a: &HElement, b: &HElement) -> HElement {
        self.add_scaled_h(a, b, 1)
    }

    pub fn neg_h(&self, a: &HElement) -> HElement {
        self.add_scaled_h(&self.zero_h(), a, -1)
    }

    pub fn neg(&self, x: &ExtElement) -> ExtElement {
        ExtElement { h: self.neg_h(&x.h), k: -&x.k }
    }

    /// `factor * x` in `H + C`.
    pub fn scale(&self, x: &ExtElement, factor: i64) -> ExtElement {
        ExtElement {
            h: self.add_scaled_h(&self.zero_h(), &x.h, factor),
            k: &x.k * factor,
        }
    }
}

/// Sign argument of [`elem_combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `a + sign * b` in `H + C`.
pub fn elem_combine(
    descriptor: &GroupDescriptor,
    a: &ExtElement,
    b: &ExtElement,
    sign: Sign,
) -> Result<ExtElement> {
    descriptor.check(a)?;
    descriptor.check(b)?;
    let f = sign.factor();
    Ok(ExtElement {
        h: descriptor.add_scaled_h(&a.h, &b.h, f),
        k: &a.k + &b.k * f,
    })
}

/// Element of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HElement {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

impl HElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    pub fn max_free_abs(&self) -> u64 {
        self.free.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        for x in &self.free {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{x}")?;
        }
        if !self.torsion.is_empty() {
            write!(f, "; ")?;
            for (i, t) in self.torsion.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{t}")?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HElementRepr {
    h: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    t: Vec<u64>,
}

impl Serialize for HElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HElementRepr { h: self.free.clone(), t: self.torsion.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = HElementRepr::deserialize(deserializer)?;
        Ok(HElement { free: r.h, torsion: r.t })
    }
}

/// Element `h + c^k` of `H + C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElement {
    pub h: HElement,
    pub k: BigInt,
}

impl ExtElement {
    pub fn new(h: HElement, k: impl Into<BigInt>) -> Self {
        ExtElement { h, k: k.into() }
    }

    pub fn in_h(h: HElement) -> Self {
        ExtElement { h, k: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.k.is_zero() && self.h.is_zero()
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, c^{})", self.h, self.k)
    }
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise; accepts either on input.
pub(crate) mod big_int_json {
    use super::*;
    use serde::de;

    pub fn serialize<S: Serializer>(k: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(k) {
            Ok(v) => serializer.serialize_i64(v),
            Err(_) => serializer.collect_str(k),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.trim().parse().map_err(|_| de::Error::custom(format!("invalid integer {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtElementRepr {
    h: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    t: Vec<u64>,
    #[serde(with = "big_int_json")]
    k: BigInt,
}

impl Serialize for ExtElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExtElementRepr { h: self.h.free.clone(), t: self.h.torsion.clone(), k: self.k.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExtElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = ExtElementRepr::deserialize(deserializer)?;
        Ok(ExtElement { h: HElement { free: r.h, torsion: r.t }, k: r.k })
    }
}

// ---------------------------------------------------------------------------
// Enumeration h_1, h_2, ...
// ---------------------------------------------------------------------------

/// Zigzag code 0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ...
pub fn zigzag(x: i64) -> u64 {
    if x > 0 {
        2 * x.unsigned_abs() - 1
    } else {
        2 * x.unsigned_abs()
    }
}

pub fn unzigzag(u: u64) -> i64 {
    if u % 2 == 1 {
        u.div_ceil(2) as i64
    } else {
        -((u / 2) as i64)
    }
}

/// Counts coordinate tuples with a fixed sum over a suffix of the coordinates.
///
/// Free coordinates range over all of `N`, torsion coordinate `i` over
/// `0..q_i`. Counts saturate at `u128::MAX`, which is harmless because they
/// are only ever compared against indices that fit in `u64`.
struct GradedCounter<'a> {
    descriptor: &'a GroupDescriptor,
    /// `torsion_poly[i]` = coefficients of prod_{l >= i} (1 + x + ... + x^{q_l - 1}).
    torsion_poly: Vec<Vec<u128>>,
}

impl<'a> GradedCounter<'a> {
    fn new(descriptor: &'a GroupDescriptor) -> Self {
        let s = descriptor.torsion_moduli.len();
        let mut torsion_poly = vec![vec![1u128]; s + 1];
        for i in (0..s).rev() {
            let q = descriptor.torsion_moduli[i] as usize;
            let next = &torsion_poly[i + 1];
            let mut poly = vec![0u128; next.len() + q - 1];
            for (deg, &c) in next.iter().enumerate() {
                for v in 0..q {
                    poly[deg + v] = poly[deg + v].saturating_add(c);
                }
            }
            torsion_poly[i] = poly;
        }
        GradedCounter { descriptor, torsion_poly }
    }

    /// Number of ways to place `f` free coordinates with total `s`.
    fn free_count(f: usize, s: u64) -> u128 {
        if f == 0 {
            return u128::from(s == 0);
        }
        // C(s + f - 1, f - 1)
        let mut acc: u128 = 1;
        for i in 1..f as u128 {
            acc = match acc.checked_mul(s as u128 + i) {
                Some(v) => v / i,
                None => return u128::MAX,
            };
        }
        acc
    }

    /// Tuples over coordinates `pos..` with sum exactly `s`.
    fn count(&self, pos: usize, s: u64) -> u128 {
        let r = self.descriptor.free_rank;
        let free_left = r.saturating_sub(pos);
        let tpos = pos.saturating_sub(r);
        let poly = &self.torsion_poly[tpos];
        let mut total: u128 = 0;
        for (deg, &c) in poly.iter().enumerate() {
            let deg = deg as u64;
            if deg > s {
                break;
            }
            let f = Self::free_count(free_left, s - deg);
            total = total.saturating_add(c.saturating_mul(f));
        }
        total
    }

    fn upper(&self, pos: usize) -> Option<u64> {
        let r = self.descriptor.free_rank;
        (pos >= r).then(|| self.descriptor.torsion_moduli[pos - r] - 1)
    }
}

/// The `n`-th element (1-based) of the fixed enumeration of `H`.
///
/// Free coordinates are zigzag-encoded, torsion coordinates taken as their
/// representatives, and the resulting tuples of naturals are listed by
/// coordinate sum, ties broken lexicographically. `h_1 = 0`. For finite `H`
/// the listing repeats with period `|H|`.
pub fn enumerate_h(descriptor: &GroupDescriptor, n: u64) -> Result<HElement> {
    descriptor.validate()?;
    if n < 1 {
        return Err(Error::Domain("enumeration index must be at least 1".into()));
    }
    let counter = GradedCounter::new(descriptor);
    let mut rest = n as u128;
    if let Some(order) = descriptor.order() {
        rest = (rest - 1) % order + 1;
    }
    let mut sum = 0u64;
    loop {
        let c = counter.count(0, sum);
        if rest <= c {
            break;
        }
        rest -= c;
        sum += 1;
    }
    let mut coords = Vec::with_capacity(descriptor.arity());
    let mut left = sum;
    for pos in 0..descriptor.arity() {
        let hi = counter.upper(pos).map_or(left, |u| u.min(left));
        let mut chosen = None;
        for v in 0..=hi {
            let c = counter.count(pos + 1, left - v);
            if rest <= c {
                chosen = Some(v);
                break;
            }
            rest -= c;
        }
        let v = chosen.expect("graded count is consistent");
        coords.push(v);
        left -= v;
    }
    let r = descriptor.free_rank;
    Ok(HElement {
        free: coords[..r].iter().map(|&u| unzigzag(u)).collect(),
        torsion: coords[r..].to_vec(),
    })
}

/// Inverse of [`enumerate_h`]: the smallest `n` with `h_n = h`.
pub fn index_of_h(descriptor: &GroupDescriptor, h: &HElement) -> Result<u128> {
    descriptor.check_h(h)?;
    let counter = GradedCounter::new(descriptor);
    let coords: Vec<u64> =
        h.free.iter().map(|&x| zigzag(x)).chain(h.torsion.iter().copied()).collect();
    let sum: u64 = coords.iter().sum();
    let mut index: u128 = 1;
    for s in 0..sum {
        index = index.saturating_add(counter.count(0, s));
    }
    let mut left = sum;
    for (pos, &u) in coords.iter().enumerate() {
        for v in 0..u {
            index = index.saturating_add(counter.count(pos + 1, left - v));
        }
        left -= u;
    }
    Ok(index)
}

/// `|k|` as a `BigInt`, used by callers sizing truncation bounds.
pub fn abs_power(x: &ExtElement) -> BigInt {
    x.k.abs()
}
