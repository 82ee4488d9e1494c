//! Certified evaluation of the extended norm
//! `D(x) = min(1, inf sum D'(x_i))` over decompositions `x = x_1 + ... + x_m`
//! into elements of the partial norm's domain.
//!
//! Every decomposition can be put in canonical form: one residual summand in
//! `H` plus integer multiples `m_n` of the anchors `a_n = c^{k_n} - h_m`.
//! Merging the `H` summands never increases cost (`d` is subadditive) and
//! opposite copies of an anchor cancel. The cost is then
//! `sum |m_n| / j_n + d(h')`.
//!
//! The infimum ranges over infinitely many anchors. It becomes finite through
//! the following bound: if a canonical decomposition of `x` uses anchor
//! `n* >= 2` as its largest index, then the lower anchors must make up at least
//! `(k_{n*} - |x.k|) / k_{n*-1}` units, each costing at least `delta_{n*}`, and
//! `delta_{n*} k_{n*} > k_{n*-1}`; so the cost exceeds `1 - |x.k| / k_{n*-1}`.
//! Decompositions of cost `<= t` therefore only use anchors `n` with
//! `k_{n-1} < |x.k| / (1 - t)`, see [`truncation_index`].

mod oracle;
mod search;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::construction::{depth_reaching, unpair_index, AnchorTable};
use crate::error::{Error, Result};
use crate::group::{ExtElement, HElement};
use crate::rational::Rational;

pub use crate::construction::extend_family;
pub use oracle::brute_force_eval;
pub use search::best_decomposition;

/// Canonical decomposition: anchor multiplicities plus one residual in `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Anchor index `n` to nonzero multiplicity `m_n`.
    #[serde(rename = "coeffs")]
    pub coefficients: BTreeMap<usize, i64>,
    pub residual: HElement,
    pub cost: Rational,
}

impl Decomposition {
    /// Number of summands when written as a plain sum of domain elements.
    pub fn summand_count(&self) -> u64 {
        let anchors: u64 = self.coefficients.values().map(|m| m.unsigned_abs()).sum();
        anchors + u64::from(!self.residual.is_zero())
    }

    /// Whether the plain-sum form has at most `max_summands` terms and a
    /// residual with free coordinates bounded by `radius`.
    pub fn fits_within(&self, max_summands: usize, radius: u64) -> bool {
        self.summand_count() <= max_summands as u64 && self.residual.max_free_abs() <= radius
    }

    /// Re-derives the element this decomposition sums to.
    pub fn recompose(&self, table: &AnchorTable) -> ExtElement {
        let desc = table.descriptor();
        let mut x = ExtElement::in_h(self.residual.clone());
        for (&n, &m) in &self.coefficients {
            let a = table.anchor_element(n);
            x = ExtElement { h: desc.add_scaled_h(&x.h, &a.h, m), k: &x.k + &a.k * m };
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `x` lies in `H` and `D(x) = d(x)`.
    HOnly,
    Decomposition(Decomposition),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::HOnly => serializer.serialize_str("h_only"),
            Witness::Decomposition(d) => d.serialize(serializer),
        }
    }
}

/// Certified value of `D(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    /// `D(x) = value` exactly; no decomposition, however deep, is cheaper.
    Exact { value: Rational, witness: Witness, truncation_level: usize },
    /// `lower < D(x) <= 1`.
    Interval { lower: Rational },
}

impl EvalResult {
    pub fn exact_value(&self) -> Option<&Rational> {
        match self {
            EvalResult::Exact { value, .. } => Some(value),
            EvalResult::Interval { .. } => None,
        }
    }

    /// Largest certified upper bound on `D(x)`.
    pub fn upper(&self) -> Rational {
        self.exact_value().cloned().unwrap_or_else(Rational::one)
    }

    /// Certified lower bound; strict for intervals.
    pub fn lower(&self) -> &Rational {
        match self {
            EvalResult::Exact { value, .. } => value,
            EvalResult::Interval { lower } => lower,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, EvalResult::Exact { .. })
    }

    /// Same certified value, ignoring the witness.
    pub fn same_value(&self, other: &EvalResult) -> bool {
        match (self, other) {
            (EvalResult::Exact { value: a, .. }, EvalResult::Exact { value: b, .. }) => a == b,
            (EvalResult::Interval { lower: a }, EvalResult::Interval { lower: b }) => a == b,
            _ => false,
        }
    }

    /// Whether `D(x) <= bound` is certified.
    pub fn certifies_at_most(&self, bound: &Rational) -> bool {
        self.upper() <= *bound
    }
}

impl Serialize for EvalResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            EvalResult::Exact { value, witness, truncation_level } => {
                let mut map = serializer.serialize_map(Some(4))?;
                map.serialize_entry("kind", "exact")?;
                map.serialize_entry("value", value)?;
                map.serialize_entry("witness", witness)?;
                map.serialize_entry("truncation_level", truncation_level)?;
                map.end()
            }
            EvalResult::Interval { lower } => {
                let mut map = serializer.serialize_map(Some(3))?;
                map.serialize_entry("kind", "interval")?;
                map.serialize_entry("lower", lower)?;
                map.serialize_entry("upper", &Rational::one())?;
                map.end()
            }
        }
    }
}

/// Default `epsilon`: values above `1 - 1/1024` are reported as an interval.
pub fn default_epsilon() -> Rational {
    Rational::new(1, 1024)
}

fn check_unit_open(name: &str, v: &Rational) -> Result<()> {
    if v.is_positive() && *v < 1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")))
    }
}

/// Anchor depth `N_t` beyond which every decomposition of an element with
/// generator power `k` costs more than `t`.
///
/// This is the largest `n` with `n = 1` or `k_{n-1} < |k| / (1 - t)`, and `0`
/// when `k = 0` (any anchor-using decomposition of an element of `H` costs
/// more than 1).
pub fn truncation_index(table: &AnchorTable, k: &BigInt, t: &Rational) -> Result<usize> {
    check_unit_open("t", t)?;
    if k.is_zero() {
        return Ok(0);
    }
    let bound = Rational::from_integer(k.abs()) / (Rational::one() - t.clone());
    let hit = table
        .anchors()
        .iter()
        .position(|a| Rational::from_integer(a.power.clone()) >= bound);
    match hit {
        Some(i) => Ok(i + 1),
        None => Err(Error::ExtendTable {
            required_depth: depth_reaching(&bound, table.depth()),
            depth: table.depth(),
        }),
    }
}

/// Certified `D(x)`: exact when `D(x) <= 1 - epsilon`, otherwise the interval
/// `(1 - epsilon, 1]`.
pub fn evaluate(table: &AnchorTable, x: &ExtElement, epsilon: &Rational) -> Result<EvalResult> {
    check_unit_open("epsilon", epsilon)?;
    table.descriptor().check(x)?;
    if x.k.is_zero() {
        return Ok(EvalResult::Exact {
            value: table.base_norm(&x.h)?,
            witness: Witness::HOnly,
            truncation_level: 0,
        });
    }
    let t = Rational::one() - epsilon.clone();
    let level = truncation_index(table, &x.k, &t)?;
    Ok(match best_decomposition(table, x, &t, level)? {
        Some(d) => EvalResult::Exact { value: d.cost.clone(), witness: Witness::Decomposition(d), truncation_level: level },
        None => EvalResult::Interval { lower: t },
    })
}

/// `D_N(x)`: the capped minimum over decompositions using anchors `1..=N`
/// only. Not certified; an upper bound on `D(x)` that is non-increasing in `N`.
pub fn evaluate_truncated(table: &AnchorTable, x: &ExtElement, depth: usize) -> Result<Rational> {
    let best = best_decomposition(table, x, &Rational::one(), depth)?;
    Ok(best.map_or_else(Rational::one, |d| d.cost.cap_one()))
}

/// Certificate that `c^{k_n}` lies within `1/j` of `h_m`, for `n = pi^{-1}(m, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityWitness {
    pub n: u64,
    pub m: u64,
    pub j: u64,
    #[serde(serialize_with = "serialize_big")]
    pub power: BigInt,
    pub bound: Rational,
    pub certified: EvalResult,
}

fn serialize_big<S: Serializer>(k: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(k)
}

impl DensityWitness {
    pub fn holds(&self) -> bool {
        self.certified.certifies_at_most(&self.bound)
    }
}

pub fn density_witness(table: &AnchorTable, m: u64, j: u64, epsilon: &Rational) -> Result<DensityWitness> {
    let n = unpair_index(m, j)?;
    if n as usize > table.depth() {
        return Err(Error::ExtendTable { required_depth: n as usize, depth: table.depth() });
    }
    let x = table.anchor_element(n as usize);
    let certified = evaluate(table, &x, epsilon)?;
    Ok(DensityWitness {
        n,
        m,
        j,
        power: table.power(n as usize).clone(),
        bound: Rational::reciprocal_of(j),
        certified,
    })
}
