//! The inductive data defining the partial norm on `H + C`.
//!
//! Anchor `n` ties the power `c^{k_n}` to the enumerated element `h_m`, where
//! `(m, j)` is the `n`-th pair of the anti-diagonal pairing, and declares
//! `D'(c^{k_n} - h_m) = D'(h_m - c^{k_n}) = 1/j`. The powers are chosen by
//! `k_1 = 1` and `k_n = floor(k_{n-1} / delta_n) + 1` with
//! `delta_n = min { 1/j_i : i < n }`, the least power the construction allows.
//! They depend on nothing but `n`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_h, ExtElement, GroupDescriptor, HElement};
use crate::norm::{base_norm, NormSpec};
use crate::rational::Rational;

/// Current on-disk table format.
pub const TABLE_VERSION: u64 = 1;

/// The `n`-th pair (1-based) of `N>=1 x N>=1` in anti-diagonal order:
/// (1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ...
pub fn pair_index(n: u64) -> Result<(u64, u64)> {
    if n < 1 {
        return Err(Error::Domain("pair index must be at least 1".into()));
    }
    // Largest d with d(d-1)/2 < n, i.e. n lies on diagonal d (m + j = d + 1).
    let mut d = ((8 * n as u128).isqrt() as u64).div_ceil(2).max(1);
    while d * (d - 1) / 2 >= n {
        d -= 1;
    }
    while (d + 1) * d / 2 < n {
        d += 1;
    }
    let m = n - d * (d - 1) / 2;
    Ok((m, d + 1 - m))
}

/// Inverse of [`pair_index`]: `(m+j-1)(m+j-2)/2 + m`.
pub fn unpair_index(m: u64, j: u64) -> Result<u64> {
    if m < 1 || j < 1 {
        return Err(Error::Domain("pair coordinates must be at least 1".into()));
    }
    let s = m + j;
    Ok((s - 1) * (s - 2) / 2 + m)
}

/// Powers `k_1..k_N` and thresholds `delta_1..delta_N` (`delta_1 = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSequence {
    pub powers: Vec<BigInt>,
    pub deltas: Vec<Rational>,
}

pub fn k_sequence(depth: usize) -> Result<KSequence> {
    if depth < 1 {
        return Err(Error::Domain("table depth must be at least 1".into()));
    }
    let mut powers = Vec::with_capacity(depth);
    let mut deltas = Vec::with_capacity(depth);
    powers.push(BigInt::one());
    deltas.push(Rational::one());
    let mut delta = Rational::one();
    for n in 2..=depth as u64 {
        let (_, j_prev) = pair_index(n - 1)?;
        delta = delta.min(Rational::reciprocal_of(j_prev));
        let prev = Rational::from_integer(powers.last().unwrap().clone());
        powers.push((prev / &delta).floor() + 1);
        deltas.push(delta.clone());
    }
    Ok(KSequence { powers, deltas })
}

/// Smallest depth whose last power reaches `bound`.
pub(crate) fn depth_reaching(bound: &Rational, from: usize) -> usize {
    let mut depth = from.max(1);
    loop {
        let seq = k_sequence(depth).expect("depth >= 1");
        if let Some(i) = seq.powers.iter().position(|k| Rational::from_integer(k.clone()) >= *bound) {
            return i + 1;
        }
        depth *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub n: u64,
    /// `m`: enumeration index of the target.
    pub target_index: u64,
    /// `j`: the anchor's value is `1/j`.
    pub precision_index: u64,
    pub power: BigInt,
    pub target: HElement,
    pub value: Rational,
}

impl Anchor {
    /// `c^{k_n} - h_m`.
    pub fn element(&self, descriptor: &GroupDescriptor) -> ExtElement {
        ExtElement { h: descriptor.neg_h(&self.target), k: self.power.clone() }
    }
}

/// The construction's state up to depth `N`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorTable {
    descriptor: GroupDescriptor,
    spec: NormSpec,
    anchors: Vec<Anchor>,
    deltas: Vec<Rational>,
}

/// The norm-independent part of a table: pairing, thresholds and powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleBlock {
    pub pairs: Vec<(u64, u64)>,
    pub deltas: Vec<Rational>,
    pub powers: Vec<String>,
}

impl AnchorTable {
    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.anchors.len()
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    /// Anchor `n`, 1-based.
    pub fn anchor(&self, n: usize) -> Option<&Anchor> {
        n.checked_sub(1).and_then(|i| self.anchors.get(i))
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    pub fn power(&self, n: usize) -> &BigInt {
        &self.anchors[n - 1].power
    }

    pub fn anchor_element(&self, n: usize) -> ExtElement {
        self.anchors[n - 1].element(&self.descriptor)
    }

    /// `d(h)` under this table's base norm.
    pub fn base_norm(&self, h: &HElement) -> Result<Rational> {
        base_norm(&self.spec, &self.descriptor, h)
    }

    pub fn schedule(&self) -> ScheduleBlock {
        ScheduleBlock {
            pairs: self.anchors.iter().map(|a| (a.target_index, a.precision_index)).collect(),
            deltas: self.deltas.clone(),
            powers: self.anchors.iter().map(|a| a.power.to_string()).collect(),
        }
    }

    /// Canonical JSON bytes of [`Self::schedule`].
    pub fn schedule_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(&self.schedule()).expect("schedule serializes")
    }

    /// Copy with `k_n` replaced. The result generally violates the recurrence;
    /// it exists for fault-injection tests of the verification suites.
    #[doc(hidden)]
    pub fn with_power_override(&self, n: usize, power: BigInt) -> AnchorTable {
        let mut t = self.clone();
        t.anchors[n - 1].power = power;
        t
    }

    /// Same schedule, different base norm.
    pub fn with_spec(&self, spec: NormSpec) -> Result<AnchorTable> {
        spec.validate(&self.descriptor)?;
        Ok(AnchorTable { spec, ..self.clone() })
    }

    fn from_schedule(descriptor: &GroupDescriptor, spec: &NormSpec, seq: &KSequence) -> Result<Self> {
        descriptor.validate()?;
        spec.validate(descriptor)?;
        let anchors = seq
            .powers
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let n = i as u64 + 1;
                let (m, j) = pair_index(n)?;
                Ok(Anchor {
                    n,
                    target_index: m,
                    precision_index: j,
                    power: k.clone(),
                    target: enumerate_h(descriptor, m)?,
                    value: Rational::reciprocal_of(j),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AnchorTable {
            descriptor: descriptor.clone(),
            spec: spec.clone(),
            anchors,
            deltas: seq.deltas.clone(),
        })
    }
}

pub fn build_anchor_table(descriptor: &GroupDescriptor, spec: &NormSpec, depth: usize) -> Result<AnchorTable> {
    let seq = k_sequence(depth)?;
    AnchorTable::from_schedule(descriptor, spec, &seq)
}

/// One table per spec, all sharing the same pairing, thresholds and powers.
pub fn extend_family(descriptor: &GroupDescriptor, specs: &[NormSpec], depth: usize) -> Result<Vec<AnchorTable>> {
    let seq = k_sequence(depth)?;
    specs.iter().map(|s| AnchorTable::from_schedule(descriptor, s, &seq)).collect()
}

/// `D'(x)` where defined: `d(x.h)` on `H`, `1/j` on `+-(c^{k_n} - h_m)`.
pub fn partial_norm_lookup(table: &AnchorTable, x: &ExtElement) -> Option<Rational> {
    let desc = table.descriptor();
    desc.check(x).ok()?;
    if x.k.is_zero() {
        return table.base_norm(&x.h).ok();
    }
    let neg = desc.neg_h(&x.h);
    let abs = x.k.abs();
    table.anchors().iter().filter(|a| a.power == abs).find_map(|a| {
        let expected_h = if x.k.is_positive() { &neg } else { &x.h };
        (a.target == *expected_h).then(|| a.value.clone())
    })
}

// ---------------------------------------------------------------------------
// JSON document
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorRecord {
    pub n: u64,
    pub m: u64,
    pub j: u64,
    pub k: String,
    pub delta: Rational,
}

/// Serialized table. Targets are not stored; they are recomputed on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub version: u64,
    pub descriptor: GroupDescriptor,
    pub spec: NormSpec,
    #[serde(rename = "N")]
    pub depth: usize,
    pub anchors: Vec<AnchorRecord>,
}

impl AnchorTable {
    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            version: TABLE_VERSION,
            descriptor: self.descriptor.clone(),
            spec: self.spec.clone(),
            depth: self.depth(),
            anchors: self
                .anchors
                .iter()
                .zip(&self.deltas)
                .map(|(a, d)| AnchorRecord {
                    n: a.n,
                    m: a.target_index,
                    j: a.precision_index,
                    k: a.power.to_string(),
                    delta: d.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the table from the recurrence and rejects any record that
    /// disagrees with it.
    pub fn from_document(doc: &TableDocument) -> Result<AnchorTable> {
        if doc.version != TABLE_VERSION {
            return Err(Error::Version { found: doc.version, expected: TABLE_VERSION });
        }
        if doc.anchors.len() != doc.depth {
            return Err(Error::CorruptedTable(format!(
                "N = {} but {} anchors stored",
                doc.depth,
                doc.anchors.len()
            )));
        }
        let table = build_anchor_table(&doc.descriptor, &doc.spec, doc.depth)?;
        for ((rec, a), delta) in doc.anchors.iter().zip(&table.anchors).zip(&table.deltas) {
            let k: BigInt = rec
                .k
                .parse()
                .map_err(|_| Error::Parse(format!("anchor {}: invalid power {:?}", rec.n, rec.k)))?;
            if rec.n != a.n || rec.m != a.target_index || rec.j != a.precision_index {
                return Err(Error::CorruptedTable(format!(
                    "anchor {}: pair ({}, {}) does not match pairing ({}, {})",
                    a.n, rec.m, rec.j, a.target_index, a.precision_index
                )));
            }
            if k != a.power {
                return Err(Error::CorruptedTable(format!(
                    "anchor {}: k = {} but the recurrence gives {}",
                    a.n, k, a.power
                )));
            }
            if rec.delta != *delta {
                return Err(Error::CorruptedTable(format!(
                    "anchor {}: delta = {} but the recurrence gives {}",
                    a.n, rec.delta, delta
                )));
            }
        }
        Ok(table)
    }
}
