//! The unbounded l1 norm on `Z^2 = <e1, e2>` admits no extension to `Z^2 + C`
//! with `C` dense.
//!
//! Density would give powers `n`, `m` with `D(c^n - e1) < 1/2` and
//! `D(e2 - c^m) < 1/2`. Since `m (c^n - e1) + n (e2 - c^m) = -m e1 + n e2`,
//! invariance and the triangle inequality bound the l1 norm `|m| + |n|` of the
//! right-hand side by `|m| D(c^n - e1) + |n| D(e2 - c^m) < (|m| + |n|) / 2`.
//! Each certificate replays that argument in exact arithmetic for one `(n, m)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ExtElement, GroupDescriptor, HElement};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContradictionReport {
    pub n: i64,
    pub m: i64,
    /// Assumed `D(c^n - e1)`.
    pub v1: Rational,
    /// Assumed `D(e2 - c^m)`.
    pub v2: Rational,
    /// `m (c^n - e1) + n (e2 - c^m) = -m e1 + n e2` checked in `Z^2 + C`.
    pub identity_holds: bool,
    /// l1 norm of `-m e1 + n e2`, i.e. `|m| + |n|`.
    pub required_norm: Rational,
    /// `|m| v1 + |n| v2`.
    pub implied_bound: Rational,
    /// `m v1 + n v2`, the unsigned form; equals `implied_bound` for positive `n, m`.
    pub literal_bound: Rational,
    /// `required_norm - implied_bound`.
    pub margin: Rational,
    /// `(|m| + |n|) / 2 - implied_bound`.
    pub half_norm_gap: Rational,
    /// `implied_bound < (|m| + |n|) / 2 < required_norm`.
    pub contradiction: bool,
}

pub fn counterexample_certificate(n: i64, m: i64, v1: &Rational, v2: &Rational) -> Result<ContradictionReport> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("n and m must be nonzero".into()));
    }
    let half = Rational::new(1, 2);
    for (name, v) in [("v1", v1), ("v2", v2)] {
        if !v.is_positive() || *v >= half {
            return Err(Error::HypothesisNotMet(format!("{name} = {v} must satisfy 0 < {name} < 1/2")));
        }
    }
    let z2 = GroupDescriptor::free(2);
    let e = |a: i64, b: i64| HElement { free: vec![a, b], torsion: vec![] };
    let near_e1 = ExtElement::new(e(-1, 0), n); // c^n - e1
    let near_e2 = ExtElement::new(e(0, 1), -m); // e2 - c^m
    let lhs = {
        let a = z2.scale(&near_e1, m);
        let b = z2.scale(&near_e2, n);
        ExtElement { h: z2.add_h(&a.h, &b.h), k: a.k + b.k }
    };
    let target = ExtElement::in_h(e(-m, n));
    let identity_holds = lhs == target;

    let l1: i64 = target.h.free.iter().map(|x| x.abs()).sum();
    let required_norm = Rational::from(l1);
    let implied_bound = &Rational::from(m.abs()) * v1 + &Rational::from(n.abs()) * v2;
    let literal_bound = &Rational::from(m) * v1 + &Rational::from(n) * v2;
    let half_norm = &required_norm * &half;
    let contradiction = identity_holds && implied_bound < half_norm && half_norm < required_norm;
    Ok(ContradictionReport {
        n,
        m,
        v1: v1.clone(),
        v2: v2.clone(),
        identity_holds,
        margin: &required_norm - &implied_bound,
        half_norm_gap: &half_norm - &implied_bound,
        required_norm,
        implied_bound,
        literal_bound,
        contradiction,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub limit: u64,
    pub assumed_value: Rational,
    pub certificates: u64,
    pub identities_hold: bool,
    pub all_contradictions: bool,
    pub min_margin: Rational,
    pub conclusion: String,
}

#[derive(Clone, Debug)]
pub struct CounterexampleScan {
    pub certificates: Vec<ContradictionReport>,
    pub summary: ScanSummary,
}

/// Value assumed for both `D(c^n - e1)` and `D(e2 - c^m)`: `1/2 - 1/L^2`
/// with `L = max(limit, 2)`, the worst admissible case on an `L x L` grid.
pub fn scan_value(limit: u64) -> Rational {
    let l = limit.max(2) as i64;
    Rational::new(1, 2) - Rational::new(1, l * l)
}

/// Certificates for every `(n, m)` in `[1, limit]^2`.
pub fn counterexample_scan(limit: u64) -> Result<CounterexampleScan> {
    if limit < 1 {
        return Err(Error::Domain("scan limit must be at least 1".into()));
    }
    let v = scan_value(limit);
    let cells: Vec<(i64, i64)> =
        (1..=limit as i64).flat_map(|n| (1..=limit as i64).map(move |m| (n, m))).collect();
    let certificates: Vec<ContradictionReport> =
        cells.par_iter().map(|&(n, m)| counterexample_certificate(n, m, &v, &v)).collect::<Result<_>>()?;
    let identities_hold = certificates.iter().all(|c| c.identity_holds);
    let all_contradictions = certificates.iter().all(|c| c.contradiction);
    let min_margin = certificates.iter().map(|c| c.margin.clone()).min().expect("limit >= 1");
    let conclusion = if all_contradictions {
        format!(
            "for every n, m in [1, {limit}] the assumptions D(c^n - e1), D(e2 - c^m) <= {v} force |m| + |n| < (|m| + |n|)/2: \
             no norm extending unbounded l1 on Z^2 makes C dense"
        )
    } else {
        "some certificate failed; see individual reports".to_string()
    };
    Ok(CounterexampleScan {
        summary: ScanSummary {
            limit,
            assumed_value: v,
            certificates: certificates.len() as u64,
            identities_hold,
            all_contradictions,
            min_margin,
            conclusion,
        },
        certificates,
    })
}
