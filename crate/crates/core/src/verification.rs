//! Seeded property suites over a built [`AnchorTable`].
//!
//! Samples are drawn with [`LinearGrid`]: enumeration indices come from
//! `1..=INDEX_WINDOW` (or all of `H` when it is finite, in which case the
//! sample count is raised to `|H|` so every element is visited) and generator
//! powers from `[-r, r]`. Samples are evaluated in parallel; violations are
//! reported in sample order, so reports depend only on the table and seed.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::{unpair_index, AnchorTable};
use crate::error::{Error, Result};
use crate::evaluator::{default_epsilon, density_witness, evaluate, evaluate_truncated, EvalResult};
use crate::group::{enumerate_h, ExtElement};
use crate::rational::Rational;
use crate::sampling::{centered, LinearGrid};

/// Enumeration indices sampled from an infinite `H`.
pub const INDEX_WINDOW: u64 = 101;
/// `|k|` bound for sampled pairs in [`verify_norm_axioms`].
pub const AXIOM_K_RADIUS: u64 = 3;
/// `|k|` bound for [`verify_truncation`].
pub const TRUNCATION_K_RADIUS: u64 = 5;
/// Anchor pairs `(a_n, -a_m)` with `n, m` up to this are always probed by
/// [`verify_norm_axioms`].
pub const ANCHOR_PROBE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub sample: u64,
    pub check: String,
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: u64,
    /// Probes that could not be evaluated at this table depth.
    pub skipped: u64,
    pub violations: Vec<Violation>,
    /// Not serialized, so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn violation(sample: u64, check: &str, input: impl ToString, expected: impl ToString, got: impl ToString) -> Violation {
    Violation {
        sample,
        check: check.into(),
        input: input.to_string(),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

fn describe(r: &EvalResult) -> String {
    match r {
        EvalResult::Exact { value, .. } => value.to_string(),
        EvalResult::Interval { lower } => format!("({lower}, 1/1]"),
    }
}

fn index_window(table: &AnchorTable) -> u64 {
    table.descriptor().order().map_or(INDEX_WINDOW, |o| o.min(u64::MAX as u128) as u64)
}

fn sample_total(table: &AnchorTable, requested: u64) -> u64 {
    match table.descriptor().order() {
        Some(o) => requested.max(o.min(u64::MAX as u128) as u64),
        None => requested,
    }
}

fn run_samples<F>(count: u64, check: F) -> Result<(Vec<Violation>, u64)>
where
    F: Fn(u64) -> Result<(Vec<Violation>, u64)> + Sync,
{
    let per_sample: Vec<(Vec<Violation>, u64)> =
        (0..count).into_par_iter().map(&check).collect::<Result<_>>()?;
    let skipped = per_sample.iter().map(|(_, s)| s).sum();
    Ok((per_sample.into_iter().flat_map(|(v, _)| v).collect(), skipped))
}

/// `D(h) = d(h)` for sampled `h` in `H`, with an exact certificate.
pub fn verify_extension(table: &AnchorTable, sample_count: u64, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let desc = table.descriptor();
    let grid = LinearGrid::new(seed, vec![index_window(table)]);
    let eps = default_epsilon();
    let count = sample_total(table, sample_count);
    let check = |i: u64| -> Result<(Vec<Violation>, u64)> {
        let h = if i == 0 { desc.zero_h() } else { enumerate_h(desc, grid.point(i)[0] + 1)? };
        let expected = table.base_norm(&h)?;
        let r = evaluate(table, &ExtElement::in_h(h.clone()), &eps)?;
        let mut out = Vec::new();
        match &r {
            EvalResult::Exact { value, truncation_level: 0, .. } if *value == expected => {}
            _ => out.push(violation(i, "extension", &h, &expected, describe(&r))),
        }
        Ok((out, 0))
    };
    let (violations, skipped) = run_samples(count, check)?;
    Ok(SuiteReport { suite: "extension".into(), samples: count, skipped, violations, wall_time: start.elapsed() })
}

/// The only triangle inequality that certificates can refute:
/// `D(x + y) <= D(x) + D(y)` fails for sure iff the certified lower end for
/// `x + y` is already at least the sum of certified upper bounds.
pub fn triangle_refuted(rx: &EvalResult, ry: &EvalResult, rxy: &EvalResult) -> bool {
    let sum = (rx.upper() + ry.upper()).cap_one();
    match rxy {
        EvalResult::Exact { value, .. } => *value > sum,
        EvalResult::Interval { lower } => sum <= *lower,
    }
}

fn single_checks(table: &AnchorTable, i: u64, x: &ExtElement, rx: &EvalResult, out: &mut Vec<Violation>) {
    match rx {
        EvalResult::Exact { value, .. } => {
            if *value > 1 || value.is_negative() {
                out.push(violation(i, "cap", x, "0 <= D <= 1", value));
            }
            if x.is_zero() && !value.is_zero() {
                out.push(violation(i, "zero", x, "0/1", value));
            }
            if !x.is_zero() && value.is_zero() && !table.spec().is_pseudonorm() {
                out.push(violation(i, "positivity", x, "> 0", value));
            }
        }
        EvalResult::Interval { lower } => {
            if *lower >= 1 || !lower.is_positive() {
                out.push(violation(i, "cap", x, "0 < lower < 1", lower));
            }
        }
    }
}

fn pair_checks(
    table: &AnchorTable,
    i: u64,
    x: &ExtElement,
    y: &ExtElement,
    eps: &Rational,
) -> Result<Vec<Violation>> {
    let desc = table.descriptor();
    let rx = evaluate(table, x, eps)?;
    let ry = evaluate(table, y, eps)?;
    let rneg = evaluate(table, &desc.neg(x), eps)?;
    let sum = ExtElement { h: desc.add_h(&x.h, &y.h), k: &x.k + &y.k };
    let rxy = evaluate(table, &sum, eps)?;
    let mut out = Vec::new();
    single_checks(table, i, x, &rx, &mut out);
    if !rx.same_value(&rneg) {
        out.push(violation(i, "symmetry", x, describe(&rx), describe(&rneg)));
    }
    if triangle_refuted(&rx, &ry, &rxy) {
        out.push(violation(
            i,
            "triangle",
            format!("x = {x}, y = {y}"),
            format!("D(x+y) <= {} + {}", describe(&rx), describe(&ry)),
            describe(&rxy),
        ));
    }
    Ok(out)
}

/// Symmetry, triangle inequality, cap and `D(0) = 0` on sampled pairs with
/// `|k| <= AXIOM_K_RADIUS`, plus the anchor pairs `(a_n, -a_m)`.
pub fn verify_norm_axioms(
    table: &AnchorTable,
    sample_count: u64,
    seed: u64,
    epsilon: &Rational,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let desc = table.descriptor();
    let w = index_window(table);
    let side = 2 * AXIOM_K_RADIUS + 1;
    let grid = LinearGrid::new(seed, vec![w, w, side, side]);
    let count = sample_total(table, sample_count);
    let probe_n = table.depth().min(ANCHOR_PROBE_LIMIT);
    let probes: Vec<(usize, usize)> =
        (1..=probe_n).flat_map(|n| (1..=probe_n).filter(move |&m| m != n).map(move |m| (n, m))).collect();
    let total = count + 1 + probes.len() as u64;

    let check = |i: u64| -> Result<(Vec<Violation>, u64)> {
        if i == 0 {
            let r = evaluate(table, &desc.zero(), epsilon)?;
            let mut out = Vec::new();
            single_checks(table, 0, &desc.zero(), &r, &mut out);
            return Ok((out, 0));
        }
        let (x, y) = if i <= count {
            let p = grid.point(i - 1);
            (
                ExtElement::new(enumerate_h(desc, p[0] + 1)?, centered(p[2], AXIOM_K_RADIUS)),
                ExtElement::new(enumerate_h(desc, p[1] + 1)?, centered(p[3], AXIOM_K_RADIUS)),
            )
        } else {
            let (n, m) = probes[(i - count - 1) as usize];
            (table.anchor_element(n), desc.neg(&table.anchor_element(m)))
        };
        match pair_checks(table, i, &x, &y, epsilon) {
            Ok(v) => Ok((v, 0)),
            Err(Error::ExtendTable { .. }) if i > count => Ok((Vec::new(), 1)),
            Err(e) => Err(e),
        }
    };
    let (violations, skipped) = run_samples(total, check)?;
    Ok(SuiteReport { suite: "axioms".into(), samples: total, skipped, violations, wall_time: start.elapsed() })
}

/// Every density witness with `m <= max_m`, `j <= max_j` certifies `<= 1/j`.
pub fn verify_density(table: &AnchorTable, max_m: u64, max_j: u64, epsilon: &Rational) -> Result<SuiteReport> {
    let start = Instant::now();
    let need = unpair_index(max_m, max_j)? as usize;
    if need > table.depth() {
        return Err(Error::ExtendTable { required_depth: need, depth: table.depth() });
    }
    let cells: Vec<(u64, u64)> = (1..=max_m).flat_map(|m| (1..=max_j).map(move |j| (m, j))).collect();
    let check = |i: u64| -> Result<(Vec<Violation>, u64)> {
        let (m, j) = cells[i as usize];
        let w = density_witness(table, m, j, epsilon)?;
        let mut out = Vec::new();
        if !w.holds() {
            out.push(violation(
                i,
                "density",
                format!("m = {m}, j = {j}, k = {}", w.power),
                format!("<= {}", w.bound),
                describe(&w.certified),
            ));
        }
        Ok((out, 0))
    };
    let (violations, skipped) = run_samples(cells.len() as u64, check)?;
    Ok(SuiteReport {
        suite: "density".into(),
        samples: cells.len() as u64,
        skipped,
        violations,
        wall_time: start.elapsed(),
    })
}

/// `D_N(x)` is non-increasing in `N`, never below the certified value, and
/// equal to it from the reported truncation level on.
pub fn verify_truncation(table: &AnchorTable, sample_count: u64, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let desc = table.descriptor();
    let grid = LinearGrid::new(seed, vec![index_window(table), 2 * TRUNCATION_K_RADIUS + 1]);
    let eps = default_epsilon();
    let count = sample_total(table, sample_count);
    let check = |i: u64| -> Result<(Vec<Violation>, u64)> {
        let p = grid.point(i);
        let x = ExtElement::new(enumerate_h(desc, p[0] + 1)?, BigInt::from(centered(p[1], TRUNCATION_K_RADIUS)));
        let r = evaluate(table, &x, &eps)?;
        let mut out = Vec::new();
        let mut prev: Option<Rational> = None;
        for n in 0..=table.depth() {
            let dn = evaluate_truncated(table, &x, n)?;
            if let Some(p) = &prev {
                if dn > *p {
                    out.push(violation(i, "monotone", format!("{x}, N = {n}"), format!("<= {p}"), &dn));
                }
            }
            match &r {
                EvalResult::Exact { value, truncation_level, .. } => {
                    if n >= *truncation_level && dn != *value {
                        out.push(violation(i, "stabilization", format!("{x}, N = {n}"), value, &dn));
                    } else if dn < *value {
                        out.push(violation(i, "lower bound", format!("{x}, N = {n}"), format!(">= {value}"), &dn));
                    }
                }
                EvalResult::Interval { lower } => {
                    if dn <= *lower {
                        out.push(violation(i, "lower bound", format!("{x}, N = {n}"), format!("> {lower}"), &dn));
                    }
                }
            }
            prev = Some(dn);
        }
        Ok((out, 0))
    };
    let (violations, skipped) = run_samples(count, check)?;
    Ok(SuiteReport { suite: "truncation".into(), samples: count, skipped, violations, wall_time: start.elapsed() })
}
