//! Exact branch-and-bound over anchor multiplicities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::construction::AnchorTable;
use crate::error::{Error, Result};
use crate::group::{ExtElement, HElement};
use crate::rational::Rational;

use super::Decomposition;

struct Search<'a> {
    table: &'a AnchorTable,
    budget: Rational,
    /// `reach[i] = max_{l <= i} k_l * j_l`; `reach[0] = 0`.
    reach: Vec<BigInt>,
    coeffs: Vec<i64>,
    best: Option<(Rational, Vec<i64>, HElement)>,
}

impl Search<'_> {
    /// Whether `|remaining|` is attainable by anchors `1..=upto` spending at most `spare`.
    fn reachable(&self, remaining: &BigInt, spare: &Rational, upto: usize) -> bool {
        if remaining.is_zero() {
            return true;
        }
        if !spare.is_positive() {
            return false;
        }
        let cap = spare * &Rational::from_integer(self.reach[upto].clone());
        Rational::from_integer(remaining.abs()) <= cap
    }

    /// Chooses `m_n` for `n = level, level-1, ..., 1` in ascending order so that
    /// complete vectors are visited lexicographically over descending index.
    fn descend(&mut self, level: usize, remaining: BigInt, spent: Rational, residual: HElement) -> Result<()> {
        if let Some((best, _, _)) = &self.best {
            if spent >= *best {
                return Ok(());
            }
        }
        if level == 0 {
            if !remaining.is_zero() {
                return Ok(());
            }
            let cost = &spent + &self.table.base_norm(&residual)?;
            let improves = self.best.as_ref().is_none_or(|(b, _, _)| cost < *b);
            if cost <= self.budget && improves {
                self.best = Some((cost, self.coeffs.clone(), residual));
            }
            return Ok(());
        }
        let anchor = self.table.anchor(level).expect("level within table");
        let j = anchor.precision_index as i64;
        let unit = anchor.value.clone();
        let spare = &self.budget - &spent;
        let limit = (&spare * &Rational::from(j)).floor().to_i64().unwrap_or(i64::MAX);
        if limit < 0 {
            return Ok(());
        }
        let desc = self.table.descriptor();
        for m in -limit..=limit {
            let used = &spent + &(&unit * &Rational::from(m.abs()));
            let rest = &remaining - &anchor.power * m;
            if !self.reachable(&rest, &(&self.budget - &used), level - 1) {
                continue;
            }
            let h = if m == 0 { residual.clone() } else { desc.add_scaled_h(&residual, &anchor.target, m) };
            self.coeffs[level - 1] = m;
            self.descend(level - 1, rest, used, h)?;
            self.coeffs[level - 1] = 0;
        }
        Ok(())
    }
}

/// Minimum-cost canonical decomposition of `x` using anchors `1..=index_cap`
/// with total cost at most `budget`.
///
/// Anchor `n` may appear with multiplicity `|m_n| <= floor(budget * j_n)`.
/// Ties are broken towards the lexicographically smallest coefficient vector
/// `(m_{cap}, ..., m_1)`.
pub fn best_decomposition(
    table: &AnchorTable,
    x: &ExtElement,
    budget: &Rational,
    index_cap: usize,
) -> Result<Option<Decomposition>> {
    if index_cap > table.depth() {
        return Err(Error::ExtendTable { required_depth: index_cap, depth: table.depth() });
    }
    table.descriptor().check(x)?;
    if budget.is_negative() {
        return Ok(None);
    }
    let mut reach = Vec::with_capacity(index_cap + 1);
    reach.push(BigInt::zero());
    for n in 1..=index_cap {
        let a = table.anchor(n).unwrap();
        let v = &a.power * BigInt::from(a.precision_index);
        let prev = reach.last().unwrap().clone();
        reach.push(if v > prev { v } else { prev });
    }
    let mut search = Search { table, budget: budget.clone(), reach, coeffs: vec![0; index_cap], best: None };
    if !search.reachable(&x.k, budget, index_cap) {
        return Ok(None);
    }
    search.descend(index_cap, x.k.clone(), Rational::zero(), x.h.clone())?;
    Ok(search.best.map(|(cost, coeffs, residual)| Decomposition {
        coefficients: coeffs
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, &m)| (i + 1, m))
            .collect::<BTreeMap<_, _>>(),
        residual,
        cost,
    }))
}
