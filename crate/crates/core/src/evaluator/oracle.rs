//! Exhaustive reference evaluation over raw (non-canonical) decompositions.

use crate::construction::AnchorTable;
use crate::error::Result;
use crate::group::{ExtElement, GroupDescriptor, HElement};
use crate::rational::Rational;

/// All nonzero `h` with free coordinates in `[-radius, radius]`.
fn h_box(descriptor: &GroupDescriptor, radius: i64) -> Vec<HElement> {
    let mut out = vec![HElement::default()];
    for _ in 0..descriptor.free_rank {
        out = out
            .into_iter()
            .flat_map(|h| {
                (-radius..=radius).map(move |x| {
                    let mut h = h.clone();
                    h.free.push(x);
                    h
                })
            })
            .collect();
    }
    for &q in &descriptor.torsion_moduli {
        out = out
            .into_iter()
            .flat_map(|h| {
                (0..q).map(move |t| {
                    let mut h = h.clone();
                    h.torsion.push(t);
                    h
                })
            })
            .collect();
    }
    out.retain(|h| !h.is_zero());
    out
}

/// `min(1, min sum D'(x_i))` over multisets of at most `max_summands`
/// elements of `dom(D')` summing to `x`.
///
/// The domain is enumerated directly: every nonzero `h` whose free coordinates
/// are bounded by `coefficient_radius` (value `d(h)`), and both signs of every
/// anchor in the table (value `1/j`). Intended for tests at desk scale.
pub fn brute_force_eval(
    table: &AnchorTable,
    x: &ExtElement,
    max_summands: usize,
    coefficient_radius: u64,
) -> Result<Rational> {
    let desc = table.descriptor();
    desc.check(x)?;
    let mut domain: Vec<(ExtElement, Rational)> = Vec::new();
    for h in h_box(desc, coefficient_radius as i64) {
        let v = table.base_norm(&h)?;
        domain.push((ExtElement::in_h(h), v));
    }
    for a in table.anchors() {
        let e = a.element(desc);
        domain.push((desc.neg(&e), a.value.clone()));
        domain.push((e, a.value.clone()));
    }

    let mut best = Rational::one();
    if x.is_zero() {
        return Ok(Rational::zero());
    }
    // Nondecreasing index sequences = multisets.
    let mut stack: Vec<(usize, ExtElement, Rational, usize)> = vec![(0, desc.zero(), Rational::zero(), 0)];
    while let Some((start, sum, cost, size)) = stack.pop() {
        if size == max_summands {
            continue;
        }
        for (i, (e, v)) in domain.iter().enumerate().skip(start) {
            let c = &cost + v;
            if c >= best {
                continue;
            }
            let s = ExtElement { h: desc.add_h(&sum.h, &e.h), k: &sum.k + &e.k };
            if s == *x {
                best = c.clone();
            }
            stack.push((i, s, c, size + 1));
        }
    }
    Ok(best)
}
