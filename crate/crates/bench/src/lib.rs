//! Fixtures shared by the criterion benchmarks.

use monothetic::{build_anchor_table, ratio, AnchorTable, ExtElement, GroupDescriptor, NormSpec};

/// Rank-1 table under `min(1, |x|/4)`.
pub fn rank_one_table(depth: usize) -> AnchorTable {
    let spec = NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 4)] };
    build_anchor_table(&GroupDescriptor::free(1), &spec, depth).expect("valid table")
}

/// `(h, c^k)` in the rank-1 group.
pub fn element(h: i64, k: i64) -> ExtElement {
    ExtElement::new(GroupDescriptor::free(1).h_element(vec![h], vec![]).expect("rank 1"), k)
}
