//! Embedding a countable abelian group with a bounded invariant norm into a
//! monothetic group.
//!
//! Given `H` (a finitely generated abelian group, presented by a
//! [`GroupDescriptor`]) and a norm `d` on it bounded by 1, the crate builds the
//! anchor table that extends `d` to a norm `D` on `H + C`, `C` cyclic and dense,
//! and evaluates `D` exactly with certificates that hold for the full
//! infinite construction.
//!
//! ```
//! use monothetic::{build_anchor_table, evaluate, ratio, ExtElement, GroupDescriptor, NormSpec};
//!
//! let z = GroupDescriptor::free(1);
//! let d = NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 4)] };
//! let table = build_anchor_table(&z, &d, 50).unwrap();
//! let x = ExtElement::new(z.h_element(vec![0], vec![]).unwrap(), 2);
//! let r = evaluate(&table, &x, &ratio(1, 1024)).unwrap();
//! assert_eq!(r.exact_value(), Some(&ratio(1, 2)));
//! ```

pub mod construction;
pub mod counterexample;
pub mod error;
pub mod evaluator;
pub mod group;
pub mod norm;
pub mod rational;
pub mod sampling;
pub mod verification;

pub use construction::{
    build_anchor_table, extend_family, k_sequence, pair_index, partial_norm_lookup, unpair_index, Anchor,
    AnchorTable, KSequence, TableDocument,
};
pub use counterexample::{counterexample_certificate, counterexample_scan, ContradictionReport, ScanSummary};
pub use error::{Error, Result};
pub use evaluator::{
    best_decomposition, brute_force_eval, default_epsilon, density_witness, evaluate, evaluate_truncated,
    truncation_index, Decomposition, DensityWitness, EvalResult, Witness,
};
pub use group::{elem_combine, enumerate_h, index_of_h, ExtElement, GroupDescriptor, HElement, Sign};
pub use norm::{base_norm, validate_norm_spec, AxiomReport, NormSpec};
pub use rational::{ratio, Rational};
pub use verification::{verify_density, verify_extension, verify_norm_axioms, verify_truncation, SuiteReport};
