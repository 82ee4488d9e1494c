//! Built-in bounded invariant (pseudo)norms on `H`.
//!
//! Torsion coordinate `t` in `Z_q` has cyclic length `min(t, q - t) * 2 / q`,
//! which lies in `[0, 1]`. Every variant applies `min(1, .)` last.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{enumerate_h, GroupDescriptor, HElement};
use crate::rational::Rational;
use crate::sampling::LinearGrid;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormSpec {
    /// `min(1, sum_i w_i |x_i| + sum torsion cyclic lengths)`.
    #[serde(rename = "capped_l1")]
    CappedWeightedL1 { weights: Vec<Rational> },
    /// `min(1, max(max_i |x_i| / scale, max torsion cyclic length))`.
    #[serde(rename = "capped_linf")]
    CappedLInf { scale: Rational },
    /// `min(1, sum torsion cyclic lengths)`; torsion-only groups.
    CyclicScaled,
    /// Distance from `alpha * (x_1 + ... + x_r)` to the nearest integer.
    /// Vanishes on a subgroup, so it is only a pseudonorm.
    RationalRotation { alpha: Rational },
}

fn cyclic_length(t: u64, q: u64) -> Rational {
    let m = t.min(q - t);
    Rational::new(2 * m as i64, q as i64)
}

impl NormSpec {
    /// Whether the variant may vanish off the identity.
    pub fn is_pseudonorm(&self) -> bool {
        matches!(self, NormSpec::RationalRotation { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::CappedWeightedL1 { .. } => "capped_l1",
            NormSpec::CappedLInf { .. } => "capped_linf",
            NormSpec::CyclicScaled => "cyclic_scaled",
            NormSpec::RationalRotation { .. } => "rational_rotation",
        }
    }

    /// Shape compatibility only; parameters are not sign-checked here so that
    /// [`validate_norm_spec`] can be pointed at deliberately broken specs.
    pub fn check_shape(&self, descriptor: &GroupDescriptor) -> Result<()> {
        match self {
            NormSpec::CappedWeightedL1 { weights } if weights.len() != descriptor.free_rank => {
                Err(Error::Shape(format!(
                    "capped_l1 has {} weights but the group has free rank {}",
                    weights.len(),
                    descriptor.free_rank
                )))
            }
            NormSpec::CyclicScaled if descriptor.free_rank > 0 => Err(Error::Shape(
                "cyclic_scaled applies to torsion-only groups".into(),
            )),
            NormSpec::RationalRotation { .. } if descriptor.free_rank == 0 => Err(Error::Shape(
                "rational_rotation needs at least one free coordinate".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Shape plus parameter validity (positive weights and scale).
    pub fn validate(&self, descriptor: &GroupDescriptor) -> Result<()> {
        descriptor.validate()?;
        self.check_shape(descriptor)?;
        match self {
            NormSpec::CappedWeightedL1 { weights } => {
                if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
                    return Err(Error::Domain(format!("capped_l1 weight {w} must be positive")));
                }
            }
            NormSpec::CappedLInf { scale } if !scale.is_positive() => {
                return Err(Error::Domain(format!("capped_linf scale {scale} must be positive")));
            }
            _ => {}
        }
        Ok(())
    }
}

/// `d(h)` for the given spec.
pub fn base_norm(spec: &NormSpec, descriptor: &GroupDescriptor, h: &HElement) -> Result<Rational> {
    spec.check_shape(descriptor)?;
    descriptor.check_h(h)?;
    let torsion = h.torsion.iter().zip(&descriptor.torsion_moduli).map(|(&t, &q)| cyclic_length(t, q));
    let raw = match spec {
        NormSpec::CappedWeightedL1 { weights } => {
            let free: Rational =
                weights.iter().zip(&h.free).map(|(w, &x)| w * &Rational::from(x.abs())).sum();
            free + torsion.sum::<Rational>()
        }
        NormSpec::CappedLInf { scale } => {
            let free = Rational::from(h.max_free_abs() as i64) / scale;
            torsion.fold(free, Rational::max)
        }
        NormSpec::CyclicScaled => torsion.sum(),
        NormSpec::RationalRotation { alpha } => {
            let s: i64 = h.free.iter().sum();
            (alpha * &Rational::from(s)).dist_to_integer()
        }
    };
    Ok(raw.cap_one())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub sample: u64,
    pub axiom: String,
    pub detail: String,
}

/// Outcome of [`validate_norm_spec`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub spec: NormSpec,
    pub samples: u64,
    pub violations: Vec<AxiomViolation>,
    /// First nonzero element found with norm zero, e.g. `pseudonorm: d([3])=0`.
    pub pseudonorm: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumeration indices sampled by [`validate_norm_spec`] lie in `1..=INDEX_WINDOW`.
pub const INDEX_WINDOW: u64 = 101;

/// Sampled check of `d(0) = 0`, `0 <= d <= 1`, symmetry and subadditivity.
///
/// Sample `i` checks the single element `h_{i+1}` (so small elements are always
/// covered) and the pair drawn from a [`LinearGrid`] over enumeration indices.
pub fn validate_norm_spec(
    spec: &NormSpec,
    descriptor: &GroupDescriptor,
    sample_count: u64,
    seed: u64,
) -> Result<AxiomReport> {
    if sample_count < 1 {
        return Err(Error::Domain("sample_count must be at least 1".into()));
    }
    spec.check_shape(descriptor)?;
    descriptor.validate()?;
    let d = |h: &HElement| base_norm(spec, descriptor, h);
    let window = descriptor.order().map_or(INDEX_WINDOW, |o| o.min(INDEX_WINDOW as u128 * 100) as u64);
    let grid = LinearGrid::new(seed, vec![window, window]);
    let mut violations = Vec::new();
    let mut pseudonorm = None;

    let zero = descriptor.zero_h();
    let d0 = d(&zero)?;
    if !d0.is_zero() {
        violations.push(AxiomViolation { sample: 0, axiom: "zero".into(), detail: format!("d(0) = {d0}") });
    }

    for i in 0..sample_count {
        let h = enumerate_h(descriptor, i + 1)?;
        let dh = d(&h)?;
        let dneg = d(&descriptor.neg_h(&h))?;
        if dh.is_negative() || dh > 1 {
            violations.push(AxiomViolation { sample: i, axiom: "range".into(), detail: format!("d({h}) = {dh}") });
        }
        if dh != dneg {
            violations.push(AxiomViolation {
                sample: i,
                axiom: "symmetry".into(),
                detail: format!("d({h}) = {dh} but d(-{h}) = {dneg}"),
            });
        }
        if dh.is_zero() && !h.is_zero() {
            if spec.is_pseudonorm() {
                pseudonorm.get_or_insert_with(|| format!("pseudonorm: d({h})=0"));
            } else {
                violations.push(AxiomViolation {
                    sample: i,
                    axiom: "positivity".into(),
                    detail: format!("d({h}) = 0 for nonzero element"),
                });
            }
        }

        let p = grid.point(i);
        let a = enumerate_h(descriptor, p[0] + 1)?;
        let b = enumerate_h(descriptor, p[1] + 1)?;
        let (da, db) = (d(&a)?, d(&b)?);
        let dab = d(&descriptor.add_h(&a, &b))?;
        if dab > &da + &db {
            violations.push(AxiomViolation {
                sample: i,
                axiom: "subadditivity".into(),
                detail: format!("d({a} + {b}) = {dab} > {da} + {db}"),
            });
        }
    }
    Ok(AxiomReport { spec: spec.clone(), samples: sample_count, violations, pseudonorm })
}
