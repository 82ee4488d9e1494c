//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use monothetic::verification::verify_extension;
use monothetic::{
    brute_force_eval, build_anchor_table, counterexample_scan, default_epsilon, evaluate, extend_family,
    k_sequence, pair_index, ratio, verify_density, verify_norm_axioms, verify_truncation, AnchorTable,
    EvalResult, ExtElement, GroupDescriptor, NormSpec, Rational, Witness,
};
use num_bigint::BigInt;

const SEED: u64 = 42;

fn run(id: u32, name: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let within = elapsed < limit;
    match (&outcome, within) {
        (Ok(detail), true) => println!("criterion {id} [{name}]: PASS ({detail}; {elapsed:.2?} < {limit:?})"),
        (Ok(detail), false) => println!("criterion {id} [{name}]: FAIL (too slow: {elapsed:.2?} >= {limit:?}; {detail})"),
        (Err(e), _) => println!("criterion {id} [{name}]: FAIL ({e}; {elapsed:.2?})"),
    }
    assert!(outcome.is_ok(), "criterion {id} failed: {:?}", outcome.err());
    assert!(within, "criterion {id} exceeded {limit:?}: {elapsed:.2?}");
}

fn z() -> GroupDescriptor {
    GroupDescriptor::free(1)
}

fn z2() -> GroupDescriptor {
    GroupDescriptor::free(2)
}

fn quarter_l1() -> NormSpec {
    NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 4)] }
}

fn capped_l1_z2() -> NormSpec {
    NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 1), ratio(1, 1)] }
}

fn check_extension(table: &AnchorTable) -> Result<String, String> {
    let r = verify_extension(table, 200, SEED).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{} violations, first: {:?}", r.violations.len(), r.violations[0]));
    }
    Ok(format!("{} samples exact", r.samples))
}

fn check_anchors(table: &AnchorTable, count: usize) -> Result<String, String> {
    let eps = default_epsilon();
    for n in 1..=count {
        let a = table.anchor(n).unwrap();
        let r = evaluate(table, &table.anchor_element(n), &eps).map_err(|e| e.to_string())?;
        if !r.certifies_at_most(&a.value) {
            return Err(format!("anchor {n}: certified {r:?} not <= {}", a.value));
        }
    }
    Ok(format!("{count} anchors certified"))
}

fn check_axioms(table: &AnchorTable) -> Result<String, String> {
    let r = verify_norm_axioms(table, 500, SEED, &default_epsilon()).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{}: {:?}", table.spec().name(), r.violations[0]));
    }
    Ok(format!("{} pairs, {} skipped", r.samples, r.skipped))
}

/// All x with |h|_inf <= 2, |k| <= 3 against the exhaustive oracle (L = 3, R = 3).
fn check_oracle(table: &AnchorTable) -> Result<String, String> {
    let desc = table.descriptor();
    let eps = default_epsilon();
    let mut hs: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..desc.free_rank {
        hs = hs.into_iter().flat_map(|h| (-2..=2).map(move |x| [h.clone(), vec![x]].concat())).collect();
    }
    let (mut exact, mut equal) = (0, 0);
    for h in &hs {
        for k in -3i64..=3 {
            let x = ExtElement::new(desc.h_element(h.clone(), vec![]).unwrap(), k);
            let r = evaluate(table, &x, &eps).map_err(|e| e.to_string())?;
            let brute = brute_force_eval(table, &x, 3, 3).map_err(|e| e.to_string())?;
            match &r {
                EvalResult::Exact { value, witness, .. } => {
                    exact += 1;
                    if brute < *value {
                        return Err(format!("{x}: oracle {brute} < certified {value}"));
                    }
                    let fits = match witness {
                        Witness::HOnly => x.h.max_free_abs() <= 3,
                        Witness::Decomposition(d) => d.fits_within(3, 3),
                    };
                    if fits {
                        if brute != *value {
                            return Err(format!("{x}: witness fits but oracle {brute} != {value}"));
                        }
                        equal += 1;
                    }
                }
                EvalResult::Interval { lower } => {
                    if brute <= *lower {
                        return Err(format!("{x}: oracle {brute} inside certified gap (<= {lower})"));
                    }
                }
            }
        }
    }
    Ok(format!("{} elements, {exact} exact, {equal} matched exactly", hs.len() * 7))
}

fn check_density(table: &AnchorTable, max: u64) -> Result<String, String> {
    let r = verify_density(table, max, max, &default_epsilon()).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{:?}", r.violations[0]));
    }
    Ok(format!("{} witnesses", r.samples))
}

fn check_truncation(table: &AnchorTable) -> Result<String, String> {
    let r = verify_truncation(table, 100, SEED).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{:?}", r.violations[0]));
    }
    Ok(format!("{} samples stabilize", r.samples))
}

fn check_k_law(depth: usize) -> Result<String, String> {
    let seq = k_sequence(depth).map_err(|e| e.to_string())?;
    let prefix: Vec<BigInt> = [1, 2, 5, 11, 34, 103].into_iter().map(BigInt::from).collect();
    if seq.powers[..6] != prefix[..] {
        return Err(format!("prefix {:?}", &seq.powers[..6]));
    }
    let mut max_j = 0;
    for n in 2..=depth {
        max_j = max_j.max(pair_index(n as u64 - 1).unwrap().1);
        let (prev, cur) = (&seq.powers[n - 2], &seq.powers[n - 1]);
        if cur <= prev || *cur <= prev * BigInt::from(max_j) {
            return Err(format!("k_{n} = {cur} violates the growth law"));
        }
        if seq.deltas[n - 1] != Rational::reciprocal_of(max_j) {
            return Err(format!("delta_{n} = {}", seq.deltas[n - 1]));
        }
    }
    let again = k_sequence(depth).unwrap();
    if again != seq {
        return Err("repeated run differs".into());
    }
    let specs = [
        quarter_l1(),
        NormSpec::CappedLInf { scale: ratio(3, 1) },
        NormSpec::RationalRotation { alpha: ratio(1, 3) },
    ];
    for spec in &specs {
        let t = build_anchor_table(&z(), spec, depth).map_err(|e| e.to_string())?;
        let powers: Vec<BigInt> = t.anchors().iter().map(|a| a.power.clone()).collect();
        if powers != seq.powers {
            return Err(format!("{} table has different powers", spec.name()));
        }
    }
    let t2 = build_anchor_table(&z2(), &capped_l1_z2(), depth).map_err(|e| e.to_string())?;
    if t2.anchors().iter().map(|a| &a.power).ne(seq.powers.iter()) {
        return Err("rank-2 table has different powers".into());
    }
    Ok(format!("{depth} powers, {} digits in k_{depth}", seq.powers[depth - 1].to_string().len()))
}

#[test]
fn criterion_1_extension_exactness() {
    run(1, "extension exactness", Duration::from_secs(10), || {
        let t = build_anchor_table(&z(), &quarter_l1(), 50).map_err(|e| e.to_string())?;
        check_extension(&t)
    });
}

#[test]
fn criterion_2_anchor_bounds() {
    run(2, "anchor bounds", Duration::from_secs(30), || {
        let t = build_anchor_table(&z(), &quarter_l1(), 50).map_err(|e| e.to_string())?;
        check_anchors(&t, 30)
    });
}

#[test]
fn criterion_3_k_sequence_law() {
    run(3, "k-sequence law", Duration::from_secs(1), || check_k_law(200));
}

#[test]
fn criterion_4_norm_axioms() {
    run(4, "norm axioms", Duration::from_secs(60), || {
        let mut details = Vec::new();
        for spec in [quarter_l1(), NormSpec::CappedLInf { scale: ratio(3, 1) }] {
            let t = build_anchor_table(&z(), &spec, 50).map_err(|e| e.to_string())?;
            details.push(check_axioms(&t)?);
        }
        let fixture = build_anchor_table(&z(), &NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 1)] }, 50)
            .unwrap()
            .with_power_override(8, BigInt::from(11));
        let r = verify_norm_axioms(&fixture, 500, SEED, &default_epsilon()).map_err(|e| e.to_string())?;
        if r.passed() {
            return Err("corrupted table was not detected".into());
        }
        if !r.violations.iter().any(|v| v.check == "triangle") {
            return Err("corrupted table failed without a triangle violation".into());
        }
        Ok(format!("{}; corrupted fixture: {} violations", details.join(", "), r.violations.len()))
    });
}

#[test]
fn criterion_5_oracle_equivalence() {
    run(5, "oracle equivalence", Duration::from_secs(120), || {
        let t = build_anchor_table(&z(), &quarter_l1(), 10).map_err(|e| e.to_string())?;
        check_oracle(&t)
    });
}

#[test]
fn criterion_6_density() {
    run(6, "density", Duration::from_secs(60), || {
        let t = build_anchor_table(&z(), &quarter_l1(), 50).map_err(|e| e.to_string())?;
        check_density(&t, 5)
    });
}

#[test]
fn criterion_7_truncation_stabilization() {
    run(7, "truncation stabilization", Duration::from_secs(120), || {
        let t = build_anchor_table(&z(), &quarter_l1(), 50).map_err(|e| e.to_string())?;
        check_truncation(&t)
    });
}

#[test]
fn criterion_8_counterexample_and_bounded_contrast() {
    run(8, "counterexample scan + bounded contrast", Duration::from_secs(10), || {
        let scan = counterexample_scan(50).map_err(|e| e.to_string())?;
        if scan.certificates.len() != 2500 || scan.summary.assumed_value != ratio(1, 2) - ratio(1, 2500) {
            return Err("unexpected scan shape".into());
        }
        for c in &scan.certificates {
            let half = &c.required_norm * &ratio(1, 2);
            if !c.identity_holds || !(c.implied_bound < half) || !c.contradiction {
                return Err(format!("certificate ({}, {}) failed", c.n, c.m));
            }
        }
        Ok(format!("2500 certificates, min margin {}", scan.summary.min_margin))
    });
    // The same group with the capped norm min(1, l1) passes criteria 1-7.
    let desc = z2();
    let deep = build_anchor_table(&desc, &capped_l1_z2(), 50).unwrap();
    let shallow = build_anchor_table(&desc, &capped_l1_z2(), 10).unwrap();
    run(8, "bounded Z^2: extension", Duration::from_secs(10), || check_extension(&deep));
    run(8, "bounded Z^2: anchor bounds", Duration::from_secs(30), || check_anchors(&deep, 30));
    run(8, "bounded Z^2: k-sequence law", Duration::from_secs(1), || check_k_law(200));
    run(8, "bounded Z^2: norm axioms", Duration::from_secs(60), || check_axioms(&deep));
    run(8, "bounded Z^2: oracle equivalence", Duration::from_secs(120), || check_oracle(&shallow));
    run(8, "bounded Z^2: density", Duration::from_secs(60), || check_density(&deep, 5));
    run(8, "bounded Z^2: truncation", Duration::from_secs(120), || check_truncation(&deep));
}

#[test]
fn criterion_9_family_extension() {
    run(9, "family extension", Duration::from_secs(60), || {
        let specs = [
            quarter_l1(),
            NormSpec::CappedLInf { scale: ratio(3, 1) },
            NormSpec::RationalRotation { alpha: ratio(1, 3) },
        ];
        let family = extend_family(&z(), &specs, 50).map_err(|e| e.to_string())?;
        let block = family[0].schedule_bytes();
        if family.iter().any(|t| t.schedule_bytes() != block) {
            return Err("schedules differ".into());
        }
        let mut out = Vec::new();
        for t in &family {
            out.push(format!("{}: {}", t.spec().name(), check_extension(t)?));
        }
        Ok(out.join(", "))
    });
}
