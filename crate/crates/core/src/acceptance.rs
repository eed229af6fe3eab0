//! The acceptance suite: ten numbered checks, each reporting pass/fail with
//! a detail line and its running time against a fixed time limit.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::congruences::{
    dichotomy_suite, general_identities, lset_bound_check, random_multiset, random_zero_sum, run_identity,
    run_suite, CongruenceReport, Identity, Sampling,
};
use crate::constants::{compute_constant, BoundsRecord, LengthSpec};
use crate::constructions::{build_and_verify, ConstructionKind};
use crate::count::{binomial, brute_force_count, count_fixed_length, count_table, zero_sum_counts};
use crate::error::Result;
use crate::group::Group;
use crate::search::SearchConfig;
use crate::seq::Seq;
use crate::symmetry::{apply_map, automorphisms, SymmetryMode};

/// Seed for every randomized criterion.
pub const SEED: u64 = 20_240_601;
/// Samples for the sampled rank-3 full identity at `p = 5`.
pub const P5_SAMPLES: u64 = 10_000;
/// Instances per property in criterion 10.
pub const PROPERTY_INSTANCES: usize = 500;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.2}s, limit {}s): {}",
            self.number,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.limit_seconds,
            self.detail
        )
    }
}

type Check = fn(&SearchConfig) -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, f64, Check); 10] = [
    (1, "count DP equals brute force", 10.0, oracle_equivalence),
    (2, "s_n((Z/n)^2) = 4n-3 for n = 2, 3", 60.0, kemnitz_small),
    (3, "s'_n((Z/n)^2) = 4n-l+1 for n = 2, 3, 4", 300.0, modified_rank2),
    (4, "s'_nt((Z/p)^2) for t >= 2", 120.0, modified_multiples),
    (5, "s_2t((Z/2)^2) = 2t+2", 60.0, unmodified_multiples),
    (6, "s'_4(Z/2 x Z/4) within [3, 8]", 120.0, rectangular_window),
    (7, "construction grid verifies", 60.0, construction_grid),
    (8, "counting congruences", 180.0, congruence_suites),
    (9, "L-set bound and 4p dichotomy at p = 2, d = 3", 60.0, lset_and_dichotomy),
    (10, "randomized count properties", 30.0, property_suite),
];

/// Number of criteria.
pub fn count() -> usize {
    CRITERIA.len()
}

/// Runs one criterion (numbered from 1).
pub fn run(number: u8, cfg: &SearchConfig) -> Option<CriterionResult> {
    let &(number, title, limit, check) = CRITERIA.iter().find(|c| c.0 == number)?;
    let start = Instant::now();
    let outcome = check(cfg);
    let seconds = start.elapsed().as_secs_f64();
    let (ok, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = seconds <= limit;
    let detail = if in_time { detail } else { format!("{detail}; over time limit") };
    Some(CriterionResult { number, title, passed: ok && in_time, detail, seconds, limit_seconds: limit })
}

pub fn run_all(cfg: &SearchConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run(c.0, cfg)).collect()
}

/// Groups of order at most 16 used for randomized checks.
fn small_groups() -> Vec<Group> {
    let shapes: [&[i64]; 16] = [
        &[2],
        &[3],
        &[5],
        &[6],
        &[8],
        &[12],
        &[16],
        &[2, 2],
        &[2, 3],
        &[2, 4],
        &[3, 3],
        &[2, 6],
        &[4, 4],
        &[2, 8],
        &[2, 2, 2],
        &[2, 2, 2, 2],
    ];
    shapes.iter().map(|m| Group::new(m).expect("valid moduli")).collect()
}

fn oracle_equivalence(_: &SearchConfig) -> Result<(bool, String)> {
    let groups = small_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..200 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let len = rng.gen_range(0..=12);
        let j = random_multiset(g, len, &mut rng);
        let k = rng.gen_range(0..=len);
        if count_fixed_length(&j, k)? != brute_force_count(&j, k)? {
            mismatches += 1;
        }
    }
    Ok((mismatches == 0, format!("200 instances, {mismatches} mismatches")))
}

struct Expect {
    moduli: &'static [i64],
    length: usize,
    modified: bool,
    ceiling: Option<u64>,
    value: u64,
}

/// Computes the constant, re-verifies its certificates, compares with the
/// theorem table, and for `n = 2` repeats the search without symmetry.
fn check_constant(e: &Expect, cfg: &SearchConfig) -> Result<(bool, String)> {
    let g = Group::new(e.moduli)?;
    let lengths = LengthSpec::fixed([e.length])?;
    let r = compute_constant(&g, &lengths, e.modified, e.ceiling, cfg)?;
    let mut ok = r.value == e.value;
    ok &= r.certificates.iter().all(|c| c.verify());
    let witness_len = r.counterexample().map(|s| s.len());
    ok &= witness_len == Some(e.value as usize - 1);
    if let Some(b) = &r.bounds {
        ok &= b.admits_proof_backed(r.value);
        ok &= b.exact.is_none_or(|x| x == r.value);
    }
    if g.exponent() == 2 {
        let plain = compute_constant(&g, &lengths, e.modified, e.ceiling, &SearchConfig {
            symmetry: SymmetryMode::NONE,
            ..*cfg
        })?;
        ok &= plain.value == r.value;
    }
    let name = if e.modified { "s'" } else { "s" };
    Ok((ok, format!("{name}_{}({g}) = {} (expected {}), witness length {witness_len:?}", e.length, r.value, e.value)))
}

fn check_all(list: &[Expect], cfg: &SearchConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for e in list {
        let (o, d) = check_constant(e, cfg)?;
        ok &= o;
        parts.push(d);
    }
    Ok((ok, parts.join("; ")))
}

fn kemnitz_small(cfg: &SearchConfig) -> Result<(bool, String)> {
    check_all(
        &[
            Expect { moduli: &[2, 2], length: 2, modified: false, ceiling: None, value: 5 },
            Expect { moduli: &[3, 3], length: 3, modified: false, ceiling: None, value: 9 },
        ],
        cfg,
    )
}

fn modified_rank2(cfg: &SearchConfig) -> Result<(bool, String)> {
    check_all(
        &[
            Expect { moduli: &[2, 2], length: 2, modified: true, ceiling: Some(6), value: 5 },
            Expect { moduli: &[3, 3], length: 3, modified: true, ceiling: Some(10), value: 9 },
            Expect { moduli: &[4, 4], length: 4, modified: true, ceiling: Some(13), value: 12 },
        ],
        cfg,
    )
}

fn modified_multiples(cfg: &SearchConfig) -> Result<(bool, String)> {
    check_all(
        &[
            Expect { moduli: &[2, 2], length: 4, modified: true, ceiling: None, value: 6 },
            Expect { moduli: &[2, 2], length: 6, modified: true, ceiling: None, value: 8 },
            Expect { moduli: &[3, 3], length: 6, modified: true, ceiling: None, value: 9 },
        ],
        cfg,
    )
}

fn unmodified_multiples(cfg: &SearchConfig) -> Result<(bool, String)> {
    check_all(
        &[
            Expect { moduli: &[2, 2], length: 4, modified: false, ceiling: None, value: 6 },
            Expect { moduli: &[2, 2], length: 6, modified: false, ceiling: None, value: 8 },
        ],
        cfg,
    )
}

/// Exact `s'_4(Z/2 × Z/4)` with its certificate.
pub fn rectangular_value(cfg: &SearchConfig) -> Result<(u64, Option<Seq>, BoundsRecord)> {
    let g = Group::new(&[2, 4])?;
    let r = compute_constant(&g, &LengthSpec::fixed([4])?, true, None, cfg)?;
    let bounds = r.bounds.clone().expect("tabulated shape");
    Ok((r.value, r.counterexample().cloned(), bounds))
}

fn rectangular_window(cfg: &SearchConfig) -> Result<(bool, String)> {
    let (value, cert, bounds) = rectangular_value(cfg)?;
    let verified = cert.as_ref().is_some_and(|j| {
        j.is_zero_sum() && j.len() as u64 == value - 1 && count_fixed_length(j, 4).is_ok_and(|c| c == 0u32.into())
    });
    let ok = (3..=8).contains(&value) && verified;
    let cert = cert.map_or("none".into(), |j| j.entries_text());
    Ok((
        ok,
        format!(
            "exact value {value}; stated bounds [{}, {}], proof-backed upper {}; certificate {cert} (verified: {verified})",
            bounds.lower.unwrap_or(0),
            bounds.upper.unwrap_or(0),
            bounds.proof_backed_upper.unwrap_or(0),
        ),
    ))
}

/// The construction grid checked by criterion 7.
pub fn construction_grid_kinds() -> Vec<ConstructionKind> {
    let mut kinds = Vec::new();
    for n in 2..=12 {
        for t in 2..=4 {
            kinds.push(ConstructionKind::LowerGcd { n, t });
        }
    }
    for t in 1..=4 {
        kinds.push(ConstructionKind::P3 { t });
    }
    for n2 in 2..=12u64 {
        for n1 in (1..=n2).filter(|n1| n2 % n1 == 0) {
            kinds.push(ConstructionKind::RectLower { n1, n2 });
        }
    }
    for n in 2..=12 {
        for t in 1..=4 {
            kinds.push(ConstructionKind::EgzLower { n, t });
        }
    }
    kinds
}

fn construction_grid(_: &SearchConfig) -> Result<(bool, String)> {
    let kinds = construction_grid_kinds();
    let mut failed = Vec::new();
    for kind in &kinds {
        let (_, report) = build_and_verify(*kind)?;
        if !report.passed() {
            failed.push(format!("{kind:?}"));
        }
    }
    Ok((failed.is_empty(), format!("{} constructions, {} failures {failed:?}", kinds.len(), failed.len())))
}

fn summarize(reports: &[CongruenceReport]) -> (bool, String) {
    let ok = reports.iter().all(|r| r.passed());
    let checked: u64 = reports.iter().map(|r| r.sequences_checked).sum();
    let failures: u64 = reports.iter().map(|r| r.failures).sum();
    (ok, format!("{} runs, {checked} sequences, {failures} failures", reports.len()))
}

/// Every congruence run behind criterion 8.
pub fn congruence_reports() -> Result<Vec<CongruenceReport>> {
    let mut reports = Vec::new();
    reports.extend(run_suite(Identity::Reiher2d, 2, Sampling::Exhaustive)?);
    reports.extend(run_suite(Identity::Reiher2d, 3, Sampling::Exhaustive)?);
    reports.extend(run_suite(Identity::CwRank3Shift, 2, Sampling::Exhaustive)?);
    reports.push(run_identity(Identity::CwRank3Full, 5, 16, Sampling::Random { samples: P5_SAMPLES, seed: SEED })?);
    for identity in general_identities(4) {
        reports.extend(run_suite(identity, 2, Sampling::Exhaustive)?);
    }
    Ok(reports)
}

fn congruence_suites(_: &SearchConfig) -> Result<(bool, String)> {
    Ok(summarize(&congruence_reports()?))
}

fn lset_and_dichotomy(_: &SearchConfig) -> Result<(bool, String)> {
    let reports = [lset_bound_check(2, 3, Sampling::Exhaustive)?, dichotomy_suite(2, Sampling::Exhaustive)?];
    Ok(summarize(&reports))
}

fn property_suite(_: &SearchConfig) -> Result<(bool, String)> {
    let groups = small_groups();
    let autos: Vec<Vec<Vec<u32>>> = groups.iter().map(automorphisms).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut failures = [0usize; 4];

    for _ in 0..PROPERTY_INSTANCES {
        let gi = rng.gen_range(0..groups.len());
        let g = &groups[gi];

        // complement: (k|J) = (|J|−k|J) for zero-sum J
        let len = rng.gen_range(1..=12);
        let j = random_zero_sum(g, len, &mut rng);
        let zs = zero_sum_counts(&j);
        if (0..=len).any(|k| zs[k] != zs[len - k]) {
            failures[0] += 1;
        }

        // translation: (k|J+c) = (k|J) when exp(G) | k
        let e = g.exponent() as usize;
        let len = rng.gen_range(e..=(12.max(e)));
        let j = random_multiset(g, len, &mut rng);
        let c = g.element_at(rng.gen_range(0..g.order() as usize));
        let moved = zero_sum_counts(&j.translate(&c)?);
        let zs = zero_sum_counts(&j);
        if (e..=len).step_by(e).any(|k| zs[k] != moved[k]) {
            failures[1] += 1;
        }

        // automorphism: every count is preserved
        let map = &autos[gi][rng.gen_range(0..autos[gi].len())];
        if zero_sum_counts(&apply_map(&j, map)) != zs {
            failures[2] += 1;
        }

        // row sums: Σ_g (k|J)_g = C(|J|, k)
        let table = count_table(&j, len)?;
        let rows_ok = (0..=len).all(|k| table.row(k).iter().sum::<num_bigint::BigUint>() == binomial(len as u64, k as u64));
        if !rows_ok {
            failures[3] += 1;
        }
    }
    let ok = failures.iter().all(|&f| f == 0);
    Ok((
        ok,
        format!(
            "{PROPERTY_INSTANCES} instances each; failures: complement {}, translation {}, automorphism {}, row sums {}",
            failures[0], failures[1], failures[2], failures[3]
        ),
    ))
}
