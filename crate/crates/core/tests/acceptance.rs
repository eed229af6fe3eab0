//! One line per acceptance criterion, written straight to stdout so the
//! lines show up without `--nocapture`.

use std::io::Write;

use egz::acceptance::{self, rectangular_value};
use egz::count::count_fixed_length;
use egz::search::SearchConfig;

#[test]
fn acceptance_criteria() {
    let cfg = SearchConfig { threads: 0, ..SearchConfig::default() };
    let results = acceptance::run_all(&cfg);
    assert_eq!(results.len(), acceptance::count());
    let mut out = std::io::stdout().lock();
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    // Criterion 6 asks for s'_4(Z/2 x Z/4) <= 8, but a verified zero-sum
    // sequence of length 8 without a zero-sum 4-subsequence exists, so the
    // value is 9 and that line reports FAIL. Every other line must pass.
    let unexpected: Vec<_> = results.iter().filter(|r| !r.passed && r.number != 6).collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:#?}");
}

#[test]
fn rectangular_value_is_nine() {
    let (value, cert, bounds) = rectangular_value(&SearchConfig::default()).unwrap();
    assert_eq!(value, 9);
    let j = cert.unwrap();
    assert_eq!(j.entries_text(), "(0,0):3 (0,1):3 (1,0):1 (1,1):1");
    assert!(j.is_zero_sum());
    assert_eq!(count_fixed_length(&j, 4).unwrap(), 0u32.into());
    assert_eq!((bounds.lower, bounds.upper, bounds.proof_backed_upper), (Some(3), Some(8), Some(9)));
    assert!(bounds.admits_proof_backed(value));
    assert!(!bounds.admits(value));
}
