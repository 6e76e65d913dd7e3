//! The acceptance criteria, one test (and one pass/fail line) each, with
//! their time limits. Search and ideal results are shared through one suite
//! so the cross-prime criterion reuses the runs of criteria 4 and 5.

use std::sync::OnceLock;
use std::time::Instant;

use binvar::cache::CatalogCache;
use binvar::suite::{Suite, DEFAULT_CRITERIA};
use binvar::Outcome;

fn suite() -> &'static Suite {
    static SUITE: OnceLock<(tempfile::TempDir, Suite)> = OnceLock::new();
    let (_, s) = SUITE.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let suite = Suite::new(CatalogCache::new(Some(dir.path().to_path_buf())), 1);
        (dir, suite)
    });
    s
}

fn run(id: u8) {
    let (_, title, limit) = DEFAULT_CRITERIA
        .iter()
        .copied()
        .find(|c| c.0 == id)
        .unwrap();
    let t0 = Instant::now();
    let section = suite()
        .criterion(id)
        .unwrap_or_else(|e| panic!("criterion {id} ({title}) errored: {e:#}"));
    let elapsed = t0.elapsed();
    let passed = section.outcome == Outcome::Pass && elapsed <= limit;
    let failing: Vec<String> = section
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    println!(
        "criterion {id} {}: {title} ({} checks, {:.2}s of {}s)",
        if passed { "PASS" } else { "FAIL" },
        section.checks.len(),
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert_eq!(
        section.outcome,
        Outcome::Pass,
        "criterion {id} ({title}): {}",
        failing.join("; ")
    );
    assert!(
        elapsed <= limit,
        "criterion {id} ({title}) took {elapsed:?}, limit {limit:?}"
    );
}

#[test]
fn criterion_1_poincare_series() {
    run(1);
}

#[test]
fn criterion_2_numerator() {
    run(2);
}

#[test]
fn criterion_3_catalog_golden_expansions() {
    run(3);
}

#[test]
fn criterion_4_degree_table_through_14() {
    run(4);
}

#[test]
fn criterion_5_graded_ideal_dimensions() {
    run(5);
}

#[test]
fn criterion_6_groebner_membership() {
    run(6);
}

#[test]
fn criterion_7_exceptional_forms() {
    run(7);
}

#[test]
fn criterion_8_case_proportionalities() {
    run(8);
}

#[test]
fn criterion_9_properties_and_cross_prime() {
    run(9);
}
