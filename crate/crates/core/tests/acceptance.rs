//! Acceptance suite: one test per verification criterion, each printing a
//! pass/fail line. Stated runtime ceilings are enforced in release builds;
//! debug builds check the same content without the wall-clock bound.

use std::time::Instant;

use matchings_core::report::{
    check_cycle_witnesses, check_fails_at_order, check_integer_acyclic_pairs,
    check_involutions, check_linear_witnesses, check_lmp_counterexamples,
    check_matching_property, check_pairing_round_trip, check_qr_witnesses,
    check_strong_matching_criterion, check_transcendental_witnesses, check_window_witnesses,
    run_suite, CheckRecord, Status, Suite, SuiteOptions,
};

fn assert_pass(criterion: &str, record: &CheckRecord, limit_secs: Option<u64>) {
    let ok = record.status == Status::Pass;
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion}: {verdict} ({} ms{})",
        record.elapsed_ms,
        if ok { String::new() } else { format!("; notes: {:?}", record.notes) }
    );
    assert!(ok, "criterion {criterion} failed: {:?}", record.notes);
    if let Some(limit) = limit_secs {
        if !cfg!(debug_assertions) {
            assert!(
                record.elapsed_ms < u128::from(limit) * 1000,
                "criterion {criterion} exceeded {limit} s: {} ms",
                record.elapsed_ms
            );
        }
    }
}

#[test]
fn criterion_01_qr_witnesses_to_101() {
    let record = check_qr_witnesses(101);
    assert_eq!(record.counters.get("witnesses"), Some(&23), "primes 7..=101");
    // stated bound: under a second per prime
    assert_pass("01 qr-witness", &record, Some(23));
}

#[test]
fn criterion_02_cycle_witnesses() {
    let record = check_cycle_witnesses(17);
    // orders 3..p-3 for p in {7, 11, 13, 17}: 2 + 6 + 8 + 12
    assert_eq!(record.counters.get("witnesses"), Some(&28));
    assert_pass("02 cycle-witness", &record, Some(4));
}

#[test]
fn criterion_03_involutions_at_p_minus_2() {
    let record = check_involutions(11);
    assert_pass("03 involution-order", &record, Some(60));
}

#[test]
fn criterion_04_unique_matching_at_p_minus_1() {
    let record = matchings_core::report::check_unique_matchings(13);
    assert_pass("04 unique-matching", &record, None);
}

#[test]
fn criterion_05_matching_property_desk_scale() {
    let record = check_matching_property(101);
    assert_eq!(record.counters.get("counterexamples"), Some(&5));
    assert_eq!(record.counters.get("full-passes"), Some(&4));
    assert_pass("05 matching-property", &record, Some(30));
}

#[test]
fn criterion_06_fails_at_order_exclusions() {
    let record = check_fails_at_order(101);
    assert_eq!(record.counters.get("witnesses"), Some(&2), "Z_7 orders 3 and 4");
    assert_eq!(record.counters.get("exhaustive-none"), Some(&10), "2 + 3 + 5 orders");
    assert_pass("06 fails-at-order", &record, Some(10));
}

#[test]
fn criterion_07_integer_acyclic_pairs() {
    let record = check_integer_acyclic_pairs(42);
    assert_eq!(record.counters.get("found"), Some(&200));
    assert_pass("07 acyclic-integer-pairs", &record, Some(30));
}

#[test]
fn criterion_08_window_pairing_identity() {
    let record = check_window_witnesses();
    assert_eq!(record.counters.get("families"), Some(&3));
    assert_pass("08 window-pairing", &record, None);
}

#[test]
fn criterion_09_pairing_round_trip() {
    let record = check_pairing_round_trip(13, 42);
    assert_eq!(record.counters.get("pairs-built"), Some(&500));
    assert_pass("09 pairing-round-trip", &record, None);
}

#[test]
fn criterion_10_strong_matching_criterion() {
    let record = check_strong_matching_criterion(42);
    assert_pass("10 strong-matching-criterion", &record, Some(60));
}

#[test]
fn criterion_11_linear_witnesses() {
    let record = check_linear_witnesses();
    assert_eq!(record.counters.get("witnesses"), Some(&4));
    assert_eq!(
        record.counters.get("pointwise-confirmed"),
        Some(&4),
        "all four cases stay within the pointwise bound"
    );
    assert_pass("11 linear-witness", &record, Some(30));
}

#[test]
fn criterion_12_transcendental_witnesses() {
    let record = check_transcendental_witnesses();
    assert_eq!(record.counters.get("witnesses"), Some(&3));
    assert_pass("12 transcendental-witness", &record, Some(5));
}

#[test]
fn criterion_13_lmp_counterexamples() {
    let started = Instant::now();
    let record = check_lmp_counterexamples();
    assert_eq!(record.counters.get("counterexamples"), Some(&2));
    assert_pass("13 lmp-counterexample", &record, Some(60));
    if !cfg!(debug_assertions) {
        assert!(started.elapsed().as_secs() < 60);
    }
}

#[test]
fn criterion_14_report_determinism() {
    let opts = || SuiteOptions {
        suite: Suite::All,
        max_p: 13,
        seed: 42,
    };
    let first = run_suite(&opts()).to_json();
    let second = run_suite(&opts()).to_json();
    let ok = first == second;
    println!(
        "criterion 14 report-determinism: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert_eq!(first, second, "identical runs must serialize identically");
}
