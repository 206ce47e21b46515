//! Acceptance suite: one test per criterion, each printing its PASS/FAIL
//! line with the measured runtime against the pinned limit.

use witt_descent::selftest::run_criterion;

fn check(id: usize) {
    let result = run_criterion(id, 0).expect("criterion exists");
    println!(
        "{} criterion-{} {} ({:.2}s, limit {:.0}s): {}",
        if result.passed { "PASS" } else { "FAIL" },
        result.id,
        result.name,
        result.seconds,
        result.limit_seconds,
        result.details
    );
    assert!(
        result.passed,
        "criterion {} ({}) failed: {}",
        result.id, result.name, result.details
    );
}

#[test]
fn criterion_1_remark_reproduction() {
    check(1);
}

#[test]
fn criterion_2_erratum_system_counterexample() {
    check(2);
}

#[test]
fn criterion_3_descent_oracle_equivalence() {
    check(3);
}

#[test]
fn criterion_4_transfer_system_identity() {
    check(4);
}

#[test]
fn criterion_5_hermitian_roundtrip() {
    check(5);
}

#[test]
fn criterion_6_negative_quaternionic_cases() {
    check(6);
}

#[test]
fn criterion_7_hilbert_and_witt_oracles() {
    check(7);
}

#[test]
fn criterion_8_functional_independence() {
    check(8);
}
