//! Acceptance gate: runs each numbered criterion and prints one pass/fail
//! line per criterion (visible with `--nocapture`; a failing criterion fails
//! the corresponding test).

use repst::accept;

const SEED: u64 = 0x5eed;

fn check(id: usize) {
    let r = accept::run(id, SEED).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    println!(
        "criterion {:2} {:<24} {} — {}",
        r.id,
        r.name,
        if r.pass { "PASS" } else { "FAIL" },
        r.detail
    );
    assert!(r.pass, "criterion {} ({}) failed: {}", r.id, r.name, r.detail);
}

#[test]
fn criterion_01_fiber_functoriality() {
    check(1);
}

#[test]
fn criterion_02_frobenius_laws() {
    check(2);
}

#[test]
fn criterion_03_distinct_idempotent() {
    check(3);
}

#[test]
fn criterion_04_dimension_polynomials() {
    check(4);
}

#[test]
fn criterion_05_algebra_axioms() {
    check(5);
}

#[test]
fn criterion_06_simplicity_certificates() {
    check(6);
}

#[test]
fn criterion_07_fiber_match() {
    check(7);
}

#[test]
fn criterion_08_classification() {
    check(8);
}

#[test]
fn criterion_09_contains_times() {
    check(9);
}

#[test]
fn criterion_10_sign_obstruction() {
    check(10);
}

#[test]
fn criterion_11_level_bounds() {
    check(11);
}

#[test]
fn criterion_12_determinism() {
    check(12);
}
