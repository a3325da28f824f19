//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! The same checks back the `arthur check` command.

use arthur_core::check::{self, Criterion};

fn run(criterion: Criterion) {
    let status = if criterion.passed { "PASS" } else { "FAIL" };
    println!("[{status}] {} — {}", criterion.name, criterion.detail);
    assert!(criterion.passed, "{}: {}", criterion.name, criterion.detail);
}

#[test]
fn criterion_1_regular_correspondence() {
    run(check::criterion_regular_correspondence());
}

#[test]
fn criterion_2_endoscopic_compatibility() {
    run(check::criterion_endoscopic_compatibility());
}

#[test]
fn criterion_3_cross_derivation_oracle() {
    run(check::criterion_cross_derivation());
}

#[test]
fn criterion_4_orbit_theory() {
    run(check::criterion_orbit_theory());
}

#[test]
fn criterion_5_geometric_consistency() {
    run(check::criterion_geometric_consistency());
}

#[test]
fn criterion_6_translation_calculus() {
    run(check::criterion_translation_calculus());
}

#[test]
fn criterion_7_singular_nonvanishing() {
    run(check::criterion_singular_agreement());
}

#[test]
fn criterion_8_golden_fixture() {
    run(check::criterion_golden_fixture());
}

#[test]
fn module_invariant_suites() {
    for suite in [
        check::suite_arith(),
        check::suite_parameters(),
        check::suite_correspondence(),
    ] {
        for criterion in suite.criteria {
            run(criterion);
        }
    }
}
