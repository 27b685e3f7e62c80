//! One test per acceptance criterion at full corpus size.
//! Run with `cargo test -p geodiscord --test acceptance -- --nocapture` to see
//! the PASS/FAIL lines.

use geodiscord::acceptance::{self, CriterionOutcome, SuiteOptions};

fn check(run: fn(&SuiteOptions) -> CriterionOutcome) {
    let outcome = run(&SuiteOptions::default());
    println!("{outcome}");
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn c01_werner_closed_form() {
    check(acceptance::werner_closed_form);
}

#[test]
fn c02_isotropic_closed_form() {
    check(acceptance::isotropic_closed_form);
}

#[test]
fn c03_maximally_entangled() {
    check(acceptance::maximal_discord_states);
}

#[test]
fn c04_pure_state_formula() {
    check(acceptance::pure_state_formula);
}

#[test]
fn c05_qubit_exactness() {
    check(acceptance::qubit_exactness);
}

#[test]
fn c06_lower_bound_ordering() {
    check(acceptance::lower_bound_ordering);
}

#[test]
fn c07_zero_discord_detection() {
    check(acceptance::zero_discord_detection);
}

#[test]
fn c08_objective_forms_agree() {
    check(acceptance::objective_forms_agree);
}

#[test]
fn c09_local_unitary_invariance() {
    check(acceptance::local_unitary_invariance);
}

#[test]
fn c10_q_matches_d_p() {
    check(acceptance::q_matches_d_p_without_local_vector);
}

#[test]
fn c11_algebraic_substrate() {
    check(acceptance::algebraic_substrate);
}
