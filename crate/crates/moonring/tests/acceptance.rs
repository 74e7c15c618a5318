//! Acceptance suite: the nine headline checks at their stated depths and
//! time budgets, one test per criterion. Each prints a single verdict
//! line; `cargo test --test acceptance -- --nocapture` shows them all.

use moonring::modfun::HauptmodulCatalog;
use moonring::verify::{
    check_adams_tables, check_character_enumeration, check_d_series_4b,
    check_decomposition_4a, check_feasibility_6a, check_hauptmodul_coefficients, check_knz,
    check_property_suites, check_quasirep_families, CheckResult,
};

fn report(criterion: usize, r: &CheckResult) {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion} ({}): {verdict} [{} ms] {}", r.name, r.millis, r.detail);
    assert!(r.passed, "criterion {criterion} ({}): {}", r.name, r.detail);
}

fn catalog() -> HauptmodulCatalog {
    HauptmodulCatalog::load().expect("catalog loads and validates")
}

#[test]
fn criterion_1_character_enumeration() {
    report(1, &check_character_enumeration());
}

#[test]
fn criterion_2_adams_tables() {
    report(2, &check_adams_tables());
}

#[test]
fn criterion_3_hauptmodul_coefficients() {
    report(3, &check_hauptmodul_coefficients(&catalog(), 101));
}

#[test]
fn criterion_4_decomposition_4a() {
    report(4, &check_decomposition_4a(&catalog(), 100));
}

#[test]
fn criterion_5_d_series_4b() {
    report(5, &check_d_series_4b(&catalog(), 101));
}

#[test]
fn criterion_6_knz_denominator_identity() {
    report(6, &check_knz(&catalog(), 8, 8));
}

#[test]
fn criterion_7_quasirep_families() {
    report(7, &check_quasirep_families(&catalog(), 6, 12));
}

#[test]
fn criterion_8_feasibility_6a() {
    report(8, &check_feasibility_6a(&catalog(), 60));
}

#[test]
fn criterion_9_property_suites() {
    report(9, &check_property_suites(&catalog()));
}
