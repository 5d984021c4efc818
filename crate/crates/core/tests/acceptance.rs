//! Acceptance suite: one test per headline criterion, each printing a
//! PASS/FAIL line. Run with `--nocapture` to see the lines of passing tests.

use mstd_core::reproduce::{self, Config, Outcome};
use mstd_core::setcore::{classify, FiniteSet};

fn cfg() -> Config {
    Config::default()
}

fn report(outcome: mstd_core::Result<Outcome>) {
    let outcome = outcome.expect("criterion ran");
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

fn set(v: &[u64]) -> FiniteSet {
    FiniteSet::new(v.to_vec()).unwrap()
}

#[test]
fn criterion_01_smallest_prime_set() {
    report(reproduce::theorem2_smallest_prime_set(&cfg()));
}

#[test]
fn criterion_02_prime_census_109() {
    report(reproduce::census_109(&cfg()));
}

#[test]
fn criterion_03_no_mstd_six_sets() {
    report(reproduce::theorem1_six_sets(&cfg()));
}

#[test]
fn criterion_04_cardinality_threshold() {
    report(reproduce::hegarty_threshold(&cfg()));
}

#[test]
fn criterion_05_family_grid() {
    report(reproduce::family_grid(&cfg()));
}

#[test]
fn criterion_06a_helper_k() {
    let c = classify(&set(&[0, 1, 2, 4]));
    assert_eq!((c.sum_card, c.diff_card, c.margin), (8, 9, -1));
}

#[test]
fn criterion_06_regression_values() {
    report(reproduce::regression_values(&cfg()));
}

#[test]
fn criterion_07_named_sets() {
    report(reproduce::named_sets(&cfg()));
}

#[test]
fn criterion_08_lemma_inequalities() {
    report(reproduce::lemma_inequalities(&cfg()));
}

#[test]
fn criterion_09_symmetric_and_ap4() {
    report(reproduce::symmetric_and_ap4(&cfg()));
}

#[test]
fn criterion_10_oracle_and_determinism() {
    report(reproduce::oracle_and_determinism(&cfg()));
}

#[test]
fn criterion_11_tuple_constructions() {
    report(reproduce::tuple_constructions(&cfg()));
}
