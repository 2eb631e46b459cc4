//! One line per acceptance criterion, PASS or FAIL.

use std::sync::OnceLock;

use mwstems_cli::verify::{self, Cache, Criterion};

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Cache::default)
}

fn report(c: Criterion) {
    println!("{c}");
    assert!(c.passed, "{c}");
}

#[test]
fn criterion_1_collapse() {
    report(verify::collapse(cache()));
}

#[test]
fn criterion_2_ext_generators() {
    report(verify::ext_generators(cache()));
}

#[test]
fn criterion_3_adams_towers() {
    report(verify::adams_tables(cache()));
}

#[test]
fn criterion_4_closed_forms() {
    report(verify::closed_forms(cache()));
}

#[test]
fn criterion_5_properties() {
    report(verify::properties(cache()));
}

#[test]
fn criterion_6_oracle() {
    report(verify::oracle(cache()));
}

#[test]
fn criterion_7_vanishing_line() {
    report(verify::vanishing_line(cache()));
}

#[test]
fn criterion_8_ring_relations() {
    report(verify::ring(cache()));
}
