use mwstems_core::fields::{witt_module, FieldData, FieldSpec};
use mwstems_core::grading::Window;
use mwstems_core::page::Page;
use mwstems_core::stems::{assemble, closed_form};
use mwstems_core::{adams, bockstein};

fn einf(spec: FieldSpec, t: i32) -> Page {
    let field = FieldData::new(spec).unwrap();
    let b = bockstein::run_to_einf(bockstein::build_e1(&field, Window::with_default_c(t))).unwrap();
    adams::run_to_einf(adams::build_e2(&b)).unwrap()
}

fn check(spec: FieldSpec, t_max: i32) {
    let stems = assemble(&einf(spec, t_max)).unwrap();
    let mut bad = Vec::new();
    for s in &stems {
        let expect = if s.t == 0 {
            let mut w = closed_form(spec, 0);
            w.summands = witt_module(spec);
            w
        } else {
            closed_form(spec, s.t)
        };
        if s.t != 1 && s.orders() != expect.orders() {
            bad.push(format!("t={} got {:?} ({}) want {:?} ({})", s.t, s.orders(), s.module, expect.orders(), expect.module));
        }
    }
    assert!(bad.is_empty(), "{spec}:\n{}", bad.join("\n"));
}

#[test]
fn finite_fields() {
    check(FieldSpec::FiniteField(5), 24);
    check(FieldSpec::FiniteField(7), 24);
}

#[test]
fn padic_fields() {
    for p in [2, 3, 5] {
        check(FieldSpec::Padic(p), 24);
    }
}

#[test]
fn rationals() {
    check(FieldSpec::Rationals(13), 15);
    check(FieldSpec::Rationals(5), 24);
}

#[test]
fn real_and_complex() {
    check(FieldSpec::RealLike, 24);
    check(FieldSpec::AlgClosed, 24);
}
