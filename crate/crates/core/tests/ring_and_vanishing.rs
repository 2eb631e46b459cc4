use mwstems_core::fields::{FieldData, FieldSpec};
use mwstems_core::grading::{SsKind, Window};
use mwstems_core::page::{Page, Run};
use mwstems_core::stems::{classify_product, ring_relations, vanishing_line_check, ProductKind, FORCED_STEMS};
use mwstems_core::{adams, bockstein};

fn runs(spec: FieldSpec, t: i32) -> (Run, Run) {
    let field = FieldData::new(spec).unwrap();
    let b = bockstein::run(bockstein::build_e1(&field, Window::with_default_c(t))).unwrap();
    let a = adams::run(adams::build_e2(b.einf())).unwrap();
    (b, a)
}

fn product(page: &Page, x: &str, y: &str) -> ProductKind {
    let p = |s: &str| page.table.parse(s).unwrap();
    classify_product(page, &p(x), &p(y)).unwrap().kind
}

#[test]
fn v2_squares_to_zero_over_small_fields() {
    for spec in [FieldSpec::AlgClosed, FieldSpec::FiniteField(5), FieldSpec::FiniteField(7), FieldSpec::Padic(2), FieldSpec::Padic(3), FieldSpec::Padic(5)] {
        let (_, a) = runs(spec, 12);
        assert_eq!(product(a.einf(), "v_2", "v_2"), ProductKind::Forced(FORCED_STEMS), "{spec}");
    }
}

#[test]
fn rational_products() {
    let (_, a) = runs(FieldSpec::Rationals(13), 15);
    let e = a.einf();
    assert_eq!(product(e, "[3]*P", "[5]*P"), ProductKind::Visible("a_5*P^2 + a_3*P^2".into()));
    assert_eq!(product(e, "v_2", "v_2"), ProductKind::Forced(FORCED_STEMS));
    assert_eq!(product(e, "v_2", "rho^3*v_3"), ProductKind::Forced(FORCED_STEMS));
    for l in ["[2]", "[3]", "[5]", "[7]", "[11]", "[13]"] {
        for lambda in ["v_2", "rho^3*v_3"] {
            let k = product(e, l, lambda);
            assert!(matches!(k, ProductKind::Visible(_) | ProductKind::Hidden), "{l} * {lambda}: {k:?}");
        }
        assert_eq!(product(e, l, "rho^3*v_3"), ProductKind::Hidden, "{l}");
    }
}

#[test]
fn relation_table_is_complete_and_consistent() {
    let (_, a) = runs(FieldSpec::Rationals(13), 11);
    let rel = ring_relations(a.einf()).unwrap();
    assert!(!rel.is_empty());
    for r in &rel {
        if r.t % 4 == 2 && r.left.contains("lambda") && r.right.contains("lambda") {
            assert!(!r.is_nonzero(), "{r:?}");
        }
    }
}

#[test]
fn vanishing_line_of_height_three() {
    for spec in [FieldSpec::AlgClosed, FieldSpec::RealLike, FieldSpec::FiniteField(5), FieldSpec::FiniteField(7), FieldSpec::Padic(2), FieldSpec::Padic(3), FieldSpec::Padic(5), FieldSpec::Rationals(13)] {
        let (b, a) = runs(spec, 15);
        let report = vanishing_line_check(b.pages().iter().chain(a.pages()), 3, (1, 1)).unwrap();
        assert!(report.passed(), "{spec}: {:?}", report.violations.first());
        assert!(report.witnessed >= 1);
    }
    let (b, _) = runs(FieldSpec::RealLike, 15);
    assert_eq!(vanishing_line_check(b.pages(), 1, (1, 1)).unwrap().witnessed, 1);
}

#[test]
fn a_page_above_the_line_is_caught() {
    // classes with a degree-two coefficient sit at height 3
    let (b, _) = runs(FieldSpec::Rationals(13), 8);
    let report = vanishing_line_check(b.pages(), 2, (1, 1)).unwrap();
    assert!(!report.passed());
    let v = &report.violations[0];
    assert_eq!((v.ss, v.height), (SsKind::Bockstein, 3));
    assert!(v.bidegree.t > 0);
}
