//! The h1-inverted rho-Bockstein spectral sequence, converging to
//! `Ext(F)[h1^-1]`.
//!
//! One rule family serves every field: `d_{2^n-1}(P^{2^{n-2}}) =
//! rho^{2^n-1} v_n` for `n >= 2`. Over fields where rho is nilpotent the
//! targets vanish and the spectral sequence collapses on its own.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{DiffRule, Element, GeneratorTable};
use crate::fields::FieldData;
use crate::grading::{SsKind, Window};
use crate::page::{GeneratorRow, Page, Run};
use crate::Result;

pub fn rules(table: &GeneratorTable) -> Vec<DiffRule> {
    let mut out = Vec::new();
    for n in 2..=table.max_v() {
        let Some(v) = table.v_index(n) else { continue };
        let r = (1u32 << n) - 1;
        let mut target = Element::from_monomial(table.gen_monomial(v));
        for _ in 0..r {
            target = table.mul_monomial(&target, &table.gen_monomial(0));
        }
        out.push(DiffRule { page: r, gate: table.one(), base: table.p_index(), step: 1 << (n - 2), target });
    }
    out
}

pub fn build_e1(field: &FieldData, window: Window) -> Page {
    let internal = window.internal();
    let table = Arc::new(GeneratorTable::new(field.kmilnor.clone(), internal));
    let rules = rules(&table);
    Page::from_e1(SsKind::Bockstein, 1, window, Arc::new(field.clone()), table, rules)
}

/// Every page from E1 to E-infinity.
pub fn run(e1: Page) -> Result<Run> {
    Run::new(e1)
}

pub fn run_to_einf(e1: Page) -> Result<Page> {
    Ok(run(e1)?.into_einf())
}

/// Generators of `Ext(F)[h1^-1]` with their rho-torsion.
#[derive(Debug, Clone)]
pub struct ExtTable {
    pub rows: Vec<GeneratorRow>,
    pub notes: Vec<&'static str>,
}

pub const CONVERGENCE_NOTE: &str =
    "strong convergence and the absence of hidden extensions are taken from the literature, not re-derived";

pub fn ext_table(einf: &Page) -> Result<ExtTable> {
    Ok(ExtTable { rows: einf.indecomposables()?, notes: alloc::vec![CONVERGENCE_NOTE] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldSpec;
    use crate::grading::Bidegree;

    fn e1(spec: FieldSpec, t: i32) -> Page {
        build_e1(&FieldData::new(spec).unwrap(), Window::with_default_c(t))
    }

    fn column(p: &Page, t: i32) -> Vec<(i32, alloc::string::String)> {
        p.classes().into_iter().filter(|c| c.bidegree.t == t).map(|c| (c.bidegree.c, p.table.format(&c.element))).collect()
    }

    #[test]
    fn e1_columns() {
        let f5 = e1(FieldSpec::FiniteField(5), 8);
        assert_eq!(column(&f5, 3), [(1, "v_2".into()), (2, "u*v_2".into())]);
        let c = e1(FieldSpec::AlgClosed, 8);
        assert_eq!(column(&c, 4), [(4, "P".into())]);
        let q = e1(FieldSpec::Rationals(13), 8);
        let eps = |name: &str| {
            q.classes().into_iter().find(|c| q.table.format(&c.element) == name).unwrap().eps
        };
        assert_eq!(eps("a_7"), Some(1));
        assert_eq!(eps("a_5"), Some(0));
    }

    #[test]
    fn collapse_when_rho_is_nilpotent() {
        for spec in [FieldSpec::AlgClosed, FieldSpec::FiniteField(7), FieldSpec::Padic(3)] {
            let p = e1(spec, 12);
            let inf = run_to_einf(p.clone()).unwrap();
            for b in p.cells.keys() {
                assert_eq!(p.dim(*b), inf.dim(*b), "{spec} {b:?}");
            }
        }
    }

    #[test]
    fn real_line() {
        let inf = run_to_einf(e1(FieldSpec::RealLike, 8)).unwrap();
        assert_eq!(inf.dim(Bidegree::new(4, 4)), 0);
        let v2 = inf.table.parse("v_2").unwrap();
        assert_eq!(inf.rho_torsion(&v2), Some(3));
    }

    #[test]
    fn prime_classes_times_p_survive() {
        let inf = run_to_einf(e1(FieldSpec::Rationals(13), 8)).unwrap();
        for l in ["[2]", "[3]", "[5]", "[7]", "[11]", "[13]"] {
            let x = inf.table.parse(&alloc::format!("{l}*P")).unwrap();
            assert!(!inf.is_zero_class(&x).unwrap(), "{l}");
        }
    }
}
