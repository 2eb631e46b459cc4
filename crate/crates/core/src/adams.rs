//! The h1-inverted motivic Adams spectral sequence, starting from the
//! Bockstein E-infinity page.
//!
//! Rules: `d_2(v_n) = v_{n-1}^2` for `n >= 3`, and for `r >= 3`, `n >= r+1`,
//! `d_r(rho^e v_n) = P^{2^{n-2} - 2^{n-r}} v_{n-r+1}^2` with
//! `e = 2^n - 2^{n-r+2} - r + 2`. The rho power is a gate (it must divide
//! exactly) and extra factors of rho ride along.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{DiffRule, Element, GeneratorTable};
use crate::grading::SsKind;
use crate::page::{Page, Run};
use crate::Result;

pub fn rules(table: &GeneratorTable) -> Vec<DiffRule> {
    let mut out = Vec::new();
    let max = table.max_v();
    for n in 3..=max {
        let (src, tgt) = (table.v_index(n).unwrap(), table.v_index(n - 1).unwrap());
        let mut sq = vec![0u16; table.generators().len()];
        sq[tgt] = 2;
        out.push(DiffRule {
            page: 2,
            gate: table.one(),
            base: src,
            step: 1,
            target: Element::from_monomial(table.monomial(sq)),
        });
    }
    for r in 3..max {
        for n in r + 1..=max {
            let e = (1u32 << n) - (1 << (n - r + 2)) - r + 2;
            let mut gate = vec![0u16; table.generators().len()];
            gate[0] = e as u16;
            let mut t = vec![0u16; table.generators().len()];
            t[table.p_index()] = ((1u32 << (n - 2)) - (1 << (n - r))) as u16;
            t[table.v_index(n - r + 1).unwrap()] = 2;
            out.push(DiffRule {
                page: r,
                gate: table.raw_monomial(gate),
                base: table.v_index(n).unwrap(),
                step: 1,
                target: Element::from_monomial(table.monomial(t)),
            });
        }
    }
    out
}

/// The Bockstein E-infinity page, re-read as Adams E2.
pub fn build_e2(ext: &Page) -> Page {
    let rules = rules(&ext.table);
    ext.retag(SsKind::Adams, 2, rules)
}

pub fn run(e2: Page) -> Result<Run> {
    Run::new(e2)
}

pub fn run_to_einf(e2: Page) -> Result<Page> {
    Ok(run(e2)?.into_einf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bockstein;
    use crate::fields::{FieldData, FieldSpec};
    use crate::grading::{Bidegree, Window};

    fn adams(spec: FieldSpec, t: i32) -> Run {
        let e1 = bockstein::build_e1(&FieldData::new(spec).unwrap(), Window::with_default_c(t));
        run(build_e2(&bockstein::run_to_einf(e1).unwrap())).unwrap()
    }

    #[test]
    fn rule_shapes() {
        let e1 = bockstein::build_e1(&FieldData::new(FieldSpec::Rationals(13)).unwrap(), Window::with_default_c(24));
        let t = &e1.table;
        let rs = rules(t);
        let show: Vec<_> = rs.iter().map(|r| (r.page, t.format_monomial(&r.source()), t.format(&r.target))).collect();
        assert!(show.contains(&(2, "v_3".into(), "v_2^2".into())));
        assert!(show.contains(&(3, "rho^7*v_4".into(), "P^2*v_2^2".into())));
        assert!(show.contains(&(3, "rho^15*v_5".into(), "P^4*v_3^2".into())));
        for r in &rs {
            let (s, g) = (t.bidegree(&r.source()), t.bidegree(r.target.leading().unwrap()));
            assert_eq!((g.t - s.t, g.c - s.c), (-1, r.page as i32 - 1));
        }
    }

    #[test]
    fn algebraically_closed_leaves_p_and_v2() {
        let run = adams(FieldSpec::AlgClosed, 30);
        let inf = run.einf();
        for c in inf.classes() {
            let m = c.element.leading().unwrap();
            let p = m.exponent(inf.table.p_index());
            let v2 = m.exponent(inf.table.v_index(2).unwrap());
            assert_eq!(c.element.len(), 1);
            assert!(v2 <= 1, "{}", inf.table.format(&c.element));
            assert_eq!(inf.table.degree(m).t, 4 * p as i32 + 3 * v2 as i32);
            assert_eq!(inf.table.field_degree(m), 0);
        }
        for t in 0..=30 {
            let expect = usize::from(t % 4 == 0 || t % 4 == 3);
            let got: usize = (0..=35).map(|c| inf.dim(Bidegree::new(t, c))).sum();
            assert_eq!(got, expect, "t={t}");
        }
    }

    #[test]
    fn rational_towers() {
        let run = adams(FieldSpec::Rationals(13), 15);
        let e3 = run.page(3).unwrap();
        let col7: Vec<i32> = e3.classes().into_iter().filter(|c| c.bidegree.t == 7 && e3.table.field_degree(c.element.leading().unwrap()) == c.element.min_rho().unwrap()).map(|c| c.bidegree.c).collect();
        assert_eq!(col7, [4, 5, 6, 7]);
        let inf = run.einf();
        let fired: Vec<_> = run.pages().iter().flat_map(|p| p.differentials.iter()).filter(|d| d.r == 3).map(|d| (inf.table.format(&d.source_element), inf.table.format(&d.target_element))).collect();
        assert!(fired.contains(&("rho^7*v_4".into(), "P^2*v_2^2".into())));
        let v4 = inf.table.parse("rho^10*v_4").unwrap();
        assert_eq!(inf.rho_torsion(&v4), Some(5));
    }
}
