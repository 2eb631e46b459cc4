//! Structural checks on computed pages. Each returns the list of
//! violations found, described in words; an empty list means the check
//! passed.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{DiffRule, Element, GeneratorTable};
use crate::f2linalg::{subquotient_basis, F2Matrix};
use crate::grading::diff_shift;
use crate::page::{Page, Run};
use crate::Result;

fn rules(page: &Page, r: u32) -> Vec<DiffRule> {
    page.rules_on(r).cloned().collect()
}

/// `d_r(d_r x) = 0` for every fired differential.
pub fn d_squared(run: &Run) -> Vec<String> {
    let mut out = Vec::new();
    for page in run.pages() {
        for d in &page.differentials {
            let dd = page.table.differentiate(&rules(page, d.r), d.r, &d.target_element);
            match page.express(&dd) {
                Ok(Some((_, c))) if c.iter().all(|x| !x) => {}
                Err(_) => {}
                _ if !page.is_reported(d.source) => {}
                _ => out.push(format!(
                    "{} d_{}: d(d({})) = {} is nonzero",
                    page.ss.name(),
                    d.r,
                    page.table.format(&d.source_element),
                    page.table.format(&dd)
                )),
            }
        }
    }
    out
}

/// Every fired differential moves degree by the declared shift.
pub fn shifts(run: &Run) -> Vec<String> {
    let mut out = Vec::new();
    for page in run.pages() {
        for d in &page.differentials {
            let Ok(s) = diff_shift(page.ss, d.r) else {
                out.push(format!("{} has no d_{}", page.ss.name(), d.r));
                continue;
            };
            let mut wrong = d.target != d.source.shifted(s);
            if let Some(m) = d.target_element.leading() {
                let (a, b) = (page.table.degree(d.source_element.leading().unwrap()), page.table.degree(m));
                wrong |= (b.t - a.t, b.c - a.c) != (s.dt, s.dc);
                // f is only meaningful up to powers of h1, so it is not checked
                if let Some(deps) = s.deps {
                    let eps = |x: &Element| x.min_rho().unwrap_or(0) as i64;
                    wrong |= eps(&d.target_element) - eps(&d.source_element) < deps as i64;
                }
            }
            if wrong {
                out.push(format!("{} d_{} from {:?} lands at {:?}", page.ss.name(), d.r, d.source, d.target));
            }
        }
    }
    out
}

/// Dimensions never grow from one page to the next.
pub fn monotone(run: &Run) -> Vec<String> {
    let mut out = Vec::new();
    for w in run.pages().windows(2) {
        for (b, cell) in &w[1].cells {
            let before = w[0].dim(*b);
            if cell.dim() > before {
                out.push(format!("{} {:?}: {} after {}", w[1].ss.name(), b, cell.dim(), before));
            }
        }
    }
    out
}

/// The Leibniz defect `d(xy) + d(x) y + x d(y)` on `E_r`, for two
/// representatives. `Ok(None)` when the product leaves the computed window.
pub fn leibniz(page: &Page, r: u32, x: &Element, y: &Element) -> Result<Option<bool>> {
    let rs = rules(page, r);
    let d = |z: &Element| page.table.differentiate(&rs, r, z);
    let xy = page.table.multiply(x, y);
    if page.express(&xy).is_err() {
        return Ok(None);
    }
    let mut defect = d(&xy);
    defect.add(&page.table.multiply(&d(x), y));
    defect.add(&page.table.multiply(x, &d(y)));
    Ok(match page.express(&defect) {
        Ok(Some((_, c))) => Some(c.iter().all(|b| !b)),
        Ok(None) => Some(false),
        Err(_) => None,
    })
}

/// Normal forms survive a round trip through text, stay normal and are
/// homogeneous.
pub fn normal_form_is_stable(table: &GeneratorTable, word: &[&str]) -> Result<bool> {
    let x = table.normalize(word)?;
    let again = table.parse(&table.format(&x))?;
    let mut degrees = x.terms().map(|m| table.bidegree(m));
    let first = degrees.next();
    Ok(again == x && x.terms().all(|m| table.is_normal(m)) && degrees.all(|b| Some(b) == first))
}

fn span(m: &F2Matrix) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([0u64]);
    for row in m.row_iter() {
        let r = row.first().copied().unwrap_or(0);
        out = out.iter().flat_map(|&x| [x, x ^ r]).collect();
    }
    out
}

/// Compare `subquotient_basis` with brute-force enumeration of both spans.
/// Only for matrices with at most six columns.
pub fn subquotient_matches_enumeration(cycles: &F2Matrix, boundaries: &F2Matrix) -> Result<bool> {
    assert!(cycles.cols() <= 6, "enumeration is limited to six columns");
    let reps = subquotient_basis(cycles, boundaries)?;
    let (zs, bs) = (span(cycles), span(boundaries));
    if !bs.is_subset(&zs) || zs.len() / bs.len() != 1 << reps.rows() {
        return Ok(false);
    }
    // distinct combinations of representatives lie in distinct cosets
    let mut cosets = BTreeSet::new();
    for x in span(&reps) {
        if !zs.contains(&x) {
            return Ok(false);
        }
        cosets.insert(bs.iter().map(|b| b ^ x).min().unwrap());
    }
    Ok(cosets.len() == 1 << reps.rows())
}
