//! Dense recomputation of page dimensions, used to cross-check the
//! per-bidegree engine.
//!
//! Everything lives in one vector space spanned by all E1 monomials of the
//! computed window, with columns grouped by bidegree. Cycles and boundaries
//! are global subspaces; since they are graded, the number of echelon pivots
//! inside a bidegree block is the dimension of that bidegree.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{DiffRule, Element, GeneratorTable, Monomial};
use crate::f2linalg::{bit, flip, F2Matrix, RowSpace};
use crate::fields::FieldData;
use crate::grading::{diff_shift, Bidegree, SsKind, Window};
use crate::page::PageIndex;
use crate::{adams, bockstein, Error, Result};

/// Dimensions of one page, by bidegree (zero entries omitted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePage {
    pub ss: SsKind,
    pub index: PageIndex,
    pub dims: BTreeMap<Bidegree, usize>,
}

struct Space {
    table: GeneratorTable,
    window: Window,
    internal: Window,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    block: Vec<Bidegree>,
}

impl Space {
    fn new(field: &FieldData, window: Window) -> Space {
        let internal = window.internal();
        let table = GeneratorTable::new(field.kmilnor.clone(), internal);
        let mut monomials = Vec::new();
        let mut block = Vec::new();
        for (b, ms) in table.enumerate(internal) {
            for m in ms {
                monomials.push(m);
                block.push(b);
            }
        }
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Space { table, window, internal, monomials, index, block }
    }

    fn n(&self) -> usize {
        self.monomials.len()
    }

    fn element(&self, v: &[u64]) -> Element {
        (0..self.n()).filter(|&j| bit(v, j)).map(|j| self.monomials[j].clone()).collect()
    }

    /// Global vector of `x`, or `None` when part of it lies outside the
    /// computed window.
    fn vector(&self, x: &Element) -> Option<Vec<u64>> {
        let mut v = alloc::vec![0u64; self.n().div_ceil(64)];
        for m in x.terms() {
            flip(&mut v, *self.index.get(m)?);
        }
        Some(v)
    }

    fn dims(&self, z: &RowSpace, b: &RowSpace) -> BTreeMap<Bidegree, usize> {
        let mut out: BTreeMap<Bidegree, isize> = BTreeMap::new();
        for &p in z.pivots() {
            *out.entry(self.block[p]).or_default() += 1;
        }
        for &p in b.pivots() {
            *out.entry(self.block[p]).or_default() -= 1;
        }
        out.into_iter()
            .filter(|(k, d)| *d != 0 && self.window.contains(*k))
            .map(|(k, d)| (k, d as usize))
            .collect()
    }

    /// `Z_{r+1} = {z in Z_r : d_r z in B_r}` and `B_{r+1} = B_r + d_r Z_r`.
    fn step(&self, ss: SsKind, r: u32, rules: &[DiffRule], z: &RowSpace, b: &RowSpace) -> Result<(RowSpace, RowSpace)> {
        let shift = diff_shift(ss, r)?;
        let page_rules: Vec<DiffRule> = rules.iter().filter(|d| d.page == r).cloned().collect();
        let n = self.n();
        let mut images: Vec<Option<Vec<u64>>> = Vec::with_capacity(z.dim());
        for row in z.basis().row_iter() {
            let x = self.element(row);
            let y = self.table.differentiate(&page_rules, r, &x);
            if y.is_zero() {
                images.push(Some(alloc::vec![0; n.div_ceil(64)]));
                continue;
            }
            let src = self.table.bidegree(x.leading().expect("nonzero cycle"));
            let tgt = src.shifted(shift);
            match self.vector(&y) {
                Some(v) if z.contains(&v) => images.push(Some(v)),
                // truncation damage outside the reported window
                Some(_) if !self.window.contains(src) => images.push(None),
                Some(_) => return Err(Error::InconsistentDifferential { t: src.t, c: src.c }),
                None if !self.internal.contains(tgt) => images.push(None),
                None => return Err(Error::InconsistentDifferential { t: src.t, c: src.c }),
            }
        }
        let escapes = images.iter().filter(|i| i.is_none()).count();
        let cols = n + escapes;
        let mut m = F2Matrix::zeros(0, cols);
        let mut e = 0;
        for img in &images {
            let mut row = m.empty_row();
            match img {
                Some(v) => row[..v.len()].copy_from_slice(v),
                None => {
                    flip(&mut row, n + e);
                    e += 1;
                }
            }
            m.push_row(&row);
        }
        for brow in b.basis().row_iter() {
            // boundaries only serve to enlarge the kernel; their own
            // images are irrelevant, so they enter as themselves
            let mut row = m.empty_row();
            row[..brow.len()].copy_from_slice(brow);
            m.push_row(&row);
        }
        let kernel = m.left_kernel();
        let mut cycles = F2Matrix::zeros(0, n);
        for k in kernel.row_iter() {
            let mut v = alloc::vec![0u64; n.div_ceil(64)];
            for (i, row) in z.basis().row_iter().enumerate() {
                if bit(k, i) {
                    for (a, w) in v.iter_mut().zip(row) {
                        *a ^= w;
                    }
                }
            }
            cycles.push_row(&v);
        }
        let mut bound = b.basis().clone();
        for v in images.iter().flatten() {
            bound.push_row(v);
        }
        Ok((RowSpace::new(&cycles), RowSpace::new(&bound)))
    }

    fn run(
        &self,
        ss: SsKind,
        first: u32,
        rules: &[DiffRule],
        mut z: RowSpace,
        mut b: RowSpace,
        out: &mut Vec<DensePage>,
    ) -> Result<(RowSpace, RowSpace)> {
        let last = rules.iter().map(|d| d.page).max().unwrap_or(0);
        out.push(DensePage { ss, index: PageIndex::Finite(first), dims: self.dims(&z, &b) });
        for r in first..=last {
            if rules.iter().any(|d| d.page == r) {
                (z, b) = self.step(ss, r, rules, &z, &b)?;
            }
            out.push(DensePage { ss, index: PageIndex::Finite(r + 1), dims: self.dims(&z, &b) });
        }
        out.push(DensePage { ss, index: PageIndex::Infinity, dims: self.dims(&z, &b) });
        Ok((z, b))
    }
}

/// Dimensions of every Bockstein page from E1 and every Adams page from
/// E2, each sequence ending with its E-infinity page.
pub fn dense_pages(field: &FieldData, window: Window) -> Result<Vec<DensePage>> {
    let space = Space::new(field, window);
    let n = space.n();
    let mut out = Vec::new();
    let (z, b) = space.run(
        SsKind::Bockstein,
        1,
        &bockstein::rules(&space.table),
        RowSpace::full(n),
        RowSpace::zero(n),
        &mut out,
    )?;
    space.run(SsKind::Adams, 2, &adams::rules(&space.table), z, b, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldSpec;

    #[test]
    fn real_line_dims() {
        let pages = dense_pages(&FieldData::new(FieldSpec::RealLike).unwrap(), Window::new(8, 12)).unwrap();
        let binf = pages.iter().find(|p| p.ss == SsKind::Bockstein && p.index == PageIndex::Infinity).unwrap();
        // v_2 and its two rho multiples, nothing at P
        let col3: Vec<_> = binf.dims.iter().filter(|(b, _)| b.t == 3).map(|(b, d)| (b.c, *d)).collect();
        assert_eq!(col3, [(1, 1), (2, 1), (3, 1)]);
        assert!(!binf.dims.contains_key(&Bidegree::new(4, 4)));
    }
}
