//! Pages of a spectral sequence and the per-bidegree homology step.
//!
//! Every bidegree keeps the r-cycles `Z_r` and r-boundaries `B_r` as
//! subspaces of E1, written in the basis of E1 monomials, together with
//! coset representatives for `Z_r / B_r`. One step applies `d_r` to the
//! representatives, reads off kernels and images, and rebuilds the
//! representatives.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{DiffRule, Element, GeneratorTable, Monomial};
use crate::f2linalg::{bit, flip, subquotient_basis, F2Matrix, RowSpace};
use crate::fields::FieldData;
use crate::grading::{diff_shift, Bidegree, SsKind, Window};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PageIndex {
    Finite(u32),
    Infinity,
}

impl core::fmt::Display for PageIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PageIndex::Finite(r) => write!(f, "{r}"),
            PageIndex::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    basis: Arc<Vec<Monomial>>,
    cycles: RowSpace,
    boundaries: RowSpace,
    reps: F2Matrix,
    rep_pivots: Vec<usize>,
}

impl Cell {
    fn e1(basis: Vec<Monomial>) -> Cell {
        let n = basis.len();
        Cell {
            basis: Arc::new(basis),
            cycles: RowSpace::full(n),
            boundaries: RowSpace::zero(n),
            reps: F2Matrix::identity(n),
            rep_pivots: (0..n).collect(),
        }
    }

    fn rebuild(basis: Arc<Vec<Monomial>>, cycles: RowSpace, boundaries: RowSpace) -> Result<Cell> {
        let reps = subquotient_basis(cycles.basis(), boundaries.basis())?;
        let rep_pivots = (0..reps.rows()).map(|i| reps.row_support(i)[0]).collect();
        Ok(Cell { basis, cycles, boundaries, reps, rep_pivots })
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.reps.rows()
    }

    pub fn cycles(&self) -> &RowSpace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &RowSpace {
        &self.boundaries
    }

    pub fn rep_vector(&self, i: usize) -> &[u64] {
        self.reps.row(i)
    }

    pub fn element_of(&self, v: &[u64]) -> Element {
        (0..self.basis.len()).filter(|&j| bit(v, j)).map(|j| self.basis[j].clone()).collect()
    }

    pub fn rep(&self, i: usize) -> Element {
        self.element_of(self.reps.row(i))
    }

    /// E1 coordinates of an element of this bidegree.
    pub fn vector(&self, x: &Element) -> Vec<u64> {
        let mut v = self.reps.empty_row();
        for m in x.terms() {
            let j = self.basis.binary_search(m).expect("monomial of the right bidegree");
            flip(&mut v, j);
        }
        v
    }

    /// Coordinates in the representatives of the class of an E1 vector, or
    /// `None` if the vector is not a cycle.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<bool>> {
        let mut w = v.to_vec();
        self.boundaries.reduce(&mut w);
        let coeffs: Vec<bool> = self.rep_pivots.iter().map(|&p| bit(&w, p)).collect();
        for (i, &c) in coeffs.iter().enumerate() {
            if c {
                for (a, b) in w.iter_mut().zip(self.reps.row(i)) {
                    *a ^= b;
                }
            }
        }
        w.iter().all(|x| *x == 0).then_some(coeffs)
    }

    fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        self.reps.row_times(coeffs)
    }
}

/// A nonzero differential out of one representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub r: u32,
    pub source: Bidegree,
    pub source_index: usize,
    pub target: Bidegree,
    /// Representatives of the target page hit, empty if the target lies
    /// outside the computed window or is damaged by truncation there.
    pub target_indices: Vec<usize>,
    pub source_element: Element,
    pub target_element: Element,
}

/// One class of a page: its bidegree, position and representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub bidegree: Bidegree,
    pub index: usize,
    pub element: Element,
    /// Bockstein filtration; `None` on Adams pages.
    pub eps: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Page {
    pub ss: SsKind,
    pub index: PageIndex,
    /// Reported window.
    pub window: Window,
    /// Computed window; larger so that the reported part is exact.
    pub internal: Window,
    pub field: Arc<FieldData>,
    pub table: Arc<GeneratorTable>,
    pub rules: Arc<Vec<DiffRule>>,
    pub cells: BTreeMap<Bidegree, Cell>,
    /// The differential `d_r` on this page, filled in once the next page
    /// has been computed.
    pub differentials: Vec<Differential>,
}

impl Page {
    pub(crate) fn from_e1(
        ss: SsKind,
        r: u32,
        window: Window,
        field: Arc<FieldData>,
        table: Arc<GeneratorTable>,
        rules: Vec<DiffRule>,
    ) -> Page {
        let internal = window.internal();
        let cells = table.enumerate(internal).into_iter().map(|(b, basis)| (b, Cell::e1(basis))).collect();
        Page {
            ss,
            index: PageIndex::Finite(r),
            window,
            internal,
            field,
            table,
            rules: Arc::new(rules),
            cells,
            differentials: Vec::new(),
        }
    }

    /// Same classes, viewed as the first page of another spectral sequence.
    pub(crate) fn retag(&self, ss: SsKind, r: u32, rules: Vec<DiffRule>) -> Page {
        Page {
            ss,
            index: PageIndex::Finite(r),
            rules: Arc::new(rules),
            differentials: Vec::new(),
            ..self.clone()
        }
    }

    pub fn rules_on(&self, r: u32) -> impl Iterator<Item = &DiffRule> {
        self.rules.iter().filter(move |rule| rule.page == r)
    }

    pub fn last_rule_page(&self) -> u32 {
        self.rules.iter().map(|r| r.page).max().unwrap_or(0)
    }

    pub fn cell(&self, b: Bidegree) -> Option<&Cell> {
        self.cells.get(&b)
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.cells.get(&b).map_or(0, Cell::dim)
    }

    pub fn is_reported(&self, b: Bidegree) -> bool {
        self.window.contains(b)
    }

    pub fn class(&self, b: Bidegree, i: usize) -> Class {
        let element = self.cells[&b].rep(i);
        let eps = (self.ss == SsKind::Bockstein).then(|| element.min_rho().unwrap_or(0));
        Class { bidegree: b, index: i, element, eps }
    }

    /// All classes inside the reported window, by bidegree and position.
    pub fn classes(&self) -> Vec<Class> {
        self.classes_in(self.window)
    }

    pub fn classes_in(&self, w: Window) -> Vec<Class> {
        let mut out = Vec::new();
        for (&b, cell) in &self.cells {
            if w.contains(b) {
                out.extend((0..cell.dim()).map(|i| self.class(b, i)));
            }
        }
        out
    }

    /// Class of an E1 element. `Err` when it is outside the computed window,
    /// `Ok(None)` when it is not a cycle on this page.
    pub fn express(&self, x: &Element) -> Result<Option<(Bidegree, Vec<bool>)>> {
        let Some(m) = x.leading() else {
            return Ok(Some((Bidegree::new(0, 0), Vec::new())));
        };
        let b = self.table.bidegree(m);
        match self.cells.get(&b) {
            Some(cell) => Ok(cell.coordinates(&cell.vector(x)).map(|c| (b, c))),
            None if self.internal.contains(b) => Ok(Some((b, Vec::new()))),
            None => Err(Error::Unstable { t: b.t, c: b.c }),
        }
    }

    /// Whether `x` represents zero on this page (it must be a cycle).
    pub fn is_zero_class(&self, x: &Element) -> Result<bool> {
        match self.express(x)? {
            Some((_, c)) => Ok(c.iter().all(|b| !b)),
            None => Err(Error::InconsistentDifferential { t: 0, c: 0 }),
        }
    }

    /// Product of two classes, as indices of representatives hit.
    pub fn product(&self, x: &Element, y: &Element) -> Result<Option<(Bidegree, Vec<usize>)>> {
        let p = self.table.multiply(x, y);
        Ok(self
            .express(&p)?
            .map(|(b, c)| (b, c.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i).collect())))
    }

    /// Apply `d_r` and take homology. Returns the nonzero differentials and
    /// the page `E_{r+1}`.
    pub fn step(&self, r: u32) -> Result<(Vec<Differential>, Page)> {
        let mut next = Page { index: PageIndex::Finite(r + 1), differentials: Vec::new(), ..self.clone() };
        let rules: Vec<DiffRule> = self.rules_on(r).cloned().collect();
        if rules.is_empty() {
            return Ok((Vec::new(), next));
        }
        let shift = diff_shift(self.ss, r)?;
        let mut new_cycles: BTreeMap<Bidegree, F2Matrix> = BTreeMap::new();
        let mut new_boundaries: BTreeMap<Bidegree, F2Matrix> = BTreeMap::new();
        let mut differentials = Vec::new();

        for (&b, cell) in &self.cells {
            if cell.dim() == 0 {
                continue;
            }
            let tb = b.shifted(shift);
            let target = self.cells.get(&tb);
            let tdim = target.map_or(0, Cell::dim);
            // per representative: coordinates of d_r in the target, or an
            // escape when the target is outside the computed window
            let mut rows: Vec<(Vec<bool>, bool)> = Vec::with_capacity(cell.dim());
            for i in 0..cell.dim() {
                let x = cell.rep(i);
                let y = self.table.differentiate(&rules, r, &x);
                if y.is_zero() {
                    rows.push((vec![false; tdim], false));
                    continue;
                }
                let (coords, escaped) = match target {
                    Some(tc) => match tc.coordinates(&tc.vector(&y)) {
                        Some(c) => (c, false),
                        // near the edge of the computed window a class can
                        // survive only because its killer lies outside;
                        // such sources are dropped rather than trusted
                        None if !self.window.contains(b) => (vec![false; tdim], true),
                        None => return Err(Error::InconsistentDifferential { t: b.t, c: b.c }),
                    },
                    None if !self.internal.contains(tb) => (vec![false; tdim], true),
                    None => return Err(Error::InconsistentDifferential { t: b.t, c: b.c }),
                };
                if escaped || coords.iter().any(|&c| c) {
                    differentials.push(Differential {
                        r,
                        source: b,
                        source_index: i,
                        target: tb,
                        target_indices: coords.iter().enumerate().filter(|(_, &c)| c).map(|(j, _)| j).collect(),
                        source_element: x,
                        target_element: y,
                    });
                }
                rows.push((coords, escaped));
            }
            if differentials.last().is_none_or(|d| d.source != b) {
                // every representative is an r-cycle and nothing changes here
                continue;
            }
            // Columns: target representatives, then one column per escape.
            let escapes = rows.iter().filter(|(_, e)| *e).count();
            let mut d = F2Matrix::zeros(rows.len(), tdim + escapes);
            let mut e = 0;
            for (i, (coords, escaped)) in rows.iter().enumerate() {
                for (j, &c) in coords.iter().enumerate() {
                    if c {
                        d.set(i, j, true);
                    }
                }
                if *escaped {
                    d.set(i, tdim + e, true);
                    e += 1;
                }
            }
            let mut z = cell.boundaries.basis().clone();
            for k in d.left_kernel().row_iter() {
                z.push_row(&cell.combine(k));
            }
            new_cycles.insert(b, z);
            if let Some(tc) = target {
                let img = new_boundaries.entry(tb).or_insert_with(|| tc.boundaries.basis().clone());
                for (coords, _) in rows.iter().filter(|(c, _)| c.iter().any(|&x| x)) {
                    let mut w = vec![0u64; tc.dim().div_ceil(64)];
                    for (j, &c) in coords.iter().enumerate() {
                        if c {
                            flip(&mut w, j);
                        }
                    }
                    img.push_row(&tc.combine(&w));
                }
            }
        }

        for (b, cell) in next.cells.iter_mut() {
            let z = new_cycles.remove(b);
            let bd = new_boundaries.remove(b);
            if z.is_none() && bd.is_none() {
                continue;
            }
            let cycles = z.map_or_else(|| cell.cycles.clone(), |m| RowSpace::new(&m));
            let boundaries = bd.map_or_else(|| cell.boundaries.clone(), |m| RowSpace::new(&m));
            *cell = Cell::rebuild(cell.basis.clone(), cycles, boundaries)?;
        }
        log::debug!("{} d_{r}: {} nonzero differentials", self.ss.name(), differentials.len());
        Ok((differentials, next))
    }

    /// The `r` this page starts at.
    pub fn r(&self) -> u32 {
        match self.index {
            PageIndex::Finite(r) => r,
            PageIndex::Infinity => self.last_rule_page() + 1,
        }
    }
}

/// All pages of one spectral sequence, from its first page to E-infinity.
#[derive(Debug, Clone)]
pub struct Run {
    /// Pages at which something changed; each one carries the nonzero
    /// differential that leaves it. E-infinity is last.
    pages: Vec<Page>,
}

impl Run {
    pub fn new(first: Page) -> Result<Run> {
        let last = first.last_rule_page();
        let mut r = first.r();
        let mut pages = vec![first];
        while r <= last {
            let cur = pages.last_mut().unwrap();
            if cur.rules_on(r).next().is_none() {
                r += 1;
                continue;
            }
            let (diffs, next) = cur.step(r)?;
            cur.differentials = diffs;
            pages.push(next);
            r += 1;
        }
        let mut einf = pages.last().unwrap().clone();
        einf.index = PageIndex::Infinity;
        pages.push(einf);
        Ok(Run { pages })
    }

    /// `E_r`, for `r` at or after the first page.
    pub fn page(&self, r: u32) -> Option<Page> {
        let finite = &self.pages[..self.pages.len() - 1];
        let p = finite.iter().rev().find(|p| p.r() <= r)?;
        let mut p = p.clone();
        p.differentials.retain(|d| d.r == r);
        p.index = PageIndex::Finite(r);
        Some(p)
    }

    pub fn einf(&self) -> &Page {
        self.pages.last().unwrap()
    }

    /// The distinct pages, ending with E-infinity.
    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn into_einf(mut self) -> Page {
        self.pages.pop().unwrap()
    }
}

/// One multiplicative generator of a page, with its rho-torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRow {
    pub name: alloc::string::String,
    pub degree: crate::Degree,
    pub element: Element,
    /// Least `k` with `rho^k x = 0`; `None` for an infinite rho-tower.
    pub rho_torsion: Option<u32>,
}

impl Page {
    /// Least `k` with `rho^k x = 0` on this page, `None` if the tower runs
    /// off the top of the computed window.
    pub fn rho_torsion(&self, x: &Element) -> Option<u32> {
        let rho = self.table.gen_monomial(0);
        let mut cur = x.clone();
        let mut k = 0;
        loop {
            match self.is_zero_class(&cur) {
                Ok(true) => return Some(k),
                Ok(false) => {}
                Err(_) => return None,
            }
            cur = self.table.mul_monomial(&cur, &rho);
            k += 1;
        }
    }

    /// Indecomposable classes in the reported window: a basis of each
    /// bidegree modulo products of generators found in lower total degree.
    pub fn indecomposables(&self) -> Result<Vec<GeneratorRow>> {
        let mut order: Vec<Bidegree> = self
            .cells
            .iter()
            .filter(|(b, c)| self.window.contains(**b) && c.dim() > 0 && (b.t, b.c) != (0, 0))
            .map(|(b, _)| *b)
            .collect();
        order.sort_by_key(|b| (b.t + b.c, b.t, b.c));
        let mut found: Vec<(Bidegree, Element)> = Vec::new();
        let mut rows = Vec::new();
        for x in order {
            let cell = &self.cells[&x];
            let mut span = F2Matrix::zeros(0, cell.dim());
            for (a, g) in &found {
                let y = Bidegree::new(x.t - a.t, x.c - a.c);
                let Some(ycell) = self.cells.get(&y) else { continue };
                if (y.t, y.c) == (0, 0) {
                    continue;
                }
                for j in 0..ycell.dim() {
                    let p = self.table.multiply(g, &ycell.rep(j));
                    let coords = cell
                        .coordinates(&cell.vector(&p))
                        .ok_or(Error::InconsistentDifferential { t: x.t, c: x.c })?;
                    let mut v = span.empty_row();
                    for (i, &c) in coords.iter().enumerate() {
                        if c {
                            flip(&mut v, i);
                        }
                    }
                    span.push_row(&v);
                }
            }
            let mut space = RowSpace::new(&span);
            for i in 0..cell.dim() {
                let mut e = space.basis().empty_row();
                flip(&mut e, i);
                if space.contains(&e) {
                    continue;
                }
                let mut m = space.basis().clone();
                m.push_row(&e);
                space = RowSpace::new(&m);
                let element = cell.rep(i);
                let lead = element.leading().expect("nonzero representative");
                let mut degree = self.table.degree(lead);
                if self.ss == SsKind::Bockstein {
                    degree.eps = element.min_rho();
                }
                rows.push(GeneratorRow {
                    name: self.table.format(&element),
                    degree,
                    rho_torsion: self.rho_torsion(&element),
                    element: element.clone(),
                });
                found.push((x, element));
            }
        }
        Ok(rows)
    }
}
