//! Milnor-Witt stems from the Adams E-infinity page.
//!
//! Multiplication by 2 is detected by rho, so each column of E-infinity is
//! split into maximal rho-chains and a chain of length k becomes a summand
//! `Z/2^k`. The chain through the unit never ends and becomes `Z_2`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Element, Monomial};
use crate::f2linalg::{flip, F2Matrix, RowSpace};
use crate::fields::{power, witt_module, FieldSpec, Order, Summand};
use crate::grading::{Bidegree, SsKind};
use crate::page::{Page, PageIndex};
use crate::{Error, Result};

pub const EXTERNAL_NOTE: &str = "stem 1 is reported as 0 on the strength of an external result; convergence there is not established";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StemPresentation {
    pub t: i32,
    pub summands: Vec<Summand>,
    /// Description as a module over the completed Witt ring: `W`, `W/2^n`,
    /// `M` or `0`.
    pub module: String,
    pub note: Option<&'static str>,
}

impl StemPresentation {
    /// Orders of the nonzero summands, largest first.
    pub fn orders(&self) -> Vec<Order> {
        sorted_orders(&self.summands)
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }
}

fn sorted_orders(s: &[Summand]) -> Vec<Order> {
    let mut o: Vec<Order> = s.iter().map(|x| x.order).filter(|o| *o != Order::Finite(0)).collect();
    o.sort_unstable_by(|a, b| b.cmp(a));
    o
}

/// 2-adic valuation.
pub fn nu2(n: u64) -> u32 {
    n.trailing_zeros()
}

/// The torsion part `M` of the Witt group: `W` without its `Z_2` summand.
fn m_module(spec: FieldSpec) -> Vec<Summand> {
    witt_module(spec).into_iter().filter(|s| s.order != Order::Infinite).collect()
}

fn truncated(spec: FieldSpec, n: u32) -> Vec<Summand> {
    witt_module(spec).into_iter().map(|s| Summand { order: s.order.truncate(n), ..s }).collect()
}

/// Name the module a list of summands presents, by comparing orders.
pub fn module_tag(spec: FieldSpec, summands: &[Summand]) -> String {
    let got = sorted_orders(summands);
    if got.is_empty() {
        return "0".into();
    }
    if got == sorted_orders(&witt_module(spec)) {
        return "W".into();
    }
    if spec.has_real_place() && got == sorted_orders(&m_module(spec)) {
        return "M".into();
    }
    (1..=64)
        .find(|&n| got == sorted_orders(&truncated(spec, n)))
        .map_or_else(|| "?".into(), |n| format!("W/2^{n}"))
}

/// The stems predicted directly from the Witt group, without any spectral
/// sequence.
pub fn closed_form(spec: FieldSpec, t: i32) -> StemPresentation {
    let summands = if t == 0 {
        witt_module(spec)
    } else if t < 0 || matches!(t % 4, 1 | 2) {
        Vec::new()
    } else if spec.cd_at_most_two() {
        witt_module(spec)
    } else if t % 4 == 3 {
        truncated(spec, nu2(t as u64 + 1) + 1)
    } else {
        m_module(spec)
    };
    let module = module_tag(spec, &summands);
    StemPresentation { t, summands, module, note: (t == 1).then_some(EXTERNAL_NOTE) }
}

/// `rho^{2^n-n-2} P^{2^{n-1}k} v_n` times a field class: returns the field
/// class with the rho power removed, `P^{2^{n-1}k}` exponent and `n`.
fn lambda_form(page: &Page, m: &Monomial) -> Option<(Vec<u16>, u16, u32)> {
    let table = &page.table;
    let vs: Vec<u32> = (2..=table.max_v()).filter(|&n| m.exponent(table.v_index(n).unwrap()) > 0).collect();
    let [n] = vs[..] else { return None };
    if m.exponent(table.v_index(n).unwrap()) != 1 {
        return None;
    }
    let p = m.exponent(table.p_index());
    if u32::from(p) % (1 << (n - 1)) != 0 {
        return None;
    }
    let e = ((1u32 << n) - n - 2) as u16;
    let mut field = table.field_part(m).to_vec();
    if field[0] < e {
        return None;
    }
    field[0] -= e;
    table.kmilnor().is_normal(&field).then_some((field, p, n))
}

/// Text for an E-infinity class, writing `lambda_n` where it applies.
pub fn class_name(page: &Page, x: &Element) -> String {
    let mut terms = x.terms();
    let (Some(m), None) = (terms.next(), terms.next()) else {
        return page.table.format(x);
    };
    let Some((field, p, n)) = lambda_form(page, m) else {
        return page.table.format(x);
    };
    let mut parts: Vec<String> = page.table.kmilnor().format(&field).into_iter().collect();
    if p > 0 {
        parts.push(power("P", p));
    }
    parts.push(format!("lambda_{n}"));
    parts.join("*")
}

/// One column of a page with the rho-multiplication maps between its cells.
struct Column {
    /// Cell dimension at each `c` in `0..=c_top`.
    dims: Vec<usize>,
    /// `rho: E^{t,c} -> E^{t,c+1}` on representatives; none above the top.
    maps: Vec<F2Matrix>,
}

impl Column {
    fn new(page: &Page, t: i32) -> Result<Column> {
        let top = page.internal.c_max;
        let dims: Vec<usize> = (0..=top).map(|c| page.dim(Bidegree::new(t, c))).collect();
        let rho = Element::from_monomial(page.table.gen_monomial(0));
        let mut maps = Vec::new();
        for c in 0..top {
            let up = dims[c as usize + 1];
            let mut m = F2Matrix::zeros(0, up);
            for i in 0..dims[c as usize] {
                let x = page.cells[&Bidegree::new(t, c)].rep(i);
                let mut row = m.empty_row();
                let (_, hit) = page.product(&x, &rho)?.ok_or(Error::InconsistentDifferential { t, c })?;
                for j in hit {
                    flip(&mut row, j);
                }
                m.push_row(&row);
            }
            maps.push(m);
        }
        Ok(Column { dims, maps })
    }

    fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `rho^k` out of degree `c`, as a matrix; zero columns past the top.
    fn power(&self, c: usize, k: usize) -> F2Matrix {
        if c + k > self.top() {
            return F2Matrix::zeros(self.dims[c], 0);
        }
        let mut m = F2Matrix::identity(self.dims[c]);
        for j in c..c + k {
            m = m.mul(&self.maps[j]);
        }
        m
    }

    /// `{x in E^{t,c} : rho^k x = 0}`.
    fn kernel(&self, c: usize, k: usize) -> F2Matrix {
        if k == 0 {
            return F2Matrix::zeros(0, self.dims[c]);
        }
        let p = self.power(c, k);
        if p.cols() == 0 {
            return F2Matrix::identity(self.dims[c]);
        }
        p.left_kernel()
    }

    /// Heads of rho-chains: for each `c` and length `k`, a complement of
    /// `ker rho^{k-1} + rho ker rho^{k+1}` in `ker rho^k`.
    fn chains(&self) -> Vec<(usize, usize, Vec<u64>)> {
        let mut out = Vec::new();
        for c in 0..=self.top() {
            if self.dims[c] == 0 {
                continue;
            }
            for k in 1..=self.top() - c + 1 {
                let mut span = self.kernel(c, k - 1);
                if c > 0 && self.dims[c - 1] > 0 {
                    let below = self.kernel(c - 1, k + 1);
                    span = span.stacked(&below.mul(&self.maps[c - 1]));
                }
                let mut space = RowSpace::new(&span);
                for h in self.kernel(c, k).row_iter() {
                    if !space.contains(h) {
                        out.push((c, k, h.to_vec()));
                        space = space.sum(&F2Matrix::from_words(self.dims[c], h));
                    }
                }
            }
        }
        out
    }
}

/// Stems `0..=t_max` from an Adams E-infinity page.
pub fn assemble(einf: &Page) -> Result<Vec<StemPresentation>> {
    if einf.ss != SsKind::Adams || einf.index != PageIndex::Infinity {
        return Err(Error::InvalidPage { ss: einf.ss.name(), r: einf.r() });
    }
    let spec = einf.field.spec;
    let mut out = Vec::new();
    for t in 0..=einf.window.t_max {
        let col = Column::new(einf, t)?;
        let mut summands = Vec::new();
        for (c, k, coeffs) in col.chains() {
            let cell = &einf.cells[&Bidegree::new(t, c as i32)];
            let mut v = vec![0u64; cell.basis().len().div_ceil(64)];
            for i in 0..cell.dim() {
                if crate::f2linalg::bit(&coeffs, i) {
                    for (a, b) in v.iter_mut().zip(cell.rep_vector(i)) {
                        *a ^= b;
                    }
                }
            }
            let head = cell.element_of(&v);
            let order = if c + k - 1 == col.top() {
                if t != 0 {
                    return Err(Error::Unstable { t, c: c as i32 });
                }
                Order::Infinite
            } else {
                Order::Finite(k as u32)
            };
            summands.push(Summand { order, gen: class_name(einf, &head) });
        }
        let module = module_tag(spec, &summands);
        out.push(StemPresentation { t, summands, module, note: (t == 1).then_some(EXTERNAL_NOTE) });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductKind {
    /// Nonzero on E-infinity; the text of the product.
    Visible(String),
    /// Zero for a stated reason.
    Forced(&'static str),
    /// Invisible on E-infinity but nonzero by a declared rule.
    Hidden,
    /// Zero on E-infinity with nothing of higher weight to hide behind.
    Zero,
    /// Zero on E-infinity, but a hidden extension is not excluded.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub t: i32,
    pub kind: ProductKind,
}

impl ProductEntry {
    pub fn is_nonzero(&self) -> bool {
        matches!(self.kind, ProductKind::Visible(_) | ProductKind::Hidden)
    }
}

pub const FORCED_STEMS: &str = "both factors lie in stems 3 mod 4";
pub const FORCED_MILNOR: &str = "the coefficient product vanishes in Milnor K-theory";

fn single(x: &Element) -> Option<&Monomial> {
    let mut it = x.terms();
    match (it.next(), it.next()) {
        (Some(m), None) => Some(m),
        _ => None,
    }
}

/// Field class with no P or v factors.
fn pure_field(page: &Page, m: &Monomial) -> bool {
    m.exponents()[page.table.field_len()..].iter().all(|&e| e == 0)
}

fn hidden_rule(page: &Page, x: &Element, y: &Element) -> bool {
    let (Some(a), Some(b)) = (single(x), single(y)) else { return false };
    if !pure_field(page, a) {
        return false;
    }
    let k = page.table.kmilnor();
    let Some(name) = k.format(page.table.field_part(a)) else { return false };
    let Some((field, _, n)) = lambda_form(page, b) else { return false };
    if field.iter().any(|&e| e > 0) {
        return false;
    }
    page.field.hidden_products.iter().any(|h| h.multiplier == name && n >= h.n_min)
}

fn milnor_forced(page: &Page, x: &Element, y: &Element) -> bool {
    let (Some(a), Some(b)) = (single(x), single(y)) else { return false };
    let table = &page.table;
    let only_p = |m: &Monomial| {
        m.exponents()[table.field_len()..].iter().enumerate().all(|(i, &e)| i == 0 || e == 0)
    };
    pure_field(page, a) && only_p(b) && table.kmilnor().mul(table.field_part(a), table.field_part(b)).is_empty()
}

/// Classify the product of two E-infinity classes.
pub fn classify_product(einf: &Page, x: &Element, y: &Element) -> Result<ProductEntry> {
    let (lx, ly) = (x.leading().ok_or(Error::BadMonomial("0".into()))?, y.leading().ok_or(Error::BadMonomial("0".into()))?);
    let (bx, by) = (einf.table.bidegree(lx), einf.table.bidegree(ly));
    let target = Bidegree::new(bx.t + by.t, bx.c + by.c);
    let entry = |kind| ProductEntry { left: class_name(einf, x), right: class_name(einf, y), t: target.t, kind };
    let p = einf.table.multiply(x, y);
    let visible = match einf.express(&p) {
        Ok(Some((_, coeffs))) => coeffs.iter().any(|&c| c),
        Ok(None) => return Err(Error::InconsistentDifferential { t: target.t, c: target.c }),
        Err(_) => return Ok(entry(ProductKind::Undetermined)),
    };
    if visible {
        return Ok(entry(ProductKind::Visible(class_name(einf, &p))));
    }
    if bx.t % 4 == 3 && by.t % 4 == 3 {
        return Ok(entry(ProductKind::Forced(FORCED_STEMS)));
    }
    if hidden_rule(einf, x, y) || hidden_rule(einf, y, x) {
        return Ok(entry(ProductKind::Hidden));
    }
    if milnor_forced(einf, x, y) || milnor_forced(einf, y, x) {
        return Ok(entry(ProductKind::Forced(FORCED_MILNOR)));
    }
    let higher = einf.cells.iter().any(|(b, c)| b.t == target.t && b.c > target.c && c.dim() > 0);
    Ok(entry(if higher { ProductKind::Undetermined } else { ProductKind::Zero }))
}

/// Products of pairs of indecomposables whose stems add up to at most
/// `t_max`.
pub fn ring_relations(einf: &Page) -> Result<Vec<ProductEntry>> {
    let gens = einf.indecomposables()?;
    let mut out = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            if a.degree.t + b.degree.t <= einf.window.t_max {
                out.push(classify_product(einf, &a.element, &b.element)?);
            }
        }
    }
    Ok(out)
}

/// Height of a class above the vanishing line: one plus the part of its
/// coefficient not accounted for by rho.
pub fn class_height(page: &Page, x: &Element) -> u32 {
    x.terms().map(|m| 1 + page.table.field_degree(m) - m.rho_exponent()).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub ss: SsKind,
    pub page: PageIndex,
    pub bidegree: Bidegree,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingReport {
    pub field: FieldSpec,
    pub height: u32,
    /// Largest height met in positive stems.
    pub witnessed: u32,
    pub violations: Vec<Violation>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that every class in positive stem on every page sits at height at
/// most `n` along the direction of eta, which is `(1, 1)` in (stem, weight).
pub fn vanishing_line_check<'a>(
    pages: impl IntoIterator<Item = &'a Page>,
    n: u32,
    direction: (i32, i32),
) -> Result<VanishingReport> {
    if direction != (1, 1) {
        return Err(Error::Direction(direction.0, direction.1));
    }
    let mut field = None;
    let mut witnessed = 0;
    let mut worst: BTreeMap<(u8, PageIndex, Bidegree), u32> = BTreeMap::new();
    for page in pages {
        field.get_or_insert(page.field.spec);
        for class in page.classes() {
            if class.bidegree.t <= 0 {
                continue;
            }
            let h = class_height(page, &class.element);
            witnessed = witnessed.max(h);
            if h > n {
                let key = (page.ss as u8, page.index, class.bidegree);
                let e = worst.entry(key).or_default();
                *e = (*e).max(h);
            }
        }
    }
    let violations = worst
        .into_iter()
        .map(|((ss, page, bidegree), height)| Violation {
            ss: if ss == 0 { SsKind::Bockstein } else { SsKind::Adams },
            page,
            bidegree,
            height,
        })
        .collect();
    Ok(VanishingReport { field: field.unwrap_or(FieldSpec::AlgClosed), height: n, witnessed, violations })
}
