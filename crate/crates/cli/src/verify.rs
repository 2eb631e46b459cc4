//! The acceptance suite. Each criterion recomputes what it needs and
//! reports one line; `run_suite` runs them all.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwstems_core::f2linalg::F2Matrix;
use mwstems_core::fields::{witt_module, CoefficientClass, FieldData, FieldSpec};
use mwstems_core::oracle::dense_pages;
use mwstems_core::page::Run;
use mwstems_core::stems::{assemble, classify_product, closed_form, vanishing_line_check, ProductKind, StemPresentation};
use mwstems_core::{adams, bockstein, invariants, Bidegree, Page, PageIndex, SsKind, Window};

pub const SUITES: &[&str] = &["paper"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {} ({})", self.id, self.title, self.detail)
    }
}

/// Bockstein and Adams runs for one field and window.
#[derive(Debug)]
pub struct Runs {
    pub bockstein: Run,
    pub adams: Run,
}

impl Runs {
    pub fn compute(spec: FieldSpec, window: Window) -> mwstems_core::Result<Runs> {
        let field = FieldData::new(spec)?;
        let bockstein = bockstein::run(bockstein::build_e1(&field, window))?;
        let adams = adams::run(adams::build_e2(bockstein.einf()))?;
        Ok(Runs { bockstein, adams })
    }

    pub fn pages(&self) -> impl Iterator<Item = &Page> {
        self.bockstein.pages().iter().chain(self.adams.pages())
    }
}

/// Runs shared between criteria.
#[derive(Default)]
pub struct Cache {
    runs: Mutex<HashMap<(FieldSpec, i32), Arc<Runs>>>,
}

impl Cache {
    pub fn get(&self, spec: FieldSpec, t_max: i32) -> mwstems_core::Result<Arc<Runs>> {
        if let Some(r) = self.runs.lock().unwrap().get(&(spec, t_max)) {
            return Ok(r.clone());
        }
        let r = Arc::new(Runs::compute(spec, Window::with_default_c(t_max))?);
        self.runs.lock().unwrap().insert((spec, t_max), r.clone());
        Ok(r)
    }
}

const SMALL_FIELDS: [FieldSpec; 5] = [
    FieldSpec::FiniteField(5),
    FieldSpec::FiniteField(7),
    FieldSpec::Padic(2),
    FieldSpec::Padic(3),
    FieldSpec::Padic(5),
];

const Q13: FieldSpec = FieldSpec::Rationals(13);

fn all_presets() -> Vec<(FieldSpec, i32)> {
    let mut v: Vec<(FieldSpec, i32)> = SMALL_FIELDS.iter().map(|&f| (f, 24)).collect();
    v.extend([(FieldSpec::AlgClosed, 24), (FieldSpec::RealLike, 24), (Q13, 15)]);
    v
}

fn verdict(id: u8, title: &'static str, problems: Vec<String>, ok_detail: String) -> Criterion {
    let passed = problems.is_empty();
    let detail = if passed {
        ok_detail
    } else {
        let shown: Vec<_> = problems.iter().take(3).cloned().collect();
        format!("{} problem(s): {}", problems.len(), shown.join("; "))
    };
    Criterion { id, title, passed, detail }
}

fn failed(id: u8, title: &'static str, e: mwstems_core::Error) -> Criterion {
    Criterion { id, title, passed: false, detail: format!("computation failed: {e}") }
}

macro_rules! tryc {
    ($id:expr, $title:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return failed($id, $title, e),
        }
    };
}

fn dims_differ(a: &Page, b: &Page) -> Vec<Bidegree> {
    let keys: std::collections::BTreeSet<Bidegree> =
        a.cells.keys().chain(b.cells.keys()).copied().filter(|k| a.window.contains(*k)).collect();
    keys.into_iter().filter(|k| a.dim(*k) != b.dim(*k)).collect()
}

pub fn collapse(cache: &Cache) -> Criterion {
    const T: &str = "collapse over fields of cohomological dimension at most two";
    let mut problems = Vec::new();
    let mut classes = 0;
    for spec in SMALL_FIELDS {
        let r = tryc!(1, T, cache.get(spec, 24));
        let e1 = &r.bockstein.pages()[0];
        for b in dims_differ(e1, r.bockstein.einf()) {
            problems.push(format!("{spec} Bockstein at {b:?}"));
        }
        let Some(e3) = r.adams.page(3) else {
            problems.push(format!("{spec}: no Adams E3"));
            continue;
        };
        for b in dims_differ(&e3, r.adams.einf()) {
            problems.push(format!("{spec} Adams at {b:?}"));
        }
        classes += r.adams.einf().classes().len();
    }
    verdict(1, T, problems, format!("5 fields, T=24, {classes} E-infinity classes compared"))
}

/// Expected generators of Bockstein E-infinity over `Q:13` with their
/// rho-torsion (`None` for a free tower).
fn expected_ext_rows(t_max: i32) -> BTreeMap<String, Option<u32>> {
    let mut rows = BTreeMap::new();
    rows.insert("rho".to_string(), None);
    let p = |k: i32| match k {
        0 => String::new(),
        1 => "*P".to_string(),
        k => format!("*P^{k}"),
    };
    for k in 0..=t_max / 4 {
        // with rho[2] = 0 the class [2] itself is the torsion-one generator
        rows.insert(format!("[2]{}", p(k)), Some(1));
        for l in [3u32, 5, 7, 11, 13] {
            rows.insert(format!("[{l}]{}", p(k)), Some(if l % 4 == 3 { 2 } else { 1 }));
        }
    }
    for n in 2..=5u32 {
        let t_n = (1i32 << n) - 1;
        let mut k = 0;
        while t_n + 4 * (1 << (n - 1)) * k <= t_max {
            let pk = (1 << (n - 1)) * k;
            let name = match pk {
                0 => format!("v_{n}"),
                1 => format!("P*v_{n}"),
                e => format!("P^{e}*v_{n}"),
            };
            rows.insert(name, Some((1 << n) - 1));
            k += 1;
        }
    }
    rows
}

pub fn ext_generators(cache: &Cache) -> Criterion {
    const T: &str = "Bockstein E-infinity generators over Q:13";
    let r = tryc!(2, T, cache.get(Q13, 15));
    let table = tryc!(2, T, bockstein::ext_table(r.bockstein.einf()));
    let got: BTreeMap<String, Option<u32>> = table.rows.iter().map(|g| (g.name.clone(), g.rho_torsion)).collect();
    let want = expected_ext_rows(15);
    let mut problems = Vec::new();
    for (k, v) in &want {
        match got.get(k) {
            Some(g) if g == v => {}
            other => problems.push(format!("{k}: want {v:?}, got {other:?}")),
        }
    }
    for k in got.keys().filter(|k| !want.contains_key(*k)) {
        problems.push(format!("unexpected generator {k}"));
    }
    let key = ["v_2", "v_3", "[3]", "[5]", "[2]"].map(|k| format!("{k}:{:?}", got.get(k).copied().flatten()));
    verdict(2, T, problems, format!("{} rows, {}", got.len(), key.join(" ")))
}

fn black_dots(page: &Page, t: i32) -> usize {
    page.classes()
        .iter()
        .filter(|c| c.bidegree.t == t)
        .filter(|c| {
            let m = c.element.leading().unwrap();
            page.table.kmilnor().coefficient_class(page.table.field_part(m)) == CoefficientClass::Unit
        })
        .count()
}

pub fn adams_tables(cache: &Cache) -> Criterion {
    const T: &str = "Adams E3 and E-infinity towers over Q:13";
    let r = tryc!(3, T, cache.get(Q13, 15));
    let mut problems = Vec::new();
    let Some(e3) = r.adams.page(3) else {
        return verdict(3, T, vec!["no E3 page".into()], String::new());
    };
    let einf = r.adams.einf();
    for (page, name, want) in [(&e3, "rho^3*v_3", 4), (einf, "rho^10*v_4", 5)] {
        let x = tryc!(3, T, page.table.parse(name));
        let alive = matches!(page.is_zero_class(&x), Ok(false));
        let tor = page.rho_torsion(&x);
        if !alive || tor != Some(want) {
            problems.push(format!("{name} on E_{}: alive {alive}, torsion {tor:?}", page.index));
        }
    }
    let counts: Vec<usize> = [3, 7, 11, 15].iter().map(|&t| black_dots(einf, t)).collect();
    if counts != [3, 4, 3, 5] {
        problems.push(format!("black dots at t=3,7,11,15: {counts:?}"));
    }
    verdict(3, T, problems, format!("rho^3*v_3 torsion 4, rho^10*v_4 torsion 5, black dots {counts:?}"))
}

fn stems_for(r: &Runs) -> mwstems_core::Result<Vec<StemPresentation>> {
    assemble(r.adams.einf())
}

pub fn closed_forms(cache: &Cache) -> Criterion {
    const T: &str = "assembled stems equal the closed forms";
    let mut problems = Vec::new();
    let mut compared = 0;
    let mut q_modules = Vec::new();
    for (spec, t_max) in all_presets() {
        let r = tryc!(4, T, cache.get(spec, t_max));
        let stems = tryc!(4, T, stems_for(&r));
        for s in &stems {
            let want = if s.t == 0 {
                let mut w = closed_form(spec, 0);
                w.summands = witt_module(spec);
                w
            } else if s.t >= 2 {
                closed_form(spec, s.t)
            } else {
                continue;
            };
            compared += 1;
            if s.orders() != want.orders() {
                problems.push(format!("{spec} t={}: got {}, want {}", s.t, s.module, want.module));
            }
            if spec == Q13 && [3, 4, 7, 11, 15].contains(&s.t) {
                q_modules.push(format!("t{}={}", s.t, s.module));
            }
        }
    }
    verdict(4, T, problems, format!("{compared} stems across 8 presets; Q:13 {}", q_modules.join(" ")))
}

pub fn properties(cache: &Cache) -> Criterion {
    const T: &str = "property suite";
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d77);
    for (spec, t_max) in all_presets() {
        let r = tryc!(5, T, cache.get(spec, t_max));
        for run in [&r.bockstein, &r.adams] {
            problems.extend(invariants::d_squared(run).into_iter().map(|p| format!("{spec}: {p}")));
            problems.extend(invariants::shifts(run).into_iter().map(|p| format!("{spec}: {p}")));
            problems.extend(invariants::monotone(run).into_iter().map(|p| format!("{spec}: {p}")));
        }
    }

    // normal forms on random words over Q:13
    let q = tryc!(5, T, cache.get(Q13, 12));
    let table = &q.bockstein.pages()[0].table;
    let names: Vec<String> = table.generators().iter().map(|g| g.name.clone()).chain(["a_3".into(), "a_7".into()]).collect();
    for _ in 0..1000 {
        let len = rng.gen_range(0..6);
        let word: Vec<&str> = (0..len).map(|_| names[rng.gen_range(0..names.len())].as_str()).collect();
        match invariants::normal_form_is_stable(table, &word) {
            Ok(true) => {}
            other => problems.push(format!("normal form of {word:?}: {other:?}")),
        }
    }

    // Leibniz on 1000 random pairs of classes on pages that carry a differential
    let pages: Vec<(&Page, u32, Vec<_>)> = q
        .pages()
        .filter(|p| p.rules_on(p.r()).next().is_some() && p.index != PageIndex::Infinity)
        .map(|p| (p, p.r(), p.classes()))
        .filter(|(_, _, c)| !c.is_empty())
        .collect();
    let mut applicable = 0;
    for _ in 0..1000 {
        let (page, r, classes) = &pages[rng.gen_range(0..pages.len())];
        let x = &classes[rng.gen_range(0..classes.len())];
        let y = &classes[rng.gen_range(0..classes.len())];
        match invariants::leibniz(page, *r, &x.element, &y.element) {
            Ok(Some(true)) => applicable += 1,
            Ok(None) => {}
            other => problems.push(format!(
                "Leibniz d_{r} on {} * {}: {other:?}",
                page.table.format(&x.element),
                page.table.format(&y.element)
            )),
        }
    }

    // subquotients against enumeration, at most six columns
    for _ in 0..500 {
        let cols = rng.gen_range(1..=6);
        let rows = rng.gen_range(0..=6);
        let mut z = F2Matrix::zeros(0, cols);
        for _ in 0..rows {
            z.push_row(&[rng.gen_range(0..1u64 << cols)]);
        }
        let mut b = F2Matrix::zeros(0, cols);
        for _ in 0..rng.gen_range(0..=rows) {
            let mut v = 0u64;
            for row in z.row_iter() {
                if rng.gen_bool(0.5) {
                    v ^= row[0];
                }
            }
            b.push_row(&[v]);
        }
        match invariants::subquotient_matches_enumeration(&z, &b) {
            Ok(true) => {}
            other => problems.push(format!("subquotient {cols} columns: {other:?}")),
        }
    }
    verdict(5, T, problems, format!("8 presets; 1000 words; {applicable} Leibniz pairs in window; 500 subquotients"))
}

pub fn oracle(cache: &Cache) -> Criterion {
    const T: &str = "dense oracle agrees with the per-bidegree engine";
    let window = Window::with_default_c(12);
    let r = tryc!(6, T, cache.get(Q13, 12));
    let field = tryc!(6, T, FieldData::new(Q13));
    let dense = tryc!(6, T, dense_pages(&field, window));
    let mut problems = Vec::new();
    for d in &dense {
        let run = if d.ss == SsKind::Bockstein { &r.bockstein } else { &r.adams };
        let page = match d.index {
            PageIndex::Finite(k) => run.page(k),
            PageIndex::Infinity => Some(run.einf().clone()),
        };
        let Some(page) = page else {
            problems.push(format!("{} E_{} missing", d.ss.name(), d.index));
            continue;
        };
        let keys: std::collections::BTreeSet<Bidegree> =
            d.dims.keys().copied().chain(page.cells.keys().copied().filter(|k| window.contains(*k))).collect();
        for k in keys {
            let (a, b) = (d.dims.get(&k).copied().unwrap_or(0), page.dim(k));
            if a != b {
                problems.push(format!("{} E_{} at {k:?}: dense {a}, engine {b}", d.ss.name(), d.index));
            }
        }
    }
    verdict(6, T, problems, format!("{} pages compared on Q:13, T=12", dense.len()))
}

pub fn vanishing_line(cache: &Cache) -> Criterion {
    const T: &str = "vanishing line of height 3 in positive stems";
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (spec, t_max) in all_presets() {
        let r = tryc!(7, T, cache.get(spec, t_max));
        let report = tryc!(7, T, vanishing_line_check(r.pages(), 3, (1, 1)));
        if let Some(v) = report.violations.first() {
            problems.push(format!("{spec}: {} E_{} at {:?} height {}", v.ss.name(), v.page, v.bidegree, v.height));
        }
        seen.push(format!("{spec}:{}", report.witnessed));
    }
    verdict(7, T, problems, format!("witnessed heights {}", seen.join(" ")))
}

fn product(page: &Page, x: &str, y: &str) -> mwstems_core::Result<ProductKind> {
    Ok(classify_product(page, &page.table.parse(x)?, &page.table.parse(y)?)?.kind)
}

pub fn ring(cache: &Cache) -> Criterion {
    const T: &str = "ring relations";
    let mut problems = Vec::new();
    let mut fields = vec![FieldSpec::AlgClosed];
    fields.extend(SMALL_FIELDS);
    for spec in fields {
        let r = tryc!(8, T, cache.get(spec, 24));
        let k = tryc!(8, T, product(r.adams.einf(), "v_2", "v_2"));
        if !matches!(k, ProductKind::Forced(_) | ProductKind::Zero) {
            problems.push(format!("{spec}: v_2^2 is {k:?}"));
        }
    }
    let r = tryc!(8, T, cache.get(Q13, 15));
    let e = r.adams.einf();
    let want = e.table.format(&tryc!(8, T, e.table.parse("a_3*P^2 + a_5*P^2")));
    match tryc!(8, T, product(e, "[3]*P", "[5]*P")) {
        ProductKind::Visible(v) if v == want => {}
        k => problems.push(format!("[3]P * [5]P is {k:?}, want {want}")),
    }
    let lambdas = ["v_2", "rho^3*v_3", "P^2*v_2"];
    for (i, a) in lambdas.iter().enumerate() {
        for b in &lambdas[i..] {
            let k = tryc!(8, T, product(e, a, b));
            if matches!(k, ProductKind::Visible(_) | ProductKind::Hidden) {
                problems.push(format!("{a} * {b} is {k:?}"));
            }
        }
    }
    let mut hidden = 0;
    for l in [2, 3, 5, 7, 11, 13] {
        for lambda in ["v_2", "rho^3*v_3"] {
            let k = tryc!(8, T, product(e, &format!("[{l}]"), lambda));
            match k {
                ProductKind::Hidden => hidden += 1,
                ProductKind::Visible(_) => {}
                k => problems.push(format!("[{l}] * {lambda} is {k:?}")),
            }
        }
    }
    verdict(8, T, problems, format!("v_2^2 = 0 on 6 fields; [3]P*[5]P = {want}; {hidden} hidden products nonzero"))
}

pub type Check = fn(&Cache) -> Criterion;

pub const CRITERIA: [Check; 8] = [collapse, ext_generators, adams_tables, closed_forms, properties, oracle, vanishing_line, ring];

pub fn run_suite(name: &str) -> Option<Vec<Criterion>> {
    if !SUITES.contains(&name) {
        return None;
    }
    let cache = Cache::default();
    Some(CRITERIA.iter().map(|c| c(&cache)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_rows_follow_the_table() {
        let rows = expected_ext_rows(15);
        assert_eq!(rows["v_2"], Some(3));
        assert_eq!(rows["P^2*v_2"], Some(3));
        assert_eq!(rows["v_3"], Some(7));
        assert_eq!(rows["v_4"], Some(15));
        assert_eq!(rows["[7]*P^3"], Some(2));
        assert_eq!(rows["[13]"], Some(1));
        assert!(!rows.contains_key("P^4*v_2"));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nonsense").is_none());
    }
}
