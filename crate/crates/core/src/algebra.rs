//! The algebra `k^M_*(F) ⊗ F2[P, v_2, v_3, ...]` in which every page lives.
//!
//! h1 is a unit and is never stored; `P` stands for `v_1^4`. A monomial is
//! an exponent vector over the generator table, whose order is rho, then
//! the field generators, then `P`, `v_2`, `v_3`, ... The derived `Ord` on
//! exponent vectors is the global monomial order.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::fields::{power, KGenKind, KMilnor};
use crate::grading::{Bidegree, Degree, Window};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Field(KGenKind),
    P,
    V(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    pub degree: Degree,
    /// Least `k` with `rho^k g = 0`; `None` when rho acts freely.
    pub rho_torsion: Option<u32>,
    pub square_zero: bool,
    /// Field generators whose product with this one is zero.
    pub vanishes_with: Vec<usize>,
    /// Outside the window the table was built for.
    pub is_virtual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn rho_exponent(&self) -> u32 {
        self.0[0] as u32
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn from_vec(v: Vec<u16>) -> Self {
        Monomial(v.into_boxed_slice())
    }
}

/// An F2-linear combination of normal-form monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.iter().next()
    }

    pub fn add_monomial(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&mut self, other: &Element) {
        for m in &other.terms {
            self.add_monomial(m.clone());
        }
    }

    pub fn sum(mut self, other: &Element) -> Element {
        self.add(other);
        self
    }

    /// Smallest rho exponent among the terms.
    pub fn min_rho(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::rho_exponent).min()
    }
}

impl FromIterator<Monomial> for Element {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut e = Element::zero();
        for m in iter {
            e.add_monomial(m);
        }
        e
    }
}

/// `d_r(gate * base^step * m) = m * target` when `step` divides the exponent
/// of `base` an odd number of times. `gate` must divide exactly; the base
/// follows the Leibniz parity rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffRule {
    pub page: u32,
    pub gate: Monomial,
    pub base: usize,
    pub step: u16,
    pub target: Element,
}

impl DiffRule {
    /// The monomial the rule is stated on.
    pub fn source(&self) -> Monomial {
        let mut v = self.gate.0.to_vec();
        v[self.base] += self.step;
        Monomial::from_vec(v)
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
    k: Arc<KMilnor>,
    nk: usize,
}

impl GeneratorTable {
    /// Field generators, `P`, and every `v_n` with `2^n - 1 <= t_max`.
    pub fn new(k: Arc<KMilnor>, window: Window) -> Self {
        let nk = k.len();
        let unit_torsion = k.rho_torsion(&k.unit());
        let mut gens = Vec::new();
        for (i, g) in k.generators().iter().enumerate() {
            let m = k.generator(i);
            let vanishes_with = (0..nk).filter(|&j| k.mul(&m, &k.generator(j)).is_empty()).collect::<Vec<_>>();
            gens.push(Generator {
                name: g.name.clone(),
                kind: GenKind::Field(g.kind),
                degree: Degree::new(0, 0, g.degree as i32),
                rho_torsion: k.rho_torsion(&m),
                square_zero: vanishes_with.contains(&i),
                vanishes_with,
                is_virtual: false,
            });
        }
        let free = |name: String, kind, degree: Degree| Generator {
            name,
            kind,
            degree,
            rho_torsion: unit_torsion,
            square_zero: false,
            vanishes_with: Vec::new(),
            is_virtual: degree.t > window.t_max || degree.c > window.c_max,
        };
        gens.push(free("P".into(), GenKind::P, Degree::new(4, 4, 4)));
        let mut n = 2u32;
        while (1i64 << n) - 1 <= window.t_max as i64 {
            gens.push(free(format!("v_{n}"), GenKind::V(n), Degree::new(1, (1 << n) - 1, 1)));
            n += 1;
        }
        GeneratorTable { gens, k, nk }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn kmilnor(&self) -> &KMilnor {
        &self.k
    }

    pub fn field_len(&self) -> usize {
        self.nk
    }

    pub fn p_index(&self) -> usize {
        self.nk
    }

    pub fn v_index(&self, n: u32) -> Option<usize> {
        let i = self.nk + n as usize - 1;
        (n >= 2 && i < self.gens.len()).then_some(i)
    }

    pub fn max_v(&self) -> u32 {
        (self.gens.len() - self.nk) as u32
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn one(&self) -> Monomial {
        Monomial::from_vec(vec![0; self.gens.len()])
    }

    pub fn gen_monomial(&self, i: usize) -> Monomial {
        let mut v = vec![0; self.gens.len()];
        v[i] = 1;
        Monomial::from_vec(v)
    }

    /// Monomial from an exponent vector; the field part must be in normal form.
    pub fn monomial(&self, exps: Vec<u16>) -> Monomial {
        assert_eq!(exps.len(), self.gens.len());
        debug_assert!(self.k.is_normal(&exps[..self.nk]));
        Monomial::from_vec(exps)
    }

    /// Exponent vector with no normal-form check, for rule gates.
    pub fn raw_monomial(&self, exps: Vec<u16>) -> Monomial {
        assert_eq!(exps.len(), self.gens.len());
        Monomial::from_vec(exps)
    }

    pub fn field_part<'a>(&self, m: &'a Monomial) -> &'a [u16] {
        &m.0[..self.nk]
    }

    pub fn degree(&self, m: &Monomial) -> Degree {
        m.0.iter()
            .zip(&self.gens)
            .fold(Degree::ZERO, |acc, (&e, g)| {
                let e = e as i32;
                Degree::new(acc.f + e * g.degree.f, acc.t + e * g.degree.t, acc.c + e * g.degree.c)
            })
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        self.degree(m).bidegree()
    }

    /// Degree of the Milnor K-theory part.
    pub fn field_degree(&self, m: &Monomial) -> u32 {
        self.k.degree(self.field_part(m))
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.k.is_normal(self.field_part(m))
    }

    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Element {
        let ext: Vec<u16> = a.0[self.nk..].iter().zip(&b.0[self.nk..]).map(|(x, y)| x + y).collect();
        self.k
            .mul(&a.0[..self.nk], &b.0[..self.nk])
            .into_iter()
            .map(|mut k| {
                k.extend_from_slice(&ext);
                Monomial::from_vec(k)
            })
            .collect()
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for a in &x.terms {
            for b in &y.terms {
                out.add(&self.mul_monomials(a, b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, x: &Element, m: &Monomial) -> Element {
        self.multiply(x, &Element::from_monomial(m.clone()))
    }

    /// Normal form of a formal product of generator names.
    pub fn normalize(&self, word: &[&str]) -> Result<Element> {
        let mut acc = Element::from_monomial(self.one());
        for name in word {
            acc = self.multiply(&acc, &self.factor(name)?);
        }
        Ok(acc)
    }

    fn factor(&self, name: &str) -> Result<Element> {
        if let Some(i) = self.index_of(name) {
            return Ok(Element::from_monomial(self.gen_monomial(i)));
        }
        let k = self.k.lookup(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let mut v = k;
        v.resize(self.gens.len(), 0);
        Ok(Element::from_monomial(Monomial::from_vec(v)))
    }

    /// Parse text such as `rho^3*P^2*v_3 + a_7*P`.
    pub fn parse(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        if text == "0" {
            return Ok(Element::zero());
        }
        let mut out = Element::zero();
        for term in text.split('+') {
            let mut acc = Element::from_monomial(self.one());
            for factor in term.split('*').map(str::trim) {
                if factor == "1" {
                    continue;
                }
                let (name, e) = match factor.rsplit_once('^') {
                    Some((n, e)) => (n, e.parse::<u16>().map_err(|_| Error::BadMonomial(factor.to_string()))?),
                    None => (factor, 1),
                };
                if name.is_empty() {
                    return Err(Error::BadMonomial(text.to_string()));
                }
                let f = self.factor(name)?;
                for _ in 0..e {
                    acc = self.multiply(&acc, &f);
                }
            }
            out.add(&acc);
        }
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = self.k.format(self.field_part(m)).into_iter().collect();
        for i in self.nk..self.gens.len() {
            if m.0[i] > 0 {
                parts.push(power(&self.gens[i].name, m.0[i]));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        x.terms.iter().map(|m| self.format_monomial(m)).collect::<Vec<_>>().join(" + ")
    }

    /// Apply every rule of page `r` to `m`.
    pub fn differentiate_monomial(&self, rules: &[DiffRule], r: u32, m: &Monomial) -> Element {
        let mut out = Element::zero();
        for rule in rules.iter().filter(|rule| rule.page == r) {
            if !rule.gate.divides(m) {
                continue;
            }
            let rest = m.0[rule.base] - rule.gate.0[rule.base];
            if rule.step == 0 || (rest / rule.step).is_multiple_of(2) {
                continue;
            }
            let mut cofactor: Vec<u16> = m.0.iter().zip(rule.gate.0.iter()).map(|(a, b)| a - b).collect();
            cofactor[rule.base] -= rule.step;
            let cofactor = Monomial::from_vec(cofactor);
            debug_assert!(self.is_normal(&cofactor));
            out.add(&self.mul_monomial(&rule.target, &cofactor));
        }
        out
    }

    pub fn differentiate(&self, rules: &[DiffRule], r: u32, x: &Element) -> Element {
        let mut out = Element::zero();
        for m in &x.terms {
            out.add(&self.differentiate_monomial(rules, r, m));
        }
        out
    }

    /// All normal-form monomials inside `window`, grouped by bidegree.
    pub fn enumerate(&self, window: Window) -> alloc::collections::BTreeMap<Bidegree, Vec<Monomial>> {
        let mut ext: Vec<(Vec<u16>, i32, i32)> = vec![(Vec::new(), 0, 0)];
        for g in &self.gens[self.nk..] {
            let mut next = Vec::new();
            for (e, t, c) in ext {
                let mut k = 0u16;
                loop {
                    let (tt, cc) = (t + k as i32 * g.degree.t, c + k as i32 * g.degree.c);
                    if tt > window.t_max || cc > window.c_max {
                        break;
                    }
                    let mut v = e.clone();
                    v.push(k);
                    next.push((v, tt, cc));
                    k += 1;
                }
            }
            ext = next;
        }
        let kbasis = self.k.basis(window.c_max.max(0) as u32);
        let mut out: alloc::collections::BTreeMap<Bidegree, Vec<Monomial>> = Default::default();
        for (e, t, c) in &ext {
            for kb in &kbasis {
                let cc = c + self.k.degree(kb) as i32;
                if cc > window.c_max {
                    continue;
                }
                let mut v = kb.clone();
                v.extend_from_slice(e);
                out.entry(Bidegree::new(*t, cc)).or_default().push(Monomial::from_vec(v));
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{milnor_k, FieldSpec};
    use proptest::prelude::*;

    fn table(spec: FieldSpec, t: i32) -> GeneratorTable {
        GeneratorTable::new(Arc::new(milnor_k(spec).unwrap()), Window::new(t, t + 5))
    }

    fn rule(t: &GeneratorTable, page: u32, gate: &str, base: &str, step: u16, target: &str) -> DiffRule {
        let gate = t.parse(gate).unwrap().leading().unwrap().clone();
        DiffRule { page, gate, base: t.index_of(base).unwrap(), step, target: t.parse(target).unwrap() }
    }

    #[test]
    fn normalize_examples() {
        let t = table(FieldSpec::Rationals(13), 15);
        let n = |w: &[&str]| t.format(&t.normalize(w).unwrap());
        assert_eq!(n(&["rho", "[7]"]), "a_7");
        assert_eq!(n(&["rho", "[5]"]), "0");
        assert_eq!(n(&["[2]", "[2]"]), "0");
        assert_eq!(n(&["[3]", "[5]"]), "a_5 + a_3");
        assert_eq!(n(&["v_2", "rho", "P", "rho"]), "rho^2*P*v_2");
        assert!(matches!(t.normalize(&["w"]), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn multiply_examples() {
        let q = table(FieldSpec::Rationals(13), 15);
        let v2 = q.parse("v_2").unwrap();
        assert_eq!(q.format(&q.multiply(&v2, &v2)), "v_2^2");
        let f5 = table(FieldSpec::FiniteField(5), 15);
        let r3 = f5.normalize(&["rho", "rho", "rho"]).unwrap();
        assert!(r3.is_zero());
        assert!(f5.multiply(&r3, &f5.parse("v_2").unwrap()).is_zero());
        let p = f5.parse("P").unwrap();
        assert_eq!(f5.format(&f5.multiply(&p, &p)), "P^2");
    }

    #[test]
    fn text_round_trip() {
        let t = table(FieldSpec::Rationals(13), 31);
        for s in ["rho^3*P^2*v_3", "[2]", "a_7", "a_5*v_4", "1", "0", "[3]*P + rho^2*v_2^2"] {
            let e = t.parse(s).unwrap();
            assert_eq!(t.parse(&t.format(&e)).unwrap(), e, "{s}");
        }
        assert_eq!(t.format(&t.parse("P^2*rho^3*v_3").unwrap()), "rho^3*P^2*v_3");
        let q = table(FieldSpec::Padic(2), 15);
        assert_eq!(q.format(&q.parse("u*pi").unwrap()), "rho^2");
    }

    #[test]
    fn differentiate_examples() {
        let t = table(FieldSpec::RealLike, 31);
        let rules = [
            rule(&t, 3, "1", "P", 1, "rho^3*v_2"),
            rule(&t, 7, "1", "P", 2, "rho^7*v_3"),
            rule(&t, 2, "1", "v_3", 1, "v_2^2"),
            rule(&t, 2, "1", "v_5", 1, "v_4^2"),
        ];
        let d = |r, s: &str| t.format(&t.differentiate(&rules, r, &t.parse(s).unwrap()));
        assert_eq!(d(3, "P"), "rho^3*v_2");
        assert_eq!(d(3, "P^2"), "0");
        assert_eq!(d(3, "P^3"), "rho^3*P^2*v_2");
        assert_eq!(d(7, "P^2"), "rho^7*v_3");
        assert_eq!(d(7, "P^6"), "rho^7*P^4*v_3");
        assert_eq!(d(7, "P^4"), "0");
        assert_eq!(d(2, "v_3"), "v_2^2");
        assert_eq!(d(2, "v_5"), "v_4^2");
        assert_eq!(d(2, "v_3*v_5"), "v_3*v_4^2 + v_2^2*v_5");
    }

    #[test]
    fn generator_metadata() {
        let t = table(FieldSpec::Rationals(13), 15);
        let g = |n: &str| t.generators()[t.index_of(n).unwrap()].clone();
        assert_eq!(g("[3]").rho_torsion, Some(2));
        assert_eq!(g("[2]").rho_torsion, Some(1));
        assert!(g("[2]").square_zero);
        assert!(!g("[3]").square_zero);
        assert_eq!(g("v_4").degree, Degree::new(1, 15, 1));
        assert!(t.index_of("v_5").is_none());
        assert_eq!(g("P").rho_torsion, None);
        let f5 = table(FieldSpec::FiniteField(5), 2);
        assert!(f5.generators()[f5.p_index()].is_virtual);
    }

    fn q_words() -> impl Strategy<Value = Vec<&'static str>> {
        let names = ["rho", "[2]", "[3]", "[5]", "[7]", "[11]", "[13]", "a_5", "a_13", "P", "v_2", "v_3", "v_4"];
        prop::collection::vec(prop::sample::select(names.to_vec()), 0..8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn normalize_is_idempotent(w in q_words()) {
            let t = table(FieldSpec::Rationals(13), 15);
            let x = t.normalize(&w).unwrap();
            for m in x.terms() {
                prop_assert!(t.is_normal(m));
            }
            let again = t.parse(&t.format(&x)).unwrap();
            prop_assert_eq!(&again, &x);
            let degrees: BTreeSet<Bidegree> = x.terms().map(|m| t.bidegree(m)).collect();
            prop_assert!(degrees.len() <= 1);
        }

        #[test]
        fn multiply_is_commutative_and_associative(a in q_words(), b in q_words(), c in q_words()) {
            let t = table(FieldSpec::Rationals(13), 15);
            let (x, y, z) = (t.normalize(&a).unwrap(), t.normalize(&b).unwrap(), t.normalize(&c).unwrap());
            prop_assert_eq!(t.multiply(&x, &y), t.multiply(&y, &x));
            prop_assert_eq!(t.multiply(&t.multiply(&x, &y), &z), t.multiply(&x, &t.multiply(&y, &z)));
        }

        /// Gate-free, step-one rules are derivations on the whole algebra.
        #[test]
        fn leibniz_for_derivation_rules(a in q_words(), b in q_words()) {
            let t = table(FieldSpec::Rationals(13), 15);
            let rules = [
                rule(&t, 3, "1", "P", 1, "rho^3*v_2"),
                rule(&t, 2, "1", "v_3", 1, "v_2^2"),
                rule(&t, 2, "1", "v_4", 1, "v_3^2"),
            ];
            let (x, y) = (t.normalize(&a).unwrap(), t.normalize(&b).unwrap());
            for r in [2, 3] {
                let d = |e: &Element| t.differentiate(&rules, r, e);
                let lhs = d(&t.multiply(&x, &y));
                let rhs = t.multiply(&d(&x), &y).sum(&t.multiply(&x, &d(&y)));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
