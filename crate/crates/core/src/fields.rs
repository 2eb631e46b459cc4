//! Base-field presets: mod 2 Milnor K-theory, Witt groups and the
//! nonvanishing products that are not visible on E-infinity.
//!
//! A class of `k^M_*` is stored as an exponent vector over the field's
//! generators (index 0 is always rho). Only normal-form vectors are ever
//! produced, and the rho exponent of a normal form is its Bockstein
//! filtration.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

pub type KMono = Vec<u16>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    AlgClosed,
    RealLike,
    FiniteField(u64),
    Padic(u64),
    Rationals(u32),
}

pub const DEFAULT_PRIME_BOUND: u32 = 13;

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let bad = |why| Error::InvalidField(s.to_owned(), why);
        let (head, num) = match s.split_once(':') {
            Some((h, n)) => {
                let n: u64 = n.trim().parse().map_err(|_| bad("expected a number after `:`"))?;
                (h.trim(), Some(n))
            }
            None => (s.trim(), None),
        };
        let spec = match (head, num) {
            ("C", None) => FieldSpec::AlgClosed,
            ("R", None) => FieldSpec::RealLike,
            ("Q", None) => FieldSpec::Rationals(DEFAULT_PRIME_BOUND),
            ("Q", Some(l)) => FieldSpec::Rationals(u32::try_from(l).map_err(|_| bad("prime bound too large"))?),
            ("Fq", Some(q)) => FieldSpec::FiniteField(q),
            ("Qp", Some(p)) => FieldSpec::Padic(p),
            _ => return Err(bad("expected C, R, Fq:<q>, Qp:<p> or Q:<L>")),
        };
        spec.validate().map_err(|e| match e {
            Error::InvalidField(_, why) => bad(why),
            other => other,
        })?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why| Error::InvalidField(self.to_string(), why);
        match *self {
            FieldSpec::FiniteField(q) => match smallest_prime_factor(q) {
                Some(p) if p != 2 && is_power_of(q, p) => Ok(()),
                _ => Err(bad("q must be an odd prime power")),
            },
            FieldSpec::Padic(p) if !is_prime(p) => Err(bad("p must be prime")),
            FieldSpec::Rationals(l) if l < 2 => Err(bad("the prime bound must be at least 2")),
            FieldSpec::Rationals(l) if l > 1000 => Err(bad("the prime bound is limited to 1000")),
            _ => Ok(()),
        }
    }

    /// Fields of 2-cohomological dimension at most two, where both spectral
    /// sequences collapse early.
    pub fn cd_at_most_two(&self) -> bool {
        matches!(self, FieldSpec::AlgClosed | FieldSpec::FiniteField(_) | FieldSpec::Padic(_))
    }

    /// Fields where rho is not nilpotent.
    pub fn has_real_place(&self) -> bool {
        matches!(self, FieldSpec::RealLike | FieldSpec::Rationals(_))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::AlgClosed => f.write_str("C"),
            FieldSpec::RealLike => f.write_str("R"),
            FieldSpec::FiniteField(q) => write!(f, "Fq:{q}"),
            FieldSpec::Padic(p) => write!(f, "Qp:{p}"),
            FieldSpec::Rationals(l) => write!(f, "Q:{l}"),
        }
    }
}

impl core::str::FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FieldSpec::parse(s)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    Some((2..).take_while(|d| d * d <= n).find(|d| n.is_multiple_of(*d)).unwrap_or(n))
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn odd_primes_upto(l: u32) -> Vec<u32> {
    (3..=l).filter(|&x| is_prime(x as u64)).collect()
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Additive Legendre symbol: 0 if `q` is a square mod `l`, 1 otherwise.
pub fn legendre(q: u64, l: u64) -> Result<u8> {
    for x in [q, l] {
        if x == 2 || !is_prime(x) {
            return Err(Error::NotPrime(x));
        }
    }
    if q == l {
        return Err(Error::NotPrime(q));
    }
    // Euler's criterion
    Ok(if mod_pow(q, (l - 1) / 2, l) == 1 { 0 } else { 1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KGenKind {
    Rho,
    /// The symbol `[p]` of a prime (including 2).
    Prime(u32),
    /// `a_l` for a prime `l = 1 mod 4`; a degree-two generator.
    A(u32),
    Pi,
    U,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGenerator {
    pub name: String,
    pub kind: KGenKind,
    pub degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    AlgClosed,
    Real,
    /// `F_q` with `q = 1 mod 4`: `F2[u]/u^2`, rho = 0.
    FqSplit,
    /// `F_q` with `q = 3 mod 4`: `u = rho`, rho^2 = 0.
    FqRho,
    Qp1,
    Qp3,
    Qp2,
    Rationals,
}

/// Colour class of a Milnor K-theory coefficient, as used by the charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientClass {
    Unit,
    /// Degree one, or the part coming from primes `3 mod 4`.
    Blue,
    /// Degree two, or the part coming from 2 and primes `1 mod 4`.
    Red,
    /// The classes `a_l` for `l = 1 mod 4`.
    Green,
}

/// Mod 2 Milnor K-theory of a preset field, in normal form.
#[derive(Debug, Clone)]
pub struct KMilnor {
    gens: Vec<KGenerator>,
    family: Family,
}

impl KMilnor {
    pub fn generators(&self) -> &[KGenerator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn rho_is_zero(&self) -> bool {
        matches!(self.family, Family::AlgClosed | Family::FqSplit | Family::Qp1)
    }

    pub fn rho_is_nilpotent(&self) -> bool {
        !matches!(self.family, Family::Real | Family::Rationals)
    }

    pub fn index_of(&self, kind: KGenKind) -> Option<usize> {
        self.gens.iter().position(|g| g.kind == kind)
    }

    pub fn unit(&self) -> KMono {
        vec![0; self.gens.len()]
    }

    pub fn generator(&self, i: usize) -> KMono {
        let mut m = self.unit();
        m[i] = 1;
        m
    }

    pub fn degree(&self, m: &[u16]) -> u32 {
        m.iter().zip(&self.gens).map(|(&e, g)| e as u32 * g.degree).sum()
    }

    /// Bockstein filtration: the rho exponent of the normal form.
    pub fn filtration(&self, m: &[u16]) -> u32 {
        m[0] as u32
    }

    /// The basis of `k^M_n` for `n <= max_degree`, sorted by degree and
    /// then by exponent vector.
    pub fn basis(&self, max_degree: u32) -> Vec<KMono> {
        let mut seen = BTreeSet::new();
        let mut frontier = vec![self.unit()];
        seen.insert(self.unit());
        while let Some(m) = frontier.pop() {
            for g in 0..self.gens.len() {
                if self.degree(&m) + self.gens[g].degree > max_degree {
                    continue;
                }
                for p in self.mul_gen(&m, g) {
                    if seen.insert(p.clone()) {
                        frontier.push(p);
                    }
                }
            }
        }
        let mut out: Vec<KMono> = seen.into_iter().collect();
        out.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
        out
    }

    pub fn is_normal(&self, m: &[u16]) -> bool {
        let d = self.degree(m);
        match self.family {
            Family::AlgClosed => d == 0,
            Family::Real => true,
            _ => self.basis_in_degree(d).iter().any(|b| b == m),
        }
    }

    fn basis_in_degree(&self, d: u32) -> Vec<KMono> {
        self.basis(d).into_iter().filter(|b| self.degree(b) == d).collect()
    }

    /// Generators of a normal-form monomial listed with multiplicity.
    fn letters(&self, m: &[u16]) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }

    fn mono(&self, entries: &[(usize, u16)]) -> KMono {
        let mut m = self.unit();
        for &(i, e) in entries {
            m[i] += e;
        }
        m
    }

    /// The class `a_l` for an odd prime `l`: `rho [l]` when `l = 3 mod 4`.
    pub fn a_class(&self, l: u32) -> Option<KMono> {
        if l % 4 == 3 {
            let i = self.index_of(KGenKind::Prime(l))?;
            Some(self.mono(&[(0, 1), (i, 1)]))
        } else {
            self.index_of(KGenKind::A(l)).map(|i| self.generator(i))
        }
    }

    /// Product of two degree-one generators.
    fn product_deg1(&self, h: usize, g: usize) -> Vec<KMono> {
        let (kh, kg) = (self.gens[h].kind, self.gens[g].kind);
        use KGenKind::*;
        match self.family {
            Family::Real => vec![self.mono(&[(0, 2)])],
            Family::FqSplit | Family::FqRho | Family::AlgClosed => vec![],
            Family::Qp1 => {
                if h != g {
                    vec![self.mono(&[(h, 1), (g, 1)])]
                } else {
                    vec![]
                }
            }
            Family::Qp3 => match (kh, kg) {
                (Rho, Rho) => vec![],
                (Pi, Pi) | (Rho, Pi) | (Pi, Rho) => vec![self.mono(&[(0, 1), (self.index_of(Pi).unwrap(), 1)])],
                _ => vec![],
            },
            Family::Qp2 => match (kh, kg) {
                (Rho, Rho) | (U, Pi) | (Pi, U) => vec![self.mono(&[(0, 2)])],
                _ => vec![],
            },
            Family::Rationals => {
                let a = |l: u32| self.a_class(l).into_iter().collect::<Vec<_>>();
                match (kh, kg) {
                    (Rho, Rho) => vec![self.mono(&[(0, 2)])],
                    (Rho, Prime(l)) | (Prime(l), Rho) => {
                        if l % 4 == 3 {
                            a(l)
                        } else {
                            vec![]
                        }
                    }
                    (Prime(2), Prime(2)) => vec![],
                    (Prime(2), Prime(q)) | (Prime(q), Prime(2)) => {
                        if ((q as u64 * q as u64 - 1) / 8) % 2 == 1 {
                            a(q)
                        } else {
                            vec![]
                        }
                    }
                    // {l, l} = {l, -1}
                    (Prime(l), Prime(q)) if l == q => {
                        if l % 4 == 3 {
                            a(l)
                        } else {
                            vec![]
                        }
                    }
                    (Prime(l), Prime(q)) => {
                        let mut out = Vec::new();
                        if legendre(q as u64, l as u64).unwrap() == 1 {
                            out.extend(a(l));
                        }
                        if legendre(l as u64, q as u64).unwrap() == 1 {
                            out.extend(a(q));
                        }
                        out
                    }
                    _ => vec![],
                }
            }
        }
    }

    /// Multiply a normal-form monomial by one generator.
    pub fn mul_gen(&self, m: &[u16], g: usize) -> Vec<KMono> {
        if g == 0 && self.rho_is_zero() {
            return vec![];
        }
        let d = self.degree(m);
        if d == 0 {
            return vec![self.generator(g)];
        }
        if d == 1 && self.gens[g].degree == 1 {
            let h = self.letters(m)[0];
            return self.product_deg1(h, g);
        }
        // Degree three and up: only rho^n survives, detected at the real place.
        let pure_rho = m.iter().skip(1).all(|&e| e == 0);
        match self.family {
            Family::Real | Family::Rationals if pure_rho && g == 0 => {
                let mut out = m.to_vec();
                out[0] += 1;
                vec![out]
            }
            _ => vec![],
        }
    }

    /// Product of two normal-form monomials as an F2-sum of normal forms.
    pub fn mul(&self, a: &[u16], b: &[u16]) -> Vec<KMono> {
        let mut acc: BTreeSet<KMono> = BTreeSet::new();
        acc.insert(a.to_vec());
        for g in self.letters(b) {
            let mut next = BTreeSet::new();
            for m in &acc {
                for p in self.mul_gen(m, g) {
                    if !next.remove(&p) {
                        next.insert(p);
                    }
                }
            }
            acc = next;
        }
        acc.into_iter().collect()
    }

    /// Least `k` with `rho^k m = 0`, or `None` if rho acts freely.
    pub fn rho_torsion(&self, m: &[u16]) -> Option<u32> {
        let mut cur = vec![m.to_vec()];
        for k in 0..64 {
            if cur.is_empty() {
                return Some(k);
            }
            cur = cur.iter().flat_map(|x| self.mul_gen(x, 0)).collect();
        }
        None
    }

    /// Chart colour of a coefficient monomial.
    pub fn coefficient_class(&self, m: &[u16]) -> CoefficientClass {
        let non_rho: Vec<usize> = (1..m.len()).filter(|&i| m[i] > 0).collect();
        if self.family == Family::Rationals || self.family == Family::Real {
            return match non_rho.first().map(|&i| self.gens[i].kind) {
                None => CoefficientClass::Unit,
                Some(KGenKind::Prime(l)) if l % 4 == 3 => CoefficientClass::Blue,
                Some(KGenKind::A(_)) => CoefficientClass::Green,
                Some(_) => CoefficientClass::Red,
            };
        }
        match self.degree(m) {
            0 => CoefficientClass::Unit,
            1 => CoefficientClass::Blue,
            _ => CoefficientClass::Red,
        }
    }

    /// Text form of a normal-form monomial; `None` for the unit.
    pub fn format(&self, m: &[u16]) -> Option<String> {
        let mut parts: Vec<String> = Vec::new();
        let mut rho = m[0];
        // rho [l] with l = 3 mod 4 prints as a_l
        let mut alias = None;
        if self.family == Family::Rationals && rho == 1 {
            if let Some(i) = (1..m.len()).find(|&i| m[i] == 1) {
                if let KGenKind::Prime(l) = self.gens[i].kind {
                    if l % 4 == 3 && self.degree(m) == 2 {
                        alias = Some(i);
                        rho = 0;
                    }
                }
            }
        }
        if rho > 0 {
            parts.push(power("rho", rho));
        }
        for (i, &e) in m.iter().enumerate().skip(1) {
            if Some(i) == alias {
                let KGenKind::Prime(l) = self.gens[i].kind else { unreachable!() };
                parts.push(format!("a_{l}"));
            } else if e > 0 {
                parts.push(power(&self.gens[i].name, e));
            }
        }
        (!parts.is_empty()).then(|| parts.join("*"))
    }

    /// Resolve a factor name, including the `a_l` alias, to a monomial.
    pub fn lookup(&self, name: &str) -> Option<KMono> {
        if let Some(i) = self.gens.iter().position(|g| g.name == name) {
            return Some(self.generator(i));
        }
        let l: u32 = name.strip_prefix("a_")?.parse().ok()?;
        if l == 2 {
            return None;
        }
        self.a_class(l)
    }
}

pub(crate) fn power(name: &str, e: u16) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn gen(name: &str, kind: KGenKind, degree: u32) -> KGenerator {
    KGenerator { name: name.to_string(), kind, degree }
}

pub fn milnor_k(spec: FieldSpec) -> Result<KMilnor> {
    spec.validate()?;
    let rho = gen("rho", KGenKind::Rho, 1);
    let (family, mut gens) = match spec {
        FieldSpec::AlgClosed => (Family::AlgClosed, vec![]),
        FieldSpec::RealLike => (Family::Real, vec![]),
        FieldSpec::FiniteField(q) if q % 4 == 1 => (Family::FqSplit, vec![gen("u", KGenKind::U, 1)]),
        FieldSpec::FiniteField(_) => (Family::FqRho, vec![]),
        FieldSpec::Padic(2) => (
            Family::Qp2,
            vec![gen("pi", KGenKind::Pi, 1), gen("u", KGenKind::U, 1)],
        ),
        FieldSpec::Padic(p) if p % 4 == 1 => (
            Family::Qp1,
            vec![gen("pi", KGenKind::Pi, 1), gen("u", KGenKind::U, 1)],
        ),
        FieldSpec::Padic(_) => (Family::Qp3, vec![gen("pi", KGenKind::Pi, 1)]),
        FieldSpec::Rationals(l) => {
            let mut g = vec![gen("[2]", KGenKind::Prime(2), 1)];
            let odd = odd_primes_upto(l);
            g.extend(odd.iter().map(|&p| gen(&format!("[{p}]"), KGenKind::Prime(p), 1)));
            g.extend(
                odd.iter()
                    .filter(|&&p| p % 4 == 1)
                    .map(|&p| gen(&format!("a_{p}"), KGenKind::A(p), 2)),
            );
            (Family::Rationals, g)
        }
    };
    gens.insert(0, rho);
    Ok(KMilnor { gens, family })
}

/// Order of a cyclic 2-group: `2^k`, or the 2-adic integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    /// Reduce modulo `2^n`.
    pub fn truncate(self, n: u32) -> Order {
        match self {
            Order::Finite(k) => Order::Finite(k.min(n)),
            Order::Infinite => Order::Finite(n),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "2^{k}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub order: Order,
    pub gen: String,
}

impl Summand {
    pub fn new(order: Order, gen: impl Into<String>) -> Self {
        Summand { order, gen: gen.into() }
    }
}

/// Witt group `W(F)` completed at 2, as cyclic summands.
pub fn witt_module(spec: FieldSpec) -> Vec<Summand> {
    use Order::*;
    let s = |o: Order, g: &str| Summand::new(o, g);
    match spec {
        FieldSpec::AlgClosed => vec![s(Finite(1), "1")],
        FieldSpec::RealLike => vec![s(Infinite, "1")],
        FieldSpec::FiniteField(q) if q % 4 == 1 => vec![s(Finite(1), "1"), s(Finite(1), "u")],
        FieldSpec::FiniteField(_) => vec![s(Finite(2), "1")],
        FieldSpec::Padic(2) => vec![s(Finite(3), "1"), s(Finite(1), "pi"), s(Finite(1), "u")],
        FieldSpec::Padic(p) if p % 4 == 1 => vec![
            s(Finite(1), "1"),
            s(Finite(1), "pi"),
            s(Finite(1), "u"),
            s(Finite(1), "pi*u"),
        ],
        FieldSpec::Padic(_) => vec![s(Finite(2), "1"), s(Finite(2), "pi")],
        FieldSpec::Rationals(l) => {
            let mut out = vec![s(Infinite, "1"), s(Finite(1), "[2]")];
            for p in odd_primes_upto(l) {
                if p % 4 == 3 {
                    out.push(s(Finite(2), &format!("[{p}]")));
                } else {
                    out.push(s(Finite(1), &format!("[{p}]")));
                    out.push(s(Finite(1), &format!("a_{p}")));
                }
            }
            out
        }
    }
}

/// A product with a `lambda_n` family declared nonzero although it is
/// invisible on E-infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenProduct {
    /// Text form of the Milnor K-theory multiplier, e.g. `[7]` or `a_5`.
    pub multiplier: String,
    /// Smallest `n` of the `lambda_n` family covered.
    pub n_min: u32,
}

#[derive(Debug, Clone)]
pub struct FieldData {
    pub spec: FieldSpec,
    pub kmilnor: Arc<KMilnor>,
    pub witt: Vec<Summand>,
    pub hidden_products: Vec<HiddenProduct>,
}

impl FieldData {
    pub fn new(spec: FieldSpec) -> Result<FieldData> {
        let kmilnor = Arc::new(milnor_k(spec)?);
        let mut hidden_products = Vec::new();
        if let FieldSpec::Rationals(l) = spec {
            hidden_products.push(HiddenProduct { multiplier: "[2]".into(), n_min: 2 });
            for p in odd_primes_upto(l) {
                hidden_products.push(HiddenProduct { multiplier: format!("[{p}]"), n_min: 2 });
                hidden_products.push(HiddenProduct { multiplier: format!("a_{p}"), n_min: 2 });
            }
        }
        Ok(FieldData { spec, kmilnor, witt: witt_module(spec), hidden_products })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(l: u32) -> KMilnor {
        milnor_k(FieldSpec::Rationals(l)).unwrap()
    }

    fn by_name(k: &KMilnor, names: &[&str]) -> KMono {
        let mut m = k.unit();
        for n in names {
            let g = k.lookup(n).unwrap();
            for (a, b) in m.iter_mut().zip(g) {
                *a += b;
            }
        }
        m
    }

    fn text(k: &KMilnor, v: &[KMono]) -> Vec<String> {
        v.iter().map(|m| k.format(m).unwrap_or_else(|| "1".into())).collect()
    }

    #[test]
    fn parse_specs() {
        assert_eq!(FieldSpec::parse("C").unwrap(), FieldSpec::AlgClosed);
        assert_eq!(FieldSpec::parse("Fq:9").unwrap(), FieldSpec::FiniteField(9));
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals(13));
        assert_eq!(FieldSpec::parse("Q:7").unwrap().to_string(), "Q:7");
        for bad in ["Fq:4", "Fq:6", "Qp:9", "Q:1", "X", "Fq:", "Qp"] {
            assert!(FieldSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(7, 5).unwrap(), 1);
        assert_eq!(legendre(5, 3).unwrap(), 1);
        assert_eq!(legendre(7, 3).unwrap(), 0);
        assert!(legendre(4, 3).is_err());
        assert!(legendre(3, 3).is_err());
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        let primes: Vec<u64> = (3..200).filter(|&p| is_prime(p)).collect();
        for &l in &primes {
            let squares: BTreeSet<u64> = (1..l).map(|x| x * x % l).collect();
            for &q in primes.iter().filter(|&&q| q != l) {
                let expect = if squares.contains(&(q % l)) { 0 } else { 1 };
                assert_eq!(legendre(q, l).unwrap(), expect, "({q}/{l})");
            }
        }
    }

    #[test]
    fn table_of_products_over_q() {
        let k = q(13);
        let mul = |a: &[&str], b: &[&str]| text(&k, &k.mul(&by_name(&k, a), &by_name(&k, b)));
        assert_eq!(mul(&["rho"], &["[7]"]), ["a_7"]);
        assert!(mul(&["rho"], &["[5]"]).is_empty());
        assert!(mul(&["[2]"], &["[2]"]).is_empty());
        assert_eq!(mul(&["[3]"], &["[5]"]), ["a_5", "a_3"]);
        assert_eq!(mul(&["[3]"], &["[3]"]), ["a_3"]);
        assert!(mul(&["[5]"], &["[5]"]).is_empty());
        assert_eq!(mul(&["[2]"], &["[3]"]), ["a_3"]);
        assert!(mul(&["[2]"], &["[7]"]).is_empty());
        assert_eq!(mul(&["rho"], &["rho", "rho"]), ["rho^3"]);
        assert!(mul(&["rho"], &["a_5"]).is_empty());
        assert!(mul(&["rho"], &["a_3"]).is_empty());
        assert!(mul(&["a_5"], &["a_13"]).is_empty());
    }

    #[test]
    fn degree_two_basis_over_q13() {
        let k = q(13);
        let d2: Vec<String> = text(&k, &k.basis_in_degree(2));
        let mut sorted = d2.clone();
        sorted.sort();
        assert_eq!(sorted, ["a_11", "a_13", "a_3", "a_5", "a_7", "rho^2"]);
        assert_eq!(text(&k, &k.basis_in_degree(3)), ["rho^3"]);
    }

    #[test]
    fn presets() {
        let f5 = milnor_k(FieldSpec::FiniteField(5)).unwrap();
        assert!(f5.rho_is_zero());
        assert_eq!(text(&f5, &f5.basis(5)), ["1", "u"]);
        let f7 = milnor_k(FieldSpec::FiniteField(7)).unwrap();
        assert_eq!(text(&f7, &f7.basis(5)), ["1", "rho"]);
        let q3 = milnor_k(FieldSpec::Padic(3)).unwrap();
        let pi = q3.lookup("pi").unwrap();
        assert_eq!(text(&q3, &q3.mul(&pi, &pi)), ["rho*pi"]);
        assert_eq!(q3.basis(9).len(), 4);
        let q2 = milnor_k(FieldSpec::Padic(2)).unwrap();
        assert_eq!(q2.basis(9).len(), 5);
        let (u, pi) = (q2.lookup("u").unwrap(), q2.lookup("pi").unwrap());
        assert_eq!(text(&q2, &q2.mul(&u, &pi)), ["rho^2"]);
        assert_eq!(milnor_k(FieldSpec::Padic(5)).unwrap().basis(9).len(), 4);
        assert_eq!(milnor_k(FieldSpec::AlgClosed).unwrap().basis(9).len(), 1);
    }

    #[test]
    fn rho_torsion_over_q() {
        let k = q(13);
        let t = |n: &str| k.rho_torsion(&k.lookup(n).unwrap());
        assert_eq!(t("[3]"), Some(2));
        assert_eq!(t("[5]"), Some(1));
        assert_eq!(t("[2]"), Some(1));
        assert_eq!(t("a_5"), Some(1));
        assert_eq!(t("rho"), None);
    }

    #[test]
    fn filtrations() {
        let k = q(13);
        assert_eq!(k.filtration(&k.lookup("a_7").unwrap()), 1);
        assert_eq!(k.filtration(&k.lookup("a_5").unwrap()), 0);
    }

    #[test]
    fn witt_orders() {
        let total = |s: FieldSpec| {
            witt_module(s)
                .iter()
                .map(|x| match x.order {
                    Order::Finite(k) => k,
                    Order::Infinite => panic!(),
                })
                .sum::<u32>()
        };
        for q in [3, 5, 7, 9, 11, 13, 27] {
            assert_eq!(total(FieldSpec::FiniteField(q)), 2);
        }
        for p in [3, 5, 7, 13] {
            assert_eq!(total(FieldSpec::Padic(p)), 4);
        }
        assert_eq!(total(FieldSpec::Padic(2)), 5);
        let w: Vec<Order> = witt_module(FieldSpec::Rationals(3)).iter().map(|s| s.order).collect();
        assert_eq!(w, [Order::Infinite, Order::Finite(1), Order::Finite(2)]);
    }

    fn all_presets() -> Vec<FieldSpec> {
        vec![
            FieldSpec::AlgClosed,
            FieldSpec::RealLike,
            FieldSpec::FiniteField(5),
            FieldSpec::FiniteField(7),
            FieldSpec::Padic(2),
            FieldSpec::Padic(3),
            FieldSpec::Padic(5),
            FieldSpec::Rationals(13),
        ]
    }

    #[test]
    fn high_degrees_vanish_or_are_rho_powers() {
        for spec in all_presets() {
            let k = milnor_k(spec).unwrap();
            for m in k.basis(6).iter().filter(|m| k.degree(m) >= 3) {
                assert!(spec.has_real_place(), "{spec}: {m:?}");
                assert!(m.iter().skip(1).all(|&e| e == 0));
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(spec in prop::sample::select(all_presets()), i in 0usize..64, j in 0usize..64, l in 0usize..64) {
            let k = milnor_k(spec).unwrap();
            let b = k.basis(5);
            let (x, y, z) = (&b[i % b.len()], &b[j % b.len()], &b[l % b.len()]);
            prop_assert_eq!(k.mul(x, y), k.mul(y, x));
            let sum_mul = |v: Vec<KMono>, w: &KMono| {
                let mut acc = BTreeSet::new();
                for m in v {
                    for p in k.mul(&m, w) {
                        if !acc.remove(&p) { acc.insert(p); }
                    }
                }
                acc
            };
            let left = sum_mul(k.mul(x, y), z);
            let right = sum_mul(k.mul(y, z), x);
            prop_assert_eq!(left, right);
            for p in k.mul(x, y) {
                prop_assert!(k.is_normal(&p));
                prop_assert_eq!(k.degree(&p), k.degree(x) + k.degree(y));
                // filtration only goes up under products
                prop_assert!(k.filtration(&p) >= k.filtration(x) + k.filtration(y));
            }
            for p in k.mul_gen(x, 0) {
                prop_assert_eq!(k.filtration(&p), k.filtration(x) + 1);
            }
        }
    }
}
