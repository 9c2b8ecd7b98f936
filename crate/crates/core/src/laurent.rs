//! Laurent polynomial rings `S = k[s_1^{±1},...,s_n^{±1}]` with
//! `s_i = t_i^{1/m_i}`, the base ring `R = k[t^{±1}]` as the sublattice of
//! exponents divisible by the orders, and the Galois action of
//! `G = Z/m_1 x ... x Z/m_n` by `s_i -> zeta_{m_i}^{j_i} s_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{class_of, Class};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

/// Exponent vector in the `s` variables.
pub type Degree = Vec<i64>;

pub fn add_degrees(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn neg_degree(a: &[i64]) -> Degree {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_degree(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Box `{alpha : |alpha_i| <= d}` in `Z^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub n: usize,
    pub d: i64,
}

impl Window {
    pub fn new(n: usize, d: i64) -> Self {
        Window { n, d }
    }

    pub fn contains(&self, alpha: &[i64]) -> bool {
        alpha.len() == self.n && alpha.iter().all(|x| x.abs() <= self.d)
    }

    /// All degrees in lexicographic order.
    pub fn degrees(&self) -> Vec<Degree> {
        if self.n == 0 {
            return vec![Vec::new()];
        }
        (0..self.n).map(|_| -self.d..=self.d).multi_cartesian_product().collect()
    }

    pub fn enlarge(&self, margin: i64) -> Window {
        Window {
            n: self.n,
            d: self.d + margin,
        }
    }
}

/// Element `(j_1,...,j_n)` of the Galois group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaloisElement(pub Vec<u32>);

impl GaloisElement {
    pub fn identity(n: usize) -> Self {
        GaloisElement(vec![0; n])
    }

    pub fn compose(&self, other: &GaloisElement, orders: &[u32]) -> GaloisElement {
        GaloisElement(
            self.0
                .iter()
                .zip(&other.0)
                .zip(orders)
                .map(|((a, b), m)| (a + b) % m)
                .collect(),
        )
    }

    pub fn inverse(&self, orders: &[u32]) -> GaloisElement {
        GaloisElement(self.0.iter().zip(orders).map(|(a, m)| (m - a) % m).collect())
    }
}

/// The ring `S` together with its orders; `R` is the fixed subring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRing {
    field: CyclotomicField,
    orders: Vec<u32>,
}

impl LaurentRing {
    pub fn new(field: &CyclotomicField, orders: &[u32]) -> Result<Self> {
        for &m in orders {
            if m == 0 {
                return Err(Error::OrderMismatch("orders must be positive".into()));
            }
            if !field.conductor().is_multiple_of(m) {
                return Err(Error::ConductorMismatch(field.conductor(), m));
            }
        }
        Ok(LaurentRing {
            field: field.clone(),
            orders: orders.to_vec(),
        })
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn nvars(&self) -> usize {
        self.orders.len()
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> LaurentPoly {
        self.monomial(&vec![0; self.nvars()], self.field.one())
    }

    pub fn constant(&self, c: Scalar) -> LaurentPoly {
        self.monomial(&vec![0; self.nvars()], c)
    }

    pub fn monomial(&self, alpha: &[i64], c: Scalar) -> LaurentPoly {
        assert_eq!(alpha.len(), self.nvars(), "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha.to_vec(), c);
        }
        LaurentPoly {
            ring: self.clone(),
            terms,
        }
    }

    /// `s^alpha`.
    pub fn s_monomial(&self, alpha: &[i64]) -> LaurentPoly {
        self.monomial(alpha, self.field.one())
    }

    /// `s_i`.
    pub fn s(&self, i: usize) -> LaurentPoly {
        let mut a = vec![0; self.nvars()];
        a[i] = 1;
        self.s_monomial(&a)
    }

    /// `t^gamma = s^{m gamma}`.
    pub fn t_monomial(&self, gamma: &[i64]) -> LaurentPoly {
        self.s_monomial(&self.t_to_s(gamma))
    }

    pub fn t(&self, i: usize) -> LaurentPoly {
        let mut a = vec![0; self.nvars()];
        a[i] = 1;
        self.t_monomial(&a)
    }

    pub fn t_to_s(&self, gamma: &[i64]) -> Degree {
        gamma.iter().zip(&self.orders).map(|(g, &m)| g * m as i64).collect()
    }

    /// `alpha` lies in the exponent lattice of `R`.
    pub fn is_base_degree(&self, alpha: &[i64]) -> bool {
        alpha.iter().zip(&self.orders).all(|(a, &m)| a.rem_euclid(m as i64) == 0)
    }

    pub fn class(&self, alpha: &[i64]) -> Class {
        class_of(alpha, &self.orders)
    }

    pub fn group_order(&self) -> usize {
        self.orders.iter().map(|&m| m as usize).product()
    }

    /// All group elements, lexicographic.
    pub fn galois_group(&self) -> Vec<GaloisElement> {
        if self.orders.is_empty() {
            return vec![GaloisElement(Vec::new())];
        }
        self.orders
            .iter()
            .map(|&m| 0..m)
            .multi_cartesian_product()
            .map(GaloisElement)
            .collect()
    }

    /// Generator `e_i` of the Galois group.
    pub fn generator(&self, i: usize) -> GaloisElement {
        let mut g = vec![0; self.nvars()];
        if self.orders[i] > 1 {
            g[i] = 1;
        }
        GaloisElement(g)
    }

    /// Character `prod_i zeta_{m_i}^{j_i alpha_i}` by which `g` acts on
    /// the degree-`alpha` component.
    pub fn character(&self, g: &GaloisElement, alpha: &[i64]) -> Scalar {
        let mut c = self.field.one();
        for ((&j, &a), &m) in g.0.iter().zip(alpha).zip(&self.orders) {
            let e = (j as i64 * a).rem_euclid(m as i64);
            if e != 0 {
                c = &c * &self.field.root_of_unity(m, e).expect("order divides conductor");
            }
        }
        c
    }

    fn check_shape(&self, other: &LaurentRing) -> Result<()> {
        if self != other {
            Err(Error::ShapeMismatch)
        } else {
            Ok(())
        }
    }

    /// Parses the string form, e.g. `3/2*s1^-2*s2^3 + (1 + z)*s1 - 5`.
    pub fn parse(&self, text: &str) -> Result<LaurentPoly> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut negative = false;
        for (idx, &c) in chars.iter().enumerate() {
            let prev = if idx > 0 { Some(chars[idx - 1]) } else { None };
            match c {
                '(' => {
                    depth += 1;
                    cur.push(c);
                }
                ')' => {
                    depth -= 1;
                    cur.push(c);
                }
                '+' | '-' if depth == 0 && prev != Some('^') => {
                    if !cur.is_empty() {
                        terms.push((negative, std::mem::take(&mut cur)));
                        negative = c == '-';
                    } else if c == '-' {
                        negative = !negative;
                    }
                }
                _ => cur.push(c),
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {text:?}")));
        }
        terms.push((negative, cur));
        let mut out = self.zero();
        for (neg, term) in terms {
            let mut coeff = self.field.one();
            let mut alpha = vec![0i64; self.nvars()];
            for factor in split_top_level(&term, '*') {
                if factor.starts_with('(') && factor.ends_with(')') {
                    coeff = &coeff * &self.field.parse(&factor[1..factor.len() - 1])?;
                } else if let Some(rest) = factor.strip_prefix('s') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e.parse::<i64>().map_err(|_| Error::Parse(factor.clone()))?),
                        None => (rest, 1),
                    };
                    let i: usize = var.parse().map_err(|_| Error::Parse(factor.clone()))?;
                    if i == 0 || i > self.nvars() {
                        return Err(Error::Parse(format!("variable s{i} out of range")));
                    }
                    alpha[i - 1] += exp;
                } else {
                    coeff = &coeff * &self.field.parse(&factor)?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out = &out + &self.monomial(&alpha, coeff);
        }
        Ok(out)
    }

    pub fn from_json(&self, value: &PolyJson) -> Result<LaurentPoly> {
        let mut out = self.zero();
        for t in &value.terms {
            if t.exp.len() != self.nvars() {
                return Err(Error::ShapeMismatch);
            }
            out = &out + &self.monomial(&t.exp, self.field.parse(&t.c)?);
        }
        Ok(out)
    }

    /// Random polynomial with up to `max_terms` terms, exponents in
    /// `[-max_deg, max_deg]` and small rational coefficients.
    pub fn random<G: Rng>(&self, rng: &mut G, max_terms: usize, max_deg: i64) -> LaurentPoly {
        let nterms = rng.gen_range(1..=max_terms.max(1));
        let mut out = self.zero();
        for _ in 0..nterms {
            let alpha: Degree = (0..self.nvars()).map(|_| rng.gen_range(-max_deg..=max_deg)).collect();
            let num = rng.gen_range(-5i64..=5);
            let den = rng.gen_range(1i64..=3);
            let mut c = self.field.from_ratio(num, den);
            if self.field.degree() > 1 && rng.gen_bool(0.5) {
                c = &c + &self.field.zeta_pow(rng.gen_range(1..self.field.conductor() as i64));
            }
            out = &out + &self.monomial(&alpha, c);
        }
        out
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

/// JSON term-list form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub c: String,
}

/// Element of `S`; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ring: LaurentRing,
    terms: BTreeMap<Degree, Scalar>,
}

impl LaurentPoly {
    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Degree, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &[i64]) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    /// Single term `c s^alpha`, if monomial.
    pub fn as_monomial(&self) -> Option<(&Degree, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn insert_add(&mut self, alpha: Degree, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(alpha.clone()).or_insert_with(|| self.ring.field.zero());
        *e += c;
        if e.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.ring.check_shape(&other.ring)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.insert_add(a.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.ring.check_shape(&other.ring)?;
        let mut out = self.ring.zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.insert_add(add_degrees(a, b), &x.try_mul(y)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        let mut out = self.ring.zero();
        for (a, x) in &self.terms {
            out.insert_add(a.clone(), &(x * c));
        }
        out
    }

    pub fn galois_act(&self, g: &GaloisElement) -> Result<LaurentPoly> {
        if g.0.len() != self.ring.nvars() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = self.ring.zero();
        for (a, x) in &self.terms {
            out.insert_add(a.clone(), &(x * &self.ring.character(g, a)));
        }
        Ok(out)
    }

    pub fn in_base_ring(&self) -> bool {
        self.terms.keys().all(|a| self.ring.is_base_degree(a))
    }

    /// `(1/|G|) sum_g g.p`, the projection onto `R`.
    pub fn average(&self) -> LaurentPoly {
        let group = self.ring.galois_group();
        let mut acc = self.ring.zero();
        for g in &group {
            acc = &acc + &self.galois_act(g).expect("shape");
        }
        acc.scale(&self.ring.field.from_ratio(1, group.len() as i64))
    }

    /// Decomposition into `G`-character-homogeneous parts, keyed by class.
    pub fn character_parts(&self) -> BTreeMap<Class, LaurentPoly> {
        let mut out: BTreeMap<Class, LaurentPoly> = BTreeMap::new();
        for (a, x) in &self.terms {
            out.entry(self.ring.class(a))
                .or_insert_with(|| self.ring.zero())
                .insert_add(a.clone(), x);
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    exp: a.clone(),
                    c: c.to_string(),
                })
                .collect(),
        }
    }
}

pub(crate) fn scalar_factor(c: &Scalar) -> String {
    let text = c.to_string();
    let simple = c.as_rational().is_some() || c.coeffs().iter().filter(|q| !num::Zero::is_zero(*q)).count() == 1;
    if simple {
        text
    } else {
        format!("({text})")
    }
}

pub(crate) fn monomial_text(prefix: char, alpha: &[i64]) -> Vec<String> {
    alpha
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{prefix}{}", i + 1)
            } else {
                format!("{prefix}{}^{e}", i + 1)
            }
        })
        .collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            let mono = monomial_text('s', a);
            let negative = c.as_rational().is_some_and(|q| q < num::Zero::zero());
            let mag = if negative { -c } else { c.clone() };
            if k > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            } else if negative {
                write!(f, "-")?;
            }
            if mono.is_empty() {
                write!(f, "{}", scalar_factor(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", scalar_factor(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("ring shape mismatch")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("ring shape mismatch")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("ring shape mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(orders: &[u32]) -> LaurentRing {
        let m = orders.iter().fold(1u64, |a, &b| crate::scalars::lcm(a, b as u64)) as u32;
        LaurentRing::new(&CyclotomicField::new(m).unwrap(), orders).unwrap()
    }

    #[test]
    fn ring_examples() {
        let r = ring(&[1]);
        let s = r.s(0);
        let sinv = r.s_monomial(&[-1]);
        assert_eq!(&s * &sinv, r.one());
        let one = r.one();
        assert_eq!(&(&s + &one) * &(&s - &one), &r.s_monomial(&[2]) - &one);
        let r2 = ring(&[2, 3]);
        assert_eq!(&r2.t(0) * &r2.t(1), r2.s_monomial(&[2, 3]));
    }

    #[test]
    fn galois_examples() {
        let r = ring(&[2]);
        let g = GaloisElement(vec![1]);
        assert_eq!(r.s(0).galois_act(&g).unwrap(), -&r.s(0));
        assert_eq!(r.t(0).galois_act(&g).unwrap(), r.t(0));
        let p = &r.s(0) + &r.s_monomial(&[2]);
        assert_eq!(p.galois_act(&g).unwrap(), &r.s_monomial(&[2]) - &r.s(0));
        assert!(r.s(0).galois_act(&GaloisElement(vec![0, 1])).is_err());
    }

    #[test]
    fn base_ring_membership() {
        let r = ring(&[2]);
        assert!(r.s_monomial(&[2]).in_base_ring());
        assert!(!r.s(0).in_base_ring());
        let r2 = ring(&[2, 3]);
        assert!(r2.s_monomial(&[2, -3]).in_base_ring());
    }

    #[test]
    fn text_and_json_round_trip() {
        let r = ring(&[2, 3]);
        let p = r.parse("3/2*s1^-2*s2^3 + (1 + z)*s1 - 5 + z^2*s2").unwrap();
        assert_eq!(p.terms().len(), 4);
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
        let json = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolyJson = serde_json::from_str(&json).unwrap();
        assert_eq!(r.from_json(&back).unwrap(), p);
        assert!(r.parse("s3").is_err());
        assert!(r.parse("").is_err());
    }

    #[test]
    fn window_degrees() {
        let w = Window::new(2, 1);
        assert_eq!(w.degrees().len(), 9);
        assert!(w.contains(&[1, -1]));
        assert!(!w.contains(&[2, 0]));
        assert_eq!(Window::new(1, 2).degrees(), vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
    }
}
