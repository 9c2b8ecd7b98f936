//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(M)-1)` reduced
//! modulo the `M`-th cyclotomic polynomial. Trailing zero coordinates are
//! trimmed, so zero is the empty vector and rationals have length one; the
//! representation is canonical and equality is coefficient-wise.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug)]
struct FieldData {
    conductor: u32,
    /// Coefficients of the monic cyclotomic polynomial, lowest degree first.
    modulus: Vec<BigRational>,
}

/// Handle to `Q(zeta_M)`. Cheap to clone; two handles are equal iff their
/// conductors agree.
#[derive(Clone)]
pub struct CyclotomicField(Arc<FieldData>);

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.conductor == other.0.conductor
    }
}
impl Eq for CyclotomicField {}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.conductor)
    }
}

/// Integer coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided by all Phi_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &den);
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidConductor(0));
        }
        let modulus = cyclotomic_polynomial(conductor)
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Ok(CyclotomicField(Arc::new(FieldData { conductor, modulus })))
    }

    /// The rationals, `Q(zeta_1)`.
    pub fn rationals() -> Self {
        Self::new(1).expect("conductor 1 is valid")
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    /// `phi(M)`, the degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn zero(&self) -> CyclotomicScalar {
        CyclotomicScalar {
            field: self.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(&self) -> CyclotomicScalar {
        self.from_rational(Rational::one())
    }

    pub fn from_int(&self, n: i64) -> CyclotomicScalar {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> CyclotomicScalar {
        self.from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(&self, q: Rational) -> CyclotomicScalar {
        self.from_coeffs(vec![q])
    }

    /// Builds an element from arbitrary power-basis coefficients, reducing
    /// modulo the cyclotomic polynomial.
    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> CyclotomicScalar {
        let mut s = CyclotomicScalar {
            field: self.clone(),
            coeffs,
        };
        s.normalize();
        s
    }

    /// `zeta_M^j`, for any integer `j`.
    pub fn zeta_pow(&self, j: i64) -> CyclotomicScalar {
        let m = self.conductor() as i64;
        let e = j.rem_euclid(m) as usize;
        let mut coeffs = vec![Rational::zero(); e + 1];
        coeffs[e] = Rational::one();
        self.from_coeffs(coeffs)
    }

    /// `zeta_order^j` where `order` divides the conductor.
    pub fn root_of_unity(&self, order: u32, j: i64) -> Result<CyclotomicScalar> {
        if order == 0 {
            return Err(Error::InvalidConductor(0));
        }
        let m = self.conductor();
        if !m.is_multiple_of(order) {
            return Err(Error::ConductorMismatch(order, m));
        }
        Ok(self.zeta_pow(j * (m / order) as i64))
    }

    /// Parses the text form `q0 + q1*z + q2*z^2 - ...`.
    pub fn parse(&self, text: &str) -> Result<CyclotomicScalar> {
        parse_scalar(self, text)
    }
}

/// `zeta_m^j` as an element of `Q(zeta_m)`.
pub fn root_of_unity(m: i64, j: i64) -> Result<CyclotomicScalar> {
    if m <= 0 {
        return Err(Error::InvalidConductor(m));
    }
    let field = CyclotomicField::new(m as u32)?;
    Ok(field.zeta_pow(j))
}

/// Element of `Q(zeta_M)`.
#[derive(Clone)]
pub struct CyclotomicScalar {
    field: CyclotomicField,
    coeffs: Vec<Rational>,
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for CyclotomicScalar {}

impl CyclotomicScalar {
    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    /// Power-basis coordinates, padded to length `phi(M)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        let mut c = self.coeffs.clone();
        c.resize(self.field.degree(), Rational::zero());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        let modulus = &self.field.0.modulus;
        let deg = modulus.len() - 1;
        if self.coeffs.len() > deg {
            for k in (deg..self.coeffs.len()).rev() {
                let c = std::mem::take(&mut self.coeffs[k]);
                if c.is_zero() {
                    continue;
                }
                for (i, mi) in modulus[..deg].iter().enumerate() {
                    if !mi.is_zero() {
                        self.coeffs[k - deg + i] -= &c * mi;
                    }
                }
            }
            self.coeffs.truncate(deg);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(self.conductor(), other.conductor()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let c = match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        let mut s = CyclotomicScalar {
            field: self.field.clone(),
            coeffs,
        };
        s.normalize();
        Ok(s)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut s = CyclotomicScalar {
            field: self.field.clone(),
            coeffs,
        };
        s.normalize();
        Ok(s)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let inv = other.inverse()?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse via extended Euclid against the cyclotomic
    /// polynomial.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(self.field.from_rational(self.coeffs[0].recip()));
        }
        // Invariant: s_i * a == r_i (mod modulus).
        let modulus = self.field.0.modulus.clone();
        let (mut r0, mut r1) = (modulus, self.coeffs.clone());
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            debug_assert!(!r1.is_empty(), "cyclotomic polynomial is irreducible");
        }
        let c = r1[0].recip();
        let coeffs = s1.into_iter().map(|x| x * &c).collect();
        Ok(self.field.from_coeffs(coeffs))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the complex embedding `zeta_M -> exp(2 pi i / M)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.conductor() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = rational_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += v * theta.cos();
            im += v * theta.sin();
        }
        (re, im)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn poly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    poly_trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = poly_trim(b.to_vec());
    let mut rem = poly_trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] -= &c * bi;
        }
        q[shift] = c;
        rem = poly_trim(rem);
        if rem.is_empty() {
            break;
        }
    }
    (poly_trim(q), rem)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<'a> $tr<&'a CyclotomicScalar> for &'a CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: &'a CyclotomicScalar) -> CyclotomicScalar {
                self.$inner(rhs).expect("scalar operation")
            }
        }
        impl $tr<CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
                (&self).$inner(&rhs).expect("scalar operation")
            }
        }
        impl<'a> $tr<&'a CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: &'a CyclotomicScalar) -> CyclotomicScalar {
                (&self).$inner(rhs).expect("scalar operation")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl AddAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn add_assign(&mut self, rhs: &CyclotomicScalar) {
        *self = self.try_add(rhs).expect("scalar operation");
    }
}

impl SubAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn sub_assign(&mut self, rhs: &CyclotomicScalar) {
        *self = self.try_sub(rhs).expect("scalar operation");
    }
}

impl MulAssign<&CyclotomicScalar> for CyclotomicScalar {
    fn mul_assign(&mut self, rhs: &CyclotomicScalar) {
        *self = self.try_mul(rhs).expect("scalar operation");
    }
}

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(mut self) -> CyclotomicScalar {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

fn parse_scalar(field: &CyclotomicField, text: &str) -> Result<CyclotomicScalar> {
    let bad = || Error::Parse(format!("invalid scalar {text:?}"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let chars: Vec<char> = compact.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        let prev = if i == 0 { None } else { Some(chars[i - 1]) };
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if i > 0 {
                if current.is_empty() {
                    return Err(bad());
                }
                terms.push((negative, std::mem::take(&mut current)));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(bad());
    }
    terms.push((negative, current));

    let mut coeffs: Vec<Rational> = Vec::new();
    for (neg, term) in terms {
        let (coef, power) = if let Some(pos) = term.find('z') {
            let (c, z) = term.split_at(pos);
            let c = c.strip_suffix('*').unwrap_or(c);
            let coef = if c.is_empty() {
                Rational::one()
            } else {
                parse_rational(c).ok_or_else(bad)?
            };
            let power: usize = match z.strip_prefix("z^") {
                Some(p) => p.parse().map_err(|_| bad())?,
                None if z == "z" => 1,
                None => return Err(bad()),
            };
            (coef, power)
        } else {
            (parse_rational(&term).ok_or_else(bad)?, 0)
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        if neg {
            coeffs[power] -= coef;
        } else {
            coeffs[power] += coef;
        }
    }
    Ok(field.from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn gaussian_product() {
        let k = CyclotomicField::new(4).unwrap();
        let z = k.zeta_pow(1);
        let one = k.one();
        assert_eq!(&(&one + &z) * &(&one - &z), k.from_int(2));
    }

    #[test]
    fn zeta3_minimal_polynomial() {
        let k = CyclotomicField::new(3).unwrap();
        let z = k.zeta_pow(1);
        assert!((&(&z * &z) + &z + k.one()).is_zero());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(2, 1).unwrap().as_rational(), Some(Rational::from_integer((-1).into())));
        let z3 = root_of_unity(3, 1).unwrap();
        assert!(z3.pow(3).is_one());
        let z4sq = root_of_unity(4, 2).unwrap();
        assert_eq!(z4sq.as_rational(), Some(Rational::from_integer((-1).into())));
        assert!(root_of_unity(0, 1).is_err());
        assert!(root_of_unity(-3, 1).is_err());
    }

    #[test]
    fn exact_order() {
        for m in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let k = CyclotomicField::new(m).unwrap();
            let z = k.zeta_pow(1);
            assert!(z.pow(m as u64).is_one());
            for j in 1..m {
                assert!(!z.pow(j as u64).is_one(), "m={m} j={j}");
            }
        }
        let k = CyclotomicField::new(12).unwrap();
        // zeta_12^8 has order 12/gcd(12,8) = 3
        let w = k.zeta_pow(8);
        assert!(w.pow(3).is_one());
        assert!(!w.pow(1).is_one());
    }

    #[test]
    fn division_and_mismatch() {
        let k = CyclotomicField::new(5).unwrap();
        let a = k.parse("1 + 2*z - z^3").unwrap();
        assert!((&a * &a.inverse().unwrap()).is_one());
        assert!(matches!(a.try_div(&k.zero()), Err(Error::DivisionByZero)));
        let other = CyclotomicField::new(3).unwrap().one();
        assert!(matches!(a.try_add(&other), Err(Error::ConductorMismatch(5, 3))));
    }

    #[test]
    fn text_round_trip() {
        let k = CyclotomicField::new(12).unwrap();
        for s in ["0", "1", "-3/2", "z", "-z^3", "1/2 - 3*z^2 + 7/5*z^3", "-1 + z"] {
            let a = k.parse(s).unwrap();
            assert_eq!(a.to_string(), s);
            assert_eq!(k.parse(&a.to_string()).unwrap(), a);
        }
        // z^4 = z^2 - 1 in Q(zeta_12)
        assert_eq!(k.parse("z^4").unwrap(), k.parse("-1 + z^2").unwrap());
        assert!(k.parse("1 +").is_err());
        assert!(k.parse("1/0").is_err());
        assert!(k.parse("").is_err());
    }
}
