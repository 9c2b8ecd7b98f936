//! Kähler differentials `Omega_S`, the universal derivation `d`, and the
//! quotient `Omega_S/dS` in canonical graded form.
//!
//! Grading: `deg(s^beta ds_i) = beta + e_i`, so `d` preserves degree and the
//! Galois group acts on each graded piece by a single character. A class of
//! degree `alpha` is stored as the coefficient vector of the forms
//! `s^{alpha - e_i} ds_i`; for `alpha != 0` the relation
//! `d(s^alpha) = sum_i alpha_i s^{alpha - e_i} ds_i` is used to eliminate the
//! pivot coordinate (first `i` with `alpha_i != 0`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{add_degrees, is_zero_degree, monomial_text, scalar_factor, Degree, GaloisElement, LaurentPoly, LaurentRing, Window};
use crate::linalg::{Matrix, SparseEchelon};
use crate::scalars::CyclotomicScalar as Scalar;

/// `sum_i f_i ds_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    ring: LaurentRing,
    coeffs: Vec<LaurentPoly>,
}

impl DifferentialForm {
    pub fn zero(ring: &LaurentRing) -> Self {
        DifferentialForm {
            ring: ring.clone(),
            coeffs: vec![ring.zero(); ring.nvars()],
        }
    }

    pub fn new(ring: &LaurentRing, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != ring.nvars() || coeffs.iter().any(|c| c.ring() != ring) {
            return Err(Error::ShapeMismatch);
        }
        Ok(DifferentialForm {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// `f ds_i`.
    pub fn basic(f: &LaurentPoly, i: usize) -> Self {
        let mut w = DifferentialForm::zero(f.ring());
        w.coeffs[i] = f.clone();
        w
    }

    /// `t^gamma dt_i = m_i s^{m gamma + (m_i - 1) e_i} ds_i`.
    pub fn t_form(ring: &LaurentRing, gamma: &[i64], i: usize) -> Self {
        let m = ring.orders()[i] as i64;
        let mut beta = ring.t_to_s(gamma);
        beta[i] += m - 1;
        DifferentialForm::basic(&ring.monomial(&beta, ring.field().from_int(m)), i)
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn try_add(&self, other: &DifferentialForm) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::ShapeMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(DifferentialForm {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// `p * omega`.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| p.try_mul(c)).collect::<Result<_>>()?;
        Ok(DifferentialForm {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DifferentialForm {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `g.(f ds_i) = (g.f) d(g.s_i)`.
    pub fn galois_act(&self, g: &GaloisElement) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, f) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; self.ring.nvars()];
            e[i] = 1;
            let chi = self.ring.character(g, &e);
            coeffs.push(f.galois_act(g)?.scale(&chi));
        }
        Ok(DifferentialForm {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Universal derivation: `d(s^alpha) = sum_i alpha_i s^{alpha - e_i} ds_i`.
pub fn differential(p: &LaurentPoly) -> DifferentialForm {
    let ring = p.ring();
    let mut w = DifferentialForm::zero(ring);
    for (alpha, c) in p.terms() {
        for (i, &a) in alpha.iter().enumerate() {
            if a != 0 {
                let mut beta = alpha.clone();
                beta[i] -= 1;
                let t = ring.monomial(&beta, c * &ring.field().from_int(a));
                w.coeffs[i] = &w.coeffs[i] + &t;
            }
        }
    }
    w
}

/// Pivot coordinate of a degree (`None` for degree zero).
pub fn pivot(alpha: &[i64]) -> Option<usize> {
    alpha.iter().position(|&a| a != 0)
}

/// Dimension of `(Omega_S/dS)_alpha`.
pub fn graded_dim(alpha: &[i64]) -> usize {
    alpha.len() - usize::from(!is_zero_degree(alpha))
}

/// Coordinates surviving in degree `alpha`.
pub fn surviving_coords(alpha: &[i64]) -> Vec<usize> {
    let p = pivot(alpha);
    (0..alpha.len()).filter(|&i| Some(i) != p).collect()
}

/// Element of `Omega_S/dS` in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct CentralClass {
    ring: LaurentRing,
    comps: BTreeMap<Degree, Vec<Scalar>>,
}

/// Serialized graded component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub degree: Vec<i64>,
    pub coords: Vec<String>,
    pub pivot: Option<usize>,
}

impl CentralClass {
    pub fn zero(ring: &LaurentRing) -> Self {
        CentralClass {
            ring: ring.clone(),
            comps: BTreeMap::new(),
        }
    }

    /// Basis class: coordinate `coord` in degree `alpha` (must survive).
    pub fn basis(ring: &LaurentRing, alpha: &[i64], coord: usize) -> Self {
        let mut c = CentralClass::zero(ring);
        let mut v = vec![ring.field().zero(); ring.nvars()];
        v[coord] = ring.field().one();
        c.add_raw(alpha, &v);
        c
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn components(&self) -> &BTreeMap<Degree, Vec<Scalar>> {
        &self.comps
    }

    pub fn component(&self, alpha: &[i64]) -> Vec<Scalar> {
        self.comps
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| vec![self.ring.field().zero(); self.ring.nvars()])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Adds a raw (unreduced) coefficient vector in degree `alpha`.
    pub fn add_raw(&mut self, alpha: &[i64], v: &[Scalar]) {
        let mut v = v.to_vec();
        if let Some(p) = pivot(alpha) {
            if !v[p].is_zero() {
                let f = &v[p] / &self.ring.field().from_int(alpha[p]);
                for (x, &a) in v.iter_mut().zip(alpha) {
                    if a != 0 {
                        *x -= &(&f * &self.ring.field().from_int(a));
                    }
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            return;
        }
        let n = self.ring.nvars();
        let field = self.ring.field().clone();
        let e = self.comps.entry(alpha.to_vec()).or_insert_with(|| vec![field.zero(); n]);
        for (x, y) in e.iter_mut().zip(&v) {
            *x += y;
        }
        if e.iter().all(|x| x.is_zero()) {
            self.comps.remove(alpha);
        }
    }

    pub fn try_add(&self, other: &CentralClass) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::ShapeMismatch);
        }
        let mut out = self.clone();
        for (a, v) in &other.comps {
            out.add_raw(a, v);
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &CentralClass) {
        for (a, v) in &other.comps {
            self.add_raw(a, v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = CentralClass::zero(&self.ring);
        if c.is_zero() {
            return out;
        }
        for (a, v) in &self.comps {
            out.comps.insert(a.clone(), v.iter().map(|x| x * c).collect());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-self.ring.field().one())
    }

    /// Acts on the degree-`alpha` component by the character of `alpha`.
    pub fn galois_act(&self, g: &GaloisElement) -> Result<Self> {
        if g.0.len() != self.ring.nvars() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = CentralClass::zero(&self.ring);
        for (a, v) in &self.comps {
            let chi = self.ring.character(g, a);
            out.comps.insert(a.clone(), v.iter().map(|x| x * &chi).collect());
        }
        Ok(out)
    }

    /// All degrees lie in the exponent lattice of `R`.
    pub fn in_base(&self) -> bool {
        self.comps.keys().all(|a| self.ring.is_base_degree(a))
    }

    pub fn to_records(&self) -> Vec<ClassRecord> {
        self.comps
            .iter()
            .map(|(a, v)| ClassRecord {
                degree: a.clone(),
                coords: v.iter().map(|x| x.to_string()).collect(),
                pivot: pivot(a),
            })
            .collect()
    }

    pub fn from_records(ring: &LaurentRing, records: &[ClassRecord]) -> Result<Self> {
        let mut out = CentralClass::zero(ring);
        for r in records {
            if r.degree.len() != ring.nvars() || r.coords.len() != ring.nvars() {
                return Err(Error::ShapeMismatch);
            }
            let v: Vec<Scalar> = r.coords.iter().map(|c| ring.field().parse(c)).collect::<Result<_>>()?;
            out.add_raw(&r.degree, &v);
        }
        Ok(out)
    }
}

impl fmt::Display for CentralClass {
    /// Human-readable form `c * s1^a ds_i (mod d)` using the representative
    /// forms `s^{alpha - e_i} ds_i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, v) in &self.comps {
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut beta = a.clone();
                beta[i] -= 1;
                let mono = monomial_text('s', &beta);
                let mono = if mono.is_empty() { String::new() } else { format!("{} ", mono.join("*")) };
                parts.push(format!("{} * {}ds{}", scalar_factor(c), mono, i + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0 (mod d)")
        } else {
            write!(f, "{} (mod d)", parts.join(" + "))
        }
    }
}

impl fmt::Debug for CentralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Quotient map `Omega_S -> Omega_S/dS`.
pub fn reduce(w: &DifferentialForm) -> CentralClass {
    let ring = &w.ring;
    let n = ring.nvars();
    let mut out = CentralClass::zero(ring);
    for (i, f) in w.coeffs.iter().enumerate() {
        for (beta, c) in f.terms() {
            let mut alpha = beta.clone();
            alpha[i] += 1;
            let mut v = vec![ring.field().zero(); n];
            v[i] = c.clone();
            out.add_raw(&alpha, &v);
        }
    }
    out
}

/// `reduce(a db)` computed directly: `s^alpha d(s^beta)` contributes the raw
/// vector `beta` in degree `alpha + beta`.
pub fn reduce_pair(a: &LaurentPoly, b: &LaurentPoly) -> CentralClass {
    let ring = a.ring();
    let mut out = CentralClass::zero(ring);
    for (alpha, x) in a.terms() {
        for (beta, y) in b.terms() {
            if is_zero_degree(beta) {
                continue;
            }
            let xy = x * y;
            let v: Vec<Scalar> = beta.iter().map(|&e| &xy * &ring.field().from_int(e)).collect();
            out.add_raw(&add_degrees(alpha, beta), &v);
        }
    }
    out
}

/// Monomial version: class of `s^alpha d(s^beta)` as a raw pair.
pub fn reduce_monomials(ring: &LaurentRing, alpha: &[i64], beta: &[i64]) -> CentralClass {
    reduce_pair(&ring.s_monomial(alpha), &ring.s_monomial(beta))
}

/// Basis of `(Omega_S/dS)^G` in the window: the surviving basis classes in
/// every degree of the `R` lattice.
pub fn invariant_classes(ring: &LaurentRing, window: &Window) -> Vec<CentralClass> {
    let mut out = Vec::new();
    for alpha in window.degrees() {
        if !ring.is_base_degree(&alpha) {
            continue;
        }
        for i in surviving_coords(&alpha) {
            out.push(CentralClass::basis(ring, &alpha, i));
        }
    }
    out
}

/// Per-degree comparison of the `G`-fixed subspace with the image of
/// `Omega_R/dR`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSpaceDegree {
    pub degree: Vec<i64>,
    pub fixed_dim: usize,
    pub image_dim: usize,
    pub joint_rank: usize,
    pub filter_dim: usize,
    pub ok: bool,
}

/// Checks, degree by degree, that the `G`-fixed part of `Omega_S/dS` equals
/// the reduce-image of `Omega_R/dR` (both inclusions by rank) and agrees
/// with the divisibility filter of [`invariant_classes`].
pub fn fixed_space_identification(ring: &LaurentRing, window: &Window) -> Result<Vec<FixedSpaceDegree>> {
    let field = ring.field();
    let n = ring.nvars();
    let group = ring.galois_group();
    let mut out = Vec::new();
    for alpha in window.degrees() {
        let coords = surviving_coords(&alpha);
        let k = coords.len();
        // fixed space: common kernel of (g - 1) on the surviving coordinates
        let basis_classes: Vec<CentralClass> = coords.iter().map(|&i| CentralClass::basis(ring, &alpha, i)).collect();
        let mut stacked = Matrix::zeros(field, group.len() * k, k);
        for (gi, g) in group.iter().enumerate() {
            for (col, b) in basis_classes.iter().enumerate() {
                let v = b.galois_act(g)?.try_add(&b.neg())?.component(&alpha);
                for (r, &i) in coords.iter().enumerate() {
                    stacked.set(gi * k + r, col, v[i].clone());
                }
            }
        }
        let mut fixed_ech = SparseEchelon::new(field, k);
        if k > 0 {
            for v in stacked.nullspace() {
                fixed_ech.insert_dense(&v);
            }
        }
        // image of Omega_R/dR: reduce(t^gamma dt_i) with m(gamma + e_i) = alpha
        let mut image_ech = SparseEchelon::new(field, k);
        let mut joint = fixed_ech.clone();
        if ring.is_base_degree(&alpha) {
            let base: Vec<i64> = alpha.iter().zip(ring.orders()).map(|(a, &m)| a / m as i64).collect();
            for i in 0..n {
                let mut gamma = base.clone();
                gamma[i] -= 1;
                let cls = reduce(&DifferentialForm::t_form(ring, &gamma, i));
                let v = cls.component(&alpha);
                let restricted: Vec<Scalar> = coords.iter().map(|&c| v[c].clone()).collect();
                image_ech.insert_dense(&restricted);
                joint.insert_dense(&restricted);
            }
        }
        let filter_dim = if ring.is_base_degree(&alpha) { k } else { 0 };
        let (fixed_dim, image_dim, joint_rank) = (fixed_ech.rank(), image_ech.rank(), joint.rank());
        out.push(FixedSpaceDegree {
            degree: alpha,
            fixed_dim,
            image_dim,
            joint_rank,
            filter_dim,
            ok: fixed_dim == image_dim && image_dim == joint_rank && joint_rank == filter_dim,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CyclotomicField;

    fn ring(orders: &[u32], m: u32) -> LaurentRing {
        LaurentRing::new(&CyclotomicField::new(m).unwrap(), orders).unwrap()
    }

    #[test]
    fn differential_examples() {
        let r = ring(&[1], 1);
        let s = r.s(0);
        let d = differential(&r.s_monomial(&[2]));
        assert_eq!(d.coeffs()[0], s.scale(&r.field().from_int(2)));
        assert!(differential(&r.one()).is_zero());
        let r2 = ring(&[1, 1], 1);
        let d = differential(&(&r2.s(0) * &r2.s(1)));
        assert_eq!(d.coeffs()[0], r2.s(1));
        assert_eq!(d.coeffs()[1], r2.s(0));
    }

    #[test]
    fn reduce_examples() {
        let r = ring(&[1], 1);
        assert!(reduce(&DifferentialForm::t_form(&r, &[3], 0)).is_zero());
        let c = reduce(&DifferentialForm::t_form(&r, &[-1], 0));
        assert_eq!(c, CentralClass::basis(&r, &[0], 0));
        let r2 = ring(&[1, 1], 1);
        let lhs = reduce(&DifferentialForm::basic(&r2.t(1), 0));
        let rhs = reduce(&DifferentialForm::basic(&r2.t(0), 1)).neg();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
        assert_eq!(reduce_pair(&r2.t(1), &r2.t(0)), lhs);
    }

    #[test]
    fn galois_on_classes() {
        let r = ring(&[2], 2);
        let g = GaloisElement(vec![1]);
        let c = reduce(&DifferentialForm::basic(&r.s_monomial(&[-1]), 0));
        assert_eq!(c.galois_act(&g).unwrap(), c);
        assert!(reduce(&DifferentialForm::basic(&r.one(), 0)).is_zero());
        let c = reduce(&DifferentialForm::basic(&r.s_monomial(&[-3]), 0));
        assert_eq!(c.galois_act(&g).unwrap(), c);
    }

    #[test]
    fn invariant_class_counts() {
        let r = ring(&[2], 2);
        assert_eq!(invariant_classes(&r, &Window::new(1, 2)).len(), 1);
        let r1 = ring(&[1], 1);
        assert_eq!(invariant_classes(&r1, &Window::new(1, 3)).len(), 1);
        let r2 = ring(&[1, 1], 1);
        assert_eq!(invariant_classes(&r2, &Window::new(2, 1)).len(), 2 + 8);
    }

    #[test]
    fn fixed_space_matches_image() {
        let r = ring(&[2], 2);
        let rep = fixed_space_identification(&r, &Window::new(1, 4)).unwrap();
        assert!(rep.iter().all(|d| d.ok), "{rep:?}");
        let r2 = ring(&[2, 3], 6);
        let rep = fixed_space_identification(&r2, &Window::new(2, 3)).unwrap();
        assert!(rep.iter().all(|d| d.ok), "{rep:?}");
    }

    #[test]
    fn text_and_records() {
        let r = ring(&[1, 1], 1);
        let c = reduce(&DifferentialForm::basic(&r.t(1), 0));
        assert_eq!(c.to_string(), "-1 * s1 ds2 (mod d)");
        let back = CentralClass::from_records(&r, &c.to_records()).unwrap();
        assert_eq!(back, c);
        assert_eq!(CentralClass::zero(&r).to_string(), "0 (mod d)");
    }
}
