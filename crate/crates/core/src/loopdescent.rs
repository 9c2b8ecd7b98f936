//! Loop algebras `g_S = g ⊗ S`, constant descent cocycles `u_g = v_g ⊗ id`,
//! the descended (multiloop) algebra `L_u`, and the subspaces `g_a`.
//!
//! With the Galois action `s_i -> zeta_{m_i}^{j_i} s_i` and generators
//! `v_i = sigma_i^{-1}`, the fixed points are exactly
//! `L_u = ⊕_alpha g_{alpha mod m} ⊗ s^alpha`, where `g_ibar` is the
//! simultaneous eigenspace `sigma_j x = zeta_{m_j}^{i_j} x`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{add_degrees, Degree, GaloisElement, LaurentPoly, LaurentRing, Window};
use crate::liealg::{
    check_commuting, simultaneous_eigenspaces, Class, EigenspaceDecomposition, LieAutomorphism, SplitSimpleLieAlgebra,
    Subalgebra,
};
use crate::linalg::{is_zero_vector, Matrix, SparseEchelon};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

/// `sum_alpha x_alpha ⊗ s^alpha`, no zero components stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LoopElement {
    ring: LaurentRing,
    dim: usize,
    comps: BTreeMap<Degree, Vec<Scalar>>,
}

/// Serialized component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopRecord {
    pub degree: Vec<i64>,
    pub coeffs: Vec<String>,
}

impl LoopElement {
    pub fn zero(ring: &LaurentRing, dim: usize) -> Self {
        LoopElement {
            ring: ring.clone(),
            dim,
            comps: BTreeMap::new(),
        }
    }

    /// `x ⊗ a`.
    pub fn pure(x: &[Scalar], a: &LaurentPoly) -> Self {
        let mut out = LoopElement::zero(a.ring(), x.len());
        for (alpha, c) in a.terms() {
            let v: Vec<Scalar> = x.iter().map(|y| y * c).collect();
            out.add_component(alpha, &v);
        }
        out
    }

    /// `x ⊗ s^alpha`.
    pub fn monomial(ring: &LaurentRing, x: &[Scalar], alpha: &[i64]) -> Self {
        let mut out = LoopElement::zero(ring, x.len());
        out.add_component(alpha, x);
        out
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<Degree, Vec<Scalar>> {
        &self.comps
    }

    pub fn component(&self, alpha: &[i64]) -> Vec<Scalar> {
        self.comps
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| vec![self.ring.field().zero(); self.dim])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add_component(&mut self, alpha: &[i64], v: &[Scalar]) {
        if is_zero_vector(v) {
            return;
        }
        let field = self.ring.field().clone();
        let dim = self.dim;
        let e = self.comps.entry(alpha.to_vec()).or_insert_with(|| vec![field.zero(); dim]);
        for (x, y) in e.iter_mut().zip(v) {
            *x += y;
        }
        if is_zero_vector(e) {
            self.comps.remove(alpha);
        }
    }

    fn check_shape(&self, other: &LoopElement) -> Result<()> {
        if self.ring != other.ring || self.dim != other.dim {
            Err(Error::ShapeMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &LoopElement) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (a, v) in &other.comps {
            out.add_component(a, v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = LoopElement::zero(&self.ring, self.dim);
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

    /// `x ⊗ a -> x ⊗ g.a`.
    pub fn galois_act(&self, g: &GaloisElement) -> Result<Self> {
        if g.0.len() != self.ring.nvars() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = LoopElement::zero(&self.ring, self.dim);
        for (a, v) in &self.comps {
            let chi = self.ring.character(g, a);
            out.comps.insert(a.clone(), v.iter().map(|x| x * &chi).collect());
        }
        Ok(out)
    }

    /// Applies an `S`-linear map `A ⊗ id`.
    pub fn apply_matrix(&self, m: &Matrix) -> Result<Self> {
        let mut out = LoopElement::zero(&self.ring, self.dim);
        for (a, v) in &self.comps {
            out.add_component(a, &m.mul_vec(v)?);
        }
        Ok(out)
    }

    pub fn to_records(&self) -> Vec<LoopRecord> {
        self.comps
            .iter()
            .map(|(a, v)| LoopRecord {
                degree: a.clone(),
                coeffs: v.iter().map(|x| x.to_string()).collect(),
            })
            .collect()
    }

    pub fn from_records(ring: &LaurentRing, dim: usize, records: &[LoopRecord]) -> Result<Self> {
        let mut out = LoopElement::zero(ring, dim);
        for r in records {
            if r.degree.len() != ring.nvars() || r.coeffs.len() != dim {
                return Err(Error::ShapeMismatch);
            }
            let v: Vec<Scalar> = r.coeffs.iter().map(|c| ring.field().parse(c)).collect::<Result<_>>()?;
            out.add_component(&r.degree, &v);
        }
        Ok(out)
    }
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(a, v)| format!("{v:?}⊗s^{a:?}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `[x ⊗ a, y ⊗ b] = [x, y] ⊗ ab`.
pub fn loop_bracket(g: &SplitSimpleLieAlgebra, x: &LoopElement, y: &LoopElement) -> Result<LoopElement> {
    x.check_shape(y)?;
    if x.dim != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: x.dim,
        });
    }
    let mut out = LoopElement::zero(&x.ring, x.dim);
    for (a, u) in &x.comps {
        for (b, v) in &y.comps {
            out.add_component(&add_degrees(a, b), &g.bracket(u, v)?);
        }
    }
    Ok(out)
}

/// Constant cocycle `u_g = (prod_i v_i^{j_i}) ⊗ id`.
#[derive(Clone, Debug)]
pub struct DescentCocycle {
    ring: LaurentRing,
    generators: Vec<LieAutomorphism>,
    values: BTreeMap<GaloisElement, Matrix>,
}

impl DescentCocycle {
    /// Validates commutation and `v_i^{m_i} = id`.
    pub fn new(g: &SplitSimpleLieAlgebra, ring: &LaurentRing, generators: Vec<LieAutomorphism>) -> Result<Self> {
        if generators.len() != ring.nvars() {
            return Err(Error::OrderMismatch(format!(
                "{} generators for {} variables",
                generators.len(),
                ring.nvars()
            )));
        }
        check_commuting(&generators)?;
        for (v, &m) in generators.iter().zip(ring.orders()) {
            if v.matrix().rows() != g.dim() {
                return Err(Error::DimensionMismatch {
                    expected: g.dim(),
                    got: v.matrix().rows(),
                });
            }
            if !v.matrix().pow(m as u64).is_identity() {
                return Err(Error::OrderMismatch(format!("generator does not satisfy v^{m} = id")));
            }
        }
        let mut values = BTreeMap::new();
        for el in ring.galois_group() {
            let mut m = Matrix::identity(ring.field(), g.dim());
            for (v, &j) in generators.iter().zip(&el.0) {
                if j > 0 {
                    m = m.mul(&v.matrix().pow(j as u64))?;
                }
            }
            values.insert(el, m);
        }
        Ok(DescentCocycle {
            ring: ring.clone(),
            generators,
            values,
        })
    }

    /// The multiloop cocycle `v_i = sigma_i^{-1}`.
    pub fn from_multiloop(g: &SplitSimpleLieAlgebra, ring: &LaurentRing, sigmas: &[LieAutomorphism]) -> Result<Self> {
        DescentCocycle::new(g, ring, sigmas.iter().map(|s| s.inverse()).collect())
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn generators(&self) -> &[LieAutomorphism] {
        &self.generators
    }

    /// `u_g` (the `g`-part; values act `S`-linearly).
    pub fn value(&self, g: &GaloisElement) -> Result<&Matrix> {
        self.values.get(g).ok_or(Error::ShapeMismatch)
    }

    /// `u_{g+h} = u_g u_h` for all pairs.
    pub fn verify_cocycle_law(&self) -> bool {
        let orders = self.ring.orders();
        self.values.iter().all(|(g, ug)| {
            self.values.iter().all(|(h, uh)| {
                let gh = g.compose(h, orders);
                ug.mul(uh).map(|p| p == self.values[&gh]).unwrap_or(false)
            })
        })
    }

    /// `X -> u_g(g.X)`.
    pub fn act(&self, g: &GaloisElement, x: &LoopElement) -> Result<LoopElement> {
        x.galois_act(g)?.apply_matrix(self.value(g)?)
    }

    pub fn is_fixed(&self, x: &LoopElement) -> Result<bool> {
        for g in self.values.keys() {
            if &self.act(g, x)? != x {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Structure constants and Killing form of `g` in an eigen-adapted basis.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    /// Columns are the adapted basis vectors in Chevalley coordinates.
    vectors: Vec<Vec<Scalar>>,
    classes: Vec<Class>,
    by_class: BTreeMap<Class, Vec<usize>>,
    /// `sc[a * dim + b]` = sparse coordinates of `[E_a, E_b]`.
    sc: Vec<Vec<(usize, Scalar)>>,
    killing: Vec<Vec<Scalar>>,
    change: Matrix,
}

impl AdaptedBasis {
    pub fn new(g: &SplitSimpleLieAlgebra, field: &CyclotomicField, eigen: &EigenspaceDecomposition) -> Result<Self> {
        let dim = g.dim();
        let adapted = eigen.adapted_basis();
        let vectors: Vec<Vec<Scalar>> = adapted.iter().map(|(_, v)| v.clone()).collect();
        let classes: Vec<Class> = adapted.iter().map(|(c, _)| c.clone()).collect();
        let mut by_class: BTreeMap<Class, Vec<usize>> = BTreeMap::new();
        for (k, c) in classes.iter().enumerate() {
            by_class.entry(c.clone()).or_default().push(k);
        }
        let e = Matrix::from_columns(field, dim, &vectors);
        let inv = e
            .inverse()
            .ok_or_else(|| Error::OrderMismatch("eigenvectors do not form a basis".into()))?;
        let mut sc = Vec::with_capacity(dim * dim);
        let mut killing = vec![vec![field.zero(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let br = g.bracket(&vectors[a], &vectors[b])?;
                let coords = inv.mul_vec(&br)?;
                sc.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect(),
                );
                killing[a][b] = g.killing(&vectors[a], &vectors[b])?;
            }
        }
        Ok(AdaptedBasis {
            vectors,
            classes,
            by_class,
            sc,
            killing,
            change: inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, k: usize) -> &[Scalar] {
        &self.vectors[k]
    }

    pub fn class(&self, k: usize) -> &Class {
        &self.classes[k]
    }

    /// Adapted indices spanning `g_c`.
    pub fn indices(&self, c: &[u32]) -> &[usize] {
        self.by_class.get(c).map_or(&[], |v| v.as_slice())
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.sc[a * self.dim() + b]
    }

    pub fn killing(&self, a: usize, b: usize) -> &Scalar {
        &self.killing[a][b]
    }

    /// Adapted coordinates of a Chevalley-coordinate vector.
    pub fn coordinates(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.change.mul_vec(x)
    }
}

/// Index of graded basis vectors `E_k ⊗ s^alpha` of `L_u` in a window.
#[derive(Clone, Debug)]
pub struct WindowBasis {
    window: Window,
    elems: Vec<(Degree, usize)>,
    index: BTreeMap<(Degree, usize), usize>,
    by_degree: BTreeMap<Degree, Vec<usize>>,
}

impl WindowBasis {
    pub fn new(adapted: &AdaptedBasis, ring: &LaurentRing, window: Window) -> Self {
        let mut elems = Vec::new();
        let mut index = BTreeMap::new();
        let mut by_degree: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for alpha in window.degrees() {
            for &k in adapted.indices(&ring.class(&alpha)) {
                index.insert((alpha.clone(), k), elems.len());
                by_degree.entry(alpha.clone()).or_default().push(elems.len());
                elems.push((alpha.clone(), k));
            }
        }
        WindowBasis {
            window,
            elems,
            index,
            by_degree,
        }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[(Degree, usize)] {
        &self.elems
    }

    pub fn position(&self, alpha: &[i64], k: usize) -> Option<usize> {
        self.index.get(&(alpha.to_vec(), k)).copied()
    }

    pub fn at_degree(&self, alpha: &[i64]) -> &[usize] {
        self.by_degree.get(alpha).map_or(&[], |v| v.as_slice())
    }
}

/// A validated multiloop datum: `g`, commuting `sigma_i` of orders `m_i`,
/// the ring `S`, the eigenspace decomposition and the descent cocycle.
#[derive(Clone, Debug)]
pub struct Multiloop {
    algebra: Arc<SplitSimpleLieAlgebra>,
    field: CyclotomicField,
    ring: LaurentRing,
    sigmas: Vec<LieAutomorphism>,
    eigen: EigenspaceDecomposition,
    cocycle: DescentCocycle,
    adapted: AdaptedBasis,
}

impl Multiloop {
    pub fn new(algebra: Arc<SplitSimpleLieAlgebra>, field: &CyclotomicField, sigmas: Vec<LieAutomorphism>, orders: &[u32]) -> Result<Self> {
        let ring = LaurentRing::new(field, orders)?;
        let eigen = simultaneous_eigenspaces(&algebra, field, &sigmas, orders)?;
        let cocycle = DescentCocycle::from_multiloop(&algebra, &ring, &sigmas)?;
        let adapted = AdaptedBasis::new(&algebra, field, &eigen)?;
        Ok(Multiloop {
            algebra,
            field: field.clone(),
            ring,
            sigmas,
            eigen,
            cocycle,
            adapted,
        })
    }

    /// Untwisted loop algebra in `n` variables.
    pub fn untwisted(algebra: Arc<SplitSimpleLieAlgebra>, n: usize) -> Result<Self> {
        let q = CyclotomicField::rationals();
        let ids = (0..n).map(|_| LieAutomorphism::identity(&algebra, &q)).collect();
        Multiloop::new(algebra, &q, ids, &vec![1; n])
    }

    pub fn algebra(&self) -> &SplitSimpleLieAlgebra {
        &self.algebra
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn ring(&self) -> &LaurentRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn sigmas(&self) -> &[LieAutomorphism] {
        &self.sigmas
    }

    pub fn eigen(&self) -> &EigenspaceDecomposition {
        &self.eigen
    }

    pub fn cocycle(&self) -> &DescentCocycle {
        &self.cocycle
    }

    pub fn adapted(&self) -> &AdaptedBasis {
        &self.adapted
    }

    pub fn window_basis(&self, window: Window) -> WindowBasis {
        WindowBasis::new(&self.adapted, &self.ring, window)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn is_in_descended(&self, x: &LoopElement) -> Result<bool> {
        self.cocycle.is_fixed(x)
    }

    /// Basis of the degree-`alpha` component `g_{alpha mod m} ⊗ s^alpha`.
    pub fn multiloop_component(&self, alpha: &[i64]) -> Vec<LoopElement> {
        self.eigen
            .component(&self.ring.class(alpha))
            .iter()
            .map(|x| LoopElement::monomial(&self.ring, x, alpha))
            .collect()
    }

    /// Loop element of the adapted window basis element `E_k ⊗ s^alpha`.
    pub fn basis_element(&self, alpha: &[i64], k: usize) -> LoopElement {
        LoopElement::monomial(&self.ring, self.adapted.vector(k), alpha)
    }

    /// `g_a = {x : v_g(x) ⊗ g.a = x ⊗ a for all g}`, computed directly from
    /// the cocycle generators as the intersection over the characters
    /// present in `a`.
    pub fn g_a_subspace(&self, a: &LaurentPoly) -> Result<Vec<Vec<Scalar>>> {
        if a.is_zero() {
            return Err(Error::ZeroElement("g_a requires a nonzero a"));
        }
        if a.ring() != &self.ring {
            return Err(Error::ShapeMismatch);
        }
        let dim = self.dim();
        let mut ech = SparseEchelon::new(&self.field, dim);
        for part in a.character_parts().values() {
            let (alpha, _) = part.terms().iter().next().expect("nonzero part");
            for i in 0..self.nvars() {
                let g = self.ring.generator(i);
                let chi = self.ring.character(&g, alpha);
                let m = self.cocycle.value(&g)?.scale(&chi).sub(&Matrix::identity(&self.field, dim));
                for r in 0..dim {
                    ech.insert_dense(m.row(r));
                }
            }
        }
        Ok(ech.nullspace())
    }

    pub fn g0(&self) -> Result<Vec<Vec<Scalar>>> {
        self.g_a_subspace(&self.ring.one())
    }

    pub fn g0_subalgebra(&self) -> Result<Subalgebra> {
        Subalgebra::new(&self.algebra, &self.field, &self.g0()?)
    }

    /// Coordinates of `x` in the adapted basis restricted to the class of
    /// `alpha`; `None` if `x ∉ g_{alpha mod m}`.
    pub fn adapted_coords(&self, alpha: &[i64], x: &[Scalar]) -> Result<Option<Vec<(usize, Scalar)>>> {
        let coords = self.adapted.coordinates(x)?;
        let cls = self.ring.class(alpha);
        let mut out = Vec::new();
        for (k, c) in coords.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.adapted.class(k) != &cls {
                return Ok(None);
            }
            out.push((k, c));
        }
        Ok(Some(out))
    }
}

/// `true` iff every vector of `a` lies in the span of `b`.
pub fn subspace_contained(field: &CyclotomicField, dim: usize, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    let mut ech = SparseEchelon::new(field, dim);
    for v in b {
        ech.insert_dense(v);
    }
    a.iter().all(|v| ech.contains_dense(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Family;

    fn a2_twist() -> Multiloop {
        let k = CyclotomicField::new(2).unwrap();
        let g = Arc::new(SplitSimpleLieAlgebra::build(Family::A, 2).unwrap());
        let s = LieAutomorphism::diagram(&g, &k, &[1, 0]).unwrap();
        Multiloop::new(g, &k, vec![s], &[2]).unwrap()
    }

    #[test]
    fn untwisted_bracket_example() {
        let g = Arc::new(SplitSimpleLieAlgebra::build(Family::A, 1).unwrap());
        let ml = Multiloop::untwisted(g.clone(), 1).unwrap();
        let q = ml.field().clone();
        let r = ml.ring();
        let e = LoopElement::pure(&g.basis_vector(&q, 0), &r.t(0));
        let f = LoopElement::pure(&g.basis_vector(&q, 2), &r.t_monomial(&[-1]));
        let h = LoopElement::pure(&g.basis_vector(&q, 1), &r.one());
        assert_eq!(loop_bracket(&g, &e, &f).unwrap(), h);
        assert!(loop_bracket(&g, &e, &e).unwrap().is_zero());
        assert!(ml.is_in_descended(&e).unwrap());
        assert_eq!(ml.multiloop_component(&[3]).len(), 3);
    }

    #[test]
    fn a2_twist_components() {
        let ml = a2_twist();
        assert_eq!(ml.multiloop_component(&[0]).len(), 3);
        assert_eq!(ml.multiloop_component(&[1]).len(), 5);
        for x in ml.eigen().component(&[0]) {
            let el = LoopElement::pure(x, &ml.ring().t(0));
            assert!(ml.is_in_descended(&el).unwrap());
        }
        for x in ml.eigen().component(&[1]) {
            let el = LoopElement::pure(x, &ml.ring().t(0));
            assert!(!ml.is_in_descended(&el).unwrap());
            let el = LoopElement::pure(x, &(&ml.ring().s(0) * &ml.ring().t(0)));
            assert!(ml.is_in_descended(&el).unwrap());
        }
        assert!(ml.cocycle().verify_cocycle_law());
    }

    #[test]
    fn g_a_examples() {
        let ml = a2_twist();
        let k = ml.field().clone();
        let g0 = ml.g0().unwrap();
        assert_eq!(g0.len(), 3);
        assert!(subspace_contained(&k, 8, &g0, ml.eigen().component(&[0])));
        let gs = ml.g_a_subspace(&ml.ring().s(0)).unwrap();
        assert_eq!(gs.len(), 5);
        let mixed = &ml.ring().s(0) + &ml.ring().one();
        assert!(ml.g_a_subspace(&mixed).unwrap().is_empty());
        assert!(ml.g_a_subspace(&ml.ring().zero()).is_err());
        let g = ml.algebra();
        let brackets: Vec<_> = gs.iter().flat_map(|x| gs.iter().map(move |y| g.bracket(x, y).unwrap())).collect();
        let gs2 = ml.g_a_subspace(&ml.ring().s_monomial(&[2])).unwrap();
        assert!(subspace_contained(&k, 8, &brackets, &gs2));
        assert!(ml.g0_subalgebra().unwrap().is_central_simple().unwrap());
    }

    #[test]
    fn adapted_structure_matches_chevalley() {
        let ml = a2_twist();
        let ad = ml.adapted();
        let g = ml.algebra();
        for a in 0..8 {
            for b in 0..8 {
                let mut v = vec![ml.field().zero(); 8];
                for (k, c) in ad.bracket(a, b) {
                    crate::linalg::add_scaled(&mut v, c, ad.vector(*k));
                }
                assert_eq!(v, g.bracket(ad.vector(a), ad.vector(b)).unwrap());
            }
        }
        let wb = ml.window_basis(Window::new(1, 2));
        assert_eq!(wb.len(), 3 * 3 + 2 * 5);
    }
}
