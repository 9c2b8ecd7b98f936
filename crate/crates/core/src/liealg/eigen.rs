//! Simultaneous eigenspaces of commuting finite-order automorphisms and
//! the central-simplicity test for subalgebras.

use std::collections::BTreeMap;

use super::automorphism::{check_commuting, LieAutomorphism};
use super::chevalley::SplitSimpleLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, zero_vector, Matrix, SparseEchelon};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

/// Residue class in `Z/m_1 x ... x Z/m_n`.
pub type Class = Vec<u32>;

/// Reduces an integer degree modulo the orders.
pub fn class_of(alpha: &[i64], orders: &[u32]) -> Class {
    alpha
        .iter()
        .zip(orders)
        .map(|(&a, &m)| a.rem_euclid(m as i64) as u32)
        .collect()
}

#[derive(Clone, Debug)]
pub struct EigenspaceDecomposition {
    orders: Vec<u32>,
    dim: usize,
    components: BTreeMap<Class, Vec<Vec<Scalar>>>,
}

impl EigenspaceDecomposition {
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All classes with a nonzero component, in lexicographic order.
    pub fn components(&self) -> &BTreeMap<Class, Vec<Vec<Scalar>>> {
        &self.components
    }

    /// Basis of `g_class` (empty if the component is zero).
    pub fn component(&self, class: &[u32]) -> &[Vec<Scalar>] {
        self.components.get(class).map_or(&[], |v| v.as_slice())
    }

    pub fn component_dim(&self, class: &[u32]) -> usize {
        self.component(class).len()
    }

    pub fn dims(&self) -> BTreeMap<Class, usize> {
        self.components.iter().map(|(c, b)| (c.clone(), b.len())).collect()
    }

    pub fn add_classes(&self, a: &[u32], b: &[u32]) -> Class {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn neg_class(&self, a: &[u32]) -> Class {
        a.iter().zip(&self.orders).map(|(x, m)| (m - x) % m).collect()
    }

    /// The adapted basis: components concatenated in class order.
    pub fn adapted_basis(&self) -> Vec<(Class, Vec<Scalar>)> {
        self.components
            .iter()
            .flat_map(|(c, b)| b.iter().map(move |v| (c.clone(), v.clone())))
            .collect()
    }

    /// `[g_a, g_b] ⊆ g_{a+b}` on all component basis pairs.
    pub fn verify_bracket_compatibility(&self, g: &SplitSimpleLieAlgebra) -> Result<bool> {
        for (a, ba) in &self.components {
            for (b, bb) in &self.components {
                let target = self.add_classes(a, b);
                let tb = self.component(&target);
                let field = ba[0][0].field().clone();
                let mut ech = SparseEchelon::new(&field, self.dim);
                for v in tb {
                    ech.insert_dense(v);
                }
                for x in ba {
                    for y in bb {
                        if !ech.contains_dense(&g.bracket(x, y)?) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Components are Killing-orthogonal unless their classes sum to zero.
    pub fn verify_killing_orthogonality(&self, g: &SplitSimpleLieAlgebra) -> Result<bool> {
        for (a, ba) in &self.components {
            for (b, bb) in &self.components {
                if self.add_classes(a, b).iter().all(|&c| c == 0) {
                    continue;
                }
                for x in ba {
                    for y in bb {
                        if !g.killing(x, y)?.is_zero() {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Every column satisfies the defining eigenvector equations.
    pub fn verify_eigenvectors(&self, autos: &[LieAutomorphism]) -> Result<bool> {
        for (class, basis) in &self.components {
            for v in basis {
                for (j, a) in autos.iter().enumerate() {
                    let field = v[0].field();
                    let z = field.root_of_unity(self.orders[j], class[j] as i64)?;
                    let av = a.apply(v)?;
                    let zv: Vec<Scalar> = v.iter().map(|x| &z * x).collect();
                    if av != zv {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Simultaneous eigenspace decomposition by successive refinement: each
/// automorphism is restricted to the current invariant subspaces and split
/// into its eigenspaces there.
pub fn simultaneous_eigenspaces(
    g: &SplitSimpleLieAlgebra,
    field: &CyclotomicField,
    autos: &[LieAutomorphism],
    orders: &[u32],
) -> Result<EigenspaceDecomposition> {
    if autos.len() != orders.len() {
        return Err(Error::OrderMismatch(format!(
            "{} automorphisms but {} orders",
            autos.len(),
            orders.len()
        )));
    }
    check_commuting(autos)?;
    for (a, &m) in autos.iter().zip(orders) {
        if m == 0 || !a.matrix().pow(m as u64).is_identity() {
            return Err(Error::OrderMismatch(format!("automorphism does not satisfy sigma^{m} = id")));
        }
        if !field.conductor().is_multiple_of(m) {
            return Err(Error::ConductorMismatch(field.conductor(), m));
        }
    }
    let dim = g.dim();
    let mut parts: Vec<(Class, Vec<Vec<Scalar>>)> =
        vec![(Vec::new(), (0..dim).map(|i| g.basis_vector(field, i)).collect())];
    for (a, &m) in autos.iter().zip(orders) {
        let mut next = Vec::new();
        for (class, basis) in parts {
            let b = Matrix::from_columns(field, dim, &basis);
            let images: Vec<Vec<Scalar>> = basis.iter().map(|v| a.apply(v)).collect::<Result<_>>()?;
            let ab = Matrix::from_columns(field, dim, &images);
            let restricted = b
                .solve_columns(&ab)
                .ok_or_else(|| Error::NotSubalgebra("eigenspace is not invariant".into()))?;
            let r = basis.len();
            let mut found = 0;
            for i in 0..m {
                let z = field.root_of_unity(m, i as i64)?;
                let shifted = restricted.sub(&Matrix::identity(field, r).scale(&z));
                let kernel = shifted.nullspace();
                if kernel.is_empty() {
                    continue;
                }
                found += kernel.len();
                let vecs = kernel
                    .iter()
                    .map(|k| {
                        let mut v = zero_vector(field, dim);
                        for (c, col) in k.iter().zip(&basis) {
                            add_scaled(&mut v, c, col);
                        }
                        v
                    })
                    .collect();
                let mut c = class.clone();
                c.push(i);
                next.push((c, vecs));
            }
            if found != r {
                return Err(Error::OrderMismatch("automorphism is not diagonalizable over the field".into()));
            }
        }
        parts = next;
    }
    if autos.is_empty() {
        parts = vec![(Vec::new(), parts.pop().map(|p| p.1).unwrap_or_default())];
    }
    Ok(EigenspaceDecomposition {
        orders: orders.to_vec(),
        dim,
        components: parts.into_iter().collect(),
    })
}

/// Structure constants of a subalgebra in a given basis.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    basis: Vec<Vec<Scalar>>,
    /// `ad[i]` is the matrix of `ad b_i` in the subalgebra basis.
    ad: Vec<Matrix>,
}

impl Subalgebra {
    /// Fails with `NotSubalgebra` when the span is not bracket-closed.
    pub fn new(g: &SplitSimpleLieAlgebra, field: &CyclotomicField, basis: &[Vec<Scalar>]) -> Result<Self> {
        let r = basis.len();
        let b = Matrix::from_columns(field, g.dim(), basis);
        if b.rank() != r {
            return Err(Error::NotSubalgebra("basis vectors are dependent".into()));
        }
        let mut ad = Vec::with_capacity(r);
        for x in basis {
            let images: Vec<Vec<Scalar>> = basis.iter().map(|y| g.bracket(x, y)).collect::<Result<_>>()?;
            let rhs = Matrix::from_columns(field, g.dim(), &images);
            let coords = b
                .solve_columns(&rhs)
                .ok_or_else(|| Error::NotSubalgebra("span is not closed under the bracket".into()))?;
            ad.push(coords);
        }
        Ok(Subalgebra {
            basis: basis.to_vec(),
            ad,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn killing_matrix(&self) -> Result<Matrix> {
        let r = self.dim();
        let field = self.ad[0].field().clone();
        let mut k = Matrix::zeros(&field, r, r);
        for i in 0..r {
            for j in i..r {
                let p = self.ad[i].mul(&self.ad[j])?;
                let mut t = field.zero();
                for d in 0..r {
                    t += p.get(d, d);
                }
                k.set(i, j, t.clone());
                k.set(j, i, t);
            }
        }
        Ok(k)
    }

    pub fn is_semisimple(&self) -> Result<bool> {
        if self.dim() == 0 {
            return Ok(false);
        }
        Ok(self.killing_matrix()?.rank() == self.dim())
    }

    /// Dimension of the commutant `{T : T ad_x = ad_x T for all x}`.
    pub fn commutant_dim(&self) -> usize {
        let r = self.dim();
        if r == 0 {
            return 0;
        }
        let field = self.ad[0].field().clone();
        // unknown T[p][q] at index p*r + q
        let mut ech = SparseEchelon::new(&field, r * r);
        for a in &self.ad {
            for p in 0..r {
                for q in 0..r {
                    // (T A - A T)[p][q] = sum_k T[p][k] A[k][q] - A[p][k] T[k][q]
                    let mut row = std::collections::BTreeMap::new();
                    for k in 0..r {
                        let x = a.get(k, q);
                        if !x.is_zero() {
                            let e = row.entry(p * r + k).or_insert_with(|| field.zero());
                            *e += x;
                        }
                        let y = a.get(p, k);
                        if !y.is_zero() {
                            let e = row.entry(k * r + q).or_insert_with(|| field.zero());
                            *e -= y;
                        }
                    }
                    row.retain(|_, v: &mut Scalar| !v.is_zero());
                    ech.insert(row);
                }
            }
        }
        r * r - ech.rank()
    }

    /// Nondegenerate Killing form and one-dimensional adjoint commutant.
    pub fn is_central_simple(&self) -> Result<bool> {
        Ok(self.is_semisimple()? && self.commutant_dim() == 1)
    }
}

pub fn is_central_simple(g: &SplitSimpleLieAlgebra, field: &CyclotomicField, basis: &[Vec<Scalar>]) -> Result<bool> {
    Subalgebra::new(g, field, basis)?.is_central_simple()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Family;

    #[test]
    fn a2_swap_dims() {
        let q = CyclotomicField::new(2).unwrap();
        let g = SplitSimpleLieAlgebra::build(Family::A, 2).unwrap();
        let a = LieAutomorphism::diagram(&g, &q, &[1, 0]).unwrap();
        let e = simultaneous_eigenspaces(&g, &q, std::slice::from_ref(&a), &[2]).unwrap();
        assert_eq!(e.component_dim(&[0]), 3);
        assert_eq!(e.component_dim(&[1]), 5);
        assert!(e.verify_eigenvectors(&[a]).unwrap());
        assert!(e.verify_bracket_compatibility(&g).unwrap());
        assert!(e.verify_killing_orthogonality(&g).unwrap());
        assert!(is_central_simple(&g, &q, e.component(&[0])).unwrap());
    }

    #[test]
    fn d4_triality_dims() {
        let k = CyclotomicField::new(3).unwrap();
        let g = SplitSimpleLieAlgebra::build(Family::D, 4).unwrap();
        let a = LieAutomorphism::diagram(&g, &k, &[2, 1, 3, 0]).unwrap();
        let e = simultaneous_eigenspaces(&g, &k, &[a], &[3]).unwrap();
        let dims: Vec<usize> = (0..3).map(|i| e.component_dim(&[i])).collect();
        assert_eq!(dims, vec![14, 7, 7]);
        assert!(is_central_simple(&g, &k, e.component(&[0])).unwrap());
    }

    #[test]
    fn identity_single_component() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::A, 1).unwrap();
        let id = LieAutomorphism::identity(&g, &q);
        let e = simultaneous_eigenspaces(&g, &q, &[id], &[1]).unwrap();
        assert_eq!(e.dims().len(), 1);
        assert_eq!(e.component_dim(&[0]), 3);
    }

    #[test]
    fn abelian_not_central_simple() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::A, 1).unwrap();
        assert!(!is_central_simple(&g, &q, &[g.basis_vector(&q, 1)]).unwrap());
        let full: Vec<_> = (0..3).map(|i| g.basis_vector(&q, i)).collect();
        assert!(is_central_simple(&g, &q, &full).unwrap());
        let e = g.basis_vector(&q, 0);
        let f = g.basis_vector(&q, 2);
        assert!(matches!(is_central_simple(&g, &q, &[e, f]), Err(Error::NotSubalgebra(_))));
    }
}
