//! Finite-order automorphisms of a split simple Lie algebra, stored as
//! matrices in the Chevalley basis (column `j` is the image of `b_j`).

use super::chevalley::SplitSimpleLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{to_sparse, Matrix};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAutomorphism {
    matrix: Matrix,
    order: u32,
}

fn divisors_below(m: u32) -> impl Iterator<Item = u32> {
    (1..m).filter(move |d| m.is_multiple_of(*d))
}

impl LieAutomorphism {
    pub fn identity(g: &SplitSimpleLieAlgebra, field: &CyclotomicField) -> Self {
        LieAutomorphism {
            matrix: Matrix::identity(field, g.dim()),
            order: 1,
        }
    }

    /// Diagram automorphism induced by a permutation of the simple roots
    /// (0-based node indices), extended from the generators along bracket
    /// words; every decomposition of a root must give the same image.
    pub fn diagram(g: &SplitSimpleLieAlgebra, field: &CyclotomicField, perm: &[usize]) -> Result<Self> {
        let rs = g.root_system();
        let l = rs.rank();
        let mut seen = vec![false; l];
        if perm.len() != l || perm.iter().any(|&p| p >= l || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidAutomorphism(format!("{perm:?} is not a permutation of {l} nodes")));
        }
        let cm = rs.cartan_matrix();
        for i in 0..l {
            for j in 0..l {
                if cm[perm[i]][perm[j]] != cm[i][j] {
                    return Err(Error::InvalidAutomorphism(format!(
                        "{perm:?} does not preserve the Cartan matrix"
                    )));
                }
            }
        }
        let permute = |r: &[i64]| -> Vec<i64> {
            let mut out = vec![0; l];
            for (i, &c) in r.iter().enumerate() {
                out[perm[i]] += c;
            }
            out
        };
        let dim = g.dim();
        // images[b] = (target basis index, sign)
        let mut images: Vec<Option<(usize, i64)>> = vec![None; dim];
        for i in 0..l {
            images[g.e_index(i)] = Some((g.e_index(perm[i]), 1));
            images[g.f_index(i)] = Some((g.f_index(perm[i]), 1));
            images[g.h_index(i)] = Some((g.h_index(perm[i]), 1));
        }
        for sign in [1i64, -1] {
            for alpha in rs.positive_roots() {
                let root: Vec<i64> = alpha.iter().map(|c| sign * c).collect();
                let target = g.root_vector_index(&root).expect("root");
                if images[target].is_some() {
                    continue;
                }
                let image_root = g.root_vector_index(&permute(&root)).ok_or_else(|| {
                    Error::InvalidAutomorphism("permuted root is not a root".into())
                })?;
                let mut value: Option<i64> = None;
                for i in 0..l {
                    let mut beta = root.clone();
                    beta[i] -= sign;
                    let Some(bidx) = g.root_vector_index(&beta) else { continue };
                    let gen = if sign > 0 { g.e_index(i) } else { g.f_index(i) };
                    let Some((bimg, bsign)) = images[bidx] else { continue };
                    let (gimg, _) = images[gen].expect("generator image");
                    let n = g.structure(gen, bidx)[0].1;
                    let img = g.bracket_sparse(&[(gimg, 1)], &[(bimg, bsign)]);
                    if img.len() != 1 || img[0].0 != image_root || img[0].1 % n != 0 {
                        return Err(Error::InvalidAutomorphism("inconsistent extension from generators".into()));
                    }
                    let c = img[0].1 / n;
                    match value {
                        None => value = Some(c),
                        Some(v) if v != c => {
                            return Err(Error::InvalidAutomorphism(
                                "bracket words disagree on a root vector image".into(),
                            ))
                        }
                        _ => {}
                    }
                }
                let c = value.ok_or_else(|| Error::InvalidAutomorphism("root not reachable".into()))?;
                images[target] = Some((image_root, c));
            }
        }
        let mut m = Matrix::zeros(field, dim, dim);
        for (j, img) in images.iter().enumerate() {
            let (i, c) = img.expect("complete");
            m.set(i, j, field.from_int(c));
        }
        // order of the permutation
        let mut order = 1u32;
        let mut cur: Vec<usize> = perm.to_vec();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        let auto = LieAutomorphism { matrix: m, order };
        auto.validate(g)?;
        Ok(auto)
    }

    /// Validated user-supplied automorphism of declared order.
    pub fn from_matrix(g: &SplitSimpleLieAlgebra, matrix: Matrix, order: u32) -> Result<Self> {
        if matrix.rows() != g.dim() || matrix.cols() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: matrix.rows(),
            });
        }
        if order == 0 {
            return Err(Error::OrderMismatch("order must be positive".into()));
        }
        let auto = LieAutomorphism { matrix, order };
        auto.validate(g)?;
        Ok(auto)
    }

    fn validate(&self, g: &SplitSimpleLieAlgebra) -> Result<()> {
        if !self.preserves_bracket(g) {
            return Err(Error::InvalidAutomorphism("matrix does not preserve the bracket".into()));
        }
        if !self.matrix.pow(self.order as u64).is_identity() {
            return Err(Error::OrderMismatch(format!("automorphism^{} is not the identity", self.order)));
        }
        if let Some(d) = divisors_below(self.order).find(|&d| self.matrix.pow(d as u64).is_identity()) {
            return Err(Error::OrderMismatch(format!(
                "declared order {} is not minimal (power {d} is the identity)",
                self.order
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn field(&self) -> &CyclotomicField {
        self.matrix.field()
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.matrix.mul_vec(x)
    }

    /// `self^k` for any integer `k` (negative powers use the finite order).
    pub fn pow(&self, k: i64) -> LieAutomorphism {
        let e = k.rem_euclid(self.order as i64) as u64;
        let m = self.matrix.pow(e);
        let g = self.order / crate::scalars::gcd(self.order as u64, e) as u32;
        LieAutomorphism {
            matrix: m,
            order: if e == 0 { 1 } else { g },
        }
    }

    pub fn inverse(&self) -> LieAutomorphism {
        self.pow(-1)
    }

    pub fn compose(&self, other: &LieAutomorphism) -> Result<Matrix> {
        self.matrix.mul(&other.matrix)
    }

    pub fn commutes(&self, other: &LieAutomorphism) -> bool {
        match (self.matrix.mul(&other.matrix), other.matrix.mul(&self.matrix)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// `A[b_i, b_j] = [A b_i, A b_j]` on all basis pairs.
    pub fn preserves_bracket(&self, g: &SplitSimpleLieAlgebra) -> bool {
        let dim = g.dim();
        let cols: Vec<_> = (0..dim).map(|j| to_sparse(&self.matrix.column(j))).collect();
        let field = self.matrix.field();
        for i in 0..dim {
            for j in i + 1..dim {
                // left: A [b_i, b_j]
                let mut lhs = vec![field.zero(); dim];
                for &(k, c) in g.structure(i, j) {
                    let ck = field.from_int(c);
                    for (r, v) in &cols[k] {
                        lhs[*r] += &(&ck * v);
                    }
                }
                let mut rhs = vec![field.zero(); dim];
                for (a, x) in &cols[i] {
                    for (b, y) in &cols[j] {
                        let xy = x * y;
                        for &(k, c) in g.structure(*a, *b) {
                            rhs[k] += &(&xy * &field.from_int(c));
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `kappa(A b_i, A b_j) = kappa(b_i, b_j)` on all basis pairs.
    pub fn preserves_killing(&self, g: &SplitSimpleLieAlgebra) -> bool {
        let k = g.killing_matrix_over(self.matrix.field());
        match self.matrix.transpose().mul(&k).and_then(|m| m.mul(&self.matrix)) {
            Ok(m) => m == k,
            Err(_) => false,
        }
    }
}

/// Checks pairwise commutation of a family.
pub fn check_commuting(autos: &[LieAutomorphism]) -> Result<()> {
    for (i, a) in autos.iter().enumerate() {
        for b in &autos[i + 1..] {
            if !a.commutes(b) {
                return Err(Error::NonCommuting);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Family;

    #[test]
    fn identity_permutation_gives_identity() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::A, 3).unwrap();
        let a = LieAutomorphism::diagram(&g, &q, &[0, 1, 2]).unwrap();
        assert!(a.matrix().is_identity());
        assert_eq!(a.order(), 1);
    }

    #[test]
    fn a2_swap_is_involution() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::A, 2).unwrap();
        let a = LieAutomorphism::diagram(&g, &q, &[1, 0]).unwrap();
        assert_eq!(a.order(), 2);
        assert!(a.preserves_killing(&g));
        assert!(a.inverse() == a);
    }

    #[test]
    fn d4_triality() {
        let k = CyclotomicField::new(3).unwrap();
        let g = SplitSimpleLieAlgebra::build(Family::D, 4).unwrap();
        let a = LieAutomorphism::diagram(&g, &k, &[2, 1, 3, 0]).unwrap();
        assert_eq!(a.order(), 3);
        assert!(a.preserves_killing(&g));
    }

    #[test]
    fn rejects_non_symmetry() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::B, 2).unwrap();
        assert!(LieAutomorphism::diagram(&g, &q, &[1, 0]).is_err());
        assert!(LieAutomorphism::diagram(&g, &q, &[0, 0]).is_err());
    }

    #[test]
    fn rejects_bad_matrix() {
        let q = CyclotomicField::rationals();
        let g = SplitSimpleLieAlgebra::build(Family::A, 1).unwrap();
        let m = Matrix::identity(&q, 3).scale(&q.from_int(2));
        assert!(LieAutomorphism::from_matrix(&g, m, 1).is_err());
        let id = Matrix::identity(&q, 3);
        assert!(matches!(LieAutomorphism::from_matrix(&g, id, 2), Err(Error::OrderMismatch(_))));
    }
}
