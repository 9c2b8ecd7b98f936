//! Split simple Lie algebras in a Chevalley basis.
//!
//! Basis order: `x_alpha` for positive roots (height, then lexicographic),
//! then `h_1..h_l`, then `x_{-alpha}` in the same order as the positives.
//! Structure constants are integers; signs follow the extraspecial-pair
//! convention (`N_{alpha,beta} = p + 1` on extraspecial pairs).

use std::collections::HashMap;

use num::rational::Ratio;
use serde::Serialize;

use super::roots::{CartanType, Family, Root, RootSystem};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

type Sparse = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct SplitSimpleLieAlgebra {
    roots: RootSystem,
    dim: usize,
    table: Vec<Sparse>,
    killing: Vec<Vec<i64>>,
}

/// One nonzero structure constant `[b_i, b_j] = c b_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

struct NTable<'a> {
    rs: &'a RootSystem,
    positive: HashMap<(usize, usize), i64>,
}

fn add(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Root {
    a.iter().map(|x| -x).collect()
}

fn is_positive(a: &[i64]) -> bool {
    a.iter().any(|&x| x > 0)
}

impl<'a> NTable<'a> {
    fn get(&self, x: &[i64], y: &[i64]) -> i64 {
        let z = add(x, y);
        if z.iter().all(|&c| c == 0) || self.rs.root_index(&z).is_none() {
            return 0;
        }
        match (is_positive(x), is_positive(y)) {
            (true, true) => {
                let a = self.rs.positive_index(x).expect("root");
                let b = self.rs.positive_index(y).expect("root");
                match self.positive.get(&(a, b)) {
                    Some(&v) => v,
                    None => -self.positive[&(b, a)],
                }
            }
            (false, false) => -self.get(&neg(x), &neg(y)),
            (true, false) => {
                // x + y + (-z) = 0: N_{x,y}/(z,z) = N_{y,-z}/(x,x) = N_{-z,x}/(y,y)
                let zz = self.rs.inner(&z, &z);
                let (num, den) = if is_positive(&z) {
                    (zz * self.get(y, &neg(&z)), self.rs.inner(x, x))
                } else {
                    (zz * self.get(&neg(&z), x), self.rs.inner(y, y))
                };
                debug_assert_eq!(num % den, 0);
                num / den
            }
            (false, true) => -self.get(y, x),
        }
    }
}

impl SplitSimpleLieAlgebra {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        let ct = CartanType::new(family, rank)?;
        let rs = RootSystem::new(ct)?;
        let n = rs.num_positive();
        let l = rs.rank();
        let dim = 2 * n + l;

        let mut nt = NTable {
            rs: &rs,
            positive: HashMap::new(),
        };
        let pos = rs.positive_roots().to_vec();
        for (k, xi) in pos.iter().enumerate() {
            let Some((a0, b0)) = rs.extraspecial_pair(k) else {
                continue;
            };
            let (alpha, beta) = (&pos[a0], &pos[b0]);
            let p = rs.string_below(alpha, beta);
            let n_ab = p + 1;
            nt.positive.insert((a0, b0), n_ab);
            let xixi = rs.inner(xi, xi);
            for (c, gamma) in pos.iter().enumerate().take(k) {
                if c <= a0 {
                    continue;
                }
                let delta: Root = xi.iter().zip(gamma).map(|(x, y)| x - y).collect();
                let Some(d) = rs.positive_index(&delta) else {
                    continue;
                };
                if c >= d {
                    continue;
                }
                // alpha + beta + (-gamma) + (-delta) = 0
                let mut acc = Ratio::<i64>::from_integer(0);
                let bg: Root = add(beta, &neg(gamma));
                if rs.root_index(&bg).is_some() {
                    let t = nt.get(beta, &neg(gamma)) * nt.get(alpha, &neg(&delta));
                    acc += Ratio::new(t, rs.inner(&bg, &bg));
                }
                let ag: Root = add(alpha, &neg(gamma));
                if rs.root_index(&ag).is_some() {
                    let t = nt.get(&neg(gamma), alpha) * nt.get(beta, &neg(&delta));
                    acc += Ratio::new(t, rs.inner(&ag, &ag));
                }
                let val = acc * Ratio::new(xixi, n_ab);
                if !val.is_integer() {
                    return Err(Error::InvalidType(format!("{ct}: non-integral structure constant")));
                }
                nt.positive.insert((c, d), val.to_integer());
            }
        }

        let basis_of_root = |r: usize| if r < n { r } else { n + l + (r - n) };
        let mut table: Vec<Sparse> = vec![Vec::new(); dim * dim];
        let weights: Vec<Option<Root>> = (0..dim).map(|i| Self::weight_of(&rs, i)).collect();
        for i in 0..dim {
            for j in 0..dim {
                let entry = match (&weights[i], &weights[j]) {
                    (None, None) => Vec::new(),
                    (None, Some(b)) => {
                        let c = rs.coroot_pairing(b, i - n);
                        if c == 0 {
                            Vec::new()
                        } else {
                            vec![(j, c)]
                        }
                    }
                    (Some(a), None) => {
                        let c = rs.coroot_pairing(a, j - n);
                        if c == 0 {
                            Vec::new()
                        } else {
                            vec![(i, -c)]
                        }
                    }
                    (Some(a), Some(b)) => {
                        let s = add(a, b);
                        if s.iter().all(|&x| x == 0) {
                            // [x_a, x_{-a}] = h_a
                            let coeffs = rs.coroot_coefficients(a);
                            coeffs
                                .iter()
                                .enumerate()
                                .filter(|(_, &c)| c != 0)
                                .map(|(t, &c)| (n + t, c))
                                .collect()
                        } else if let Some(r) = rs.root_index(&s) {
                            vec![(basis_of_root(r), nt.get(a, b))]
                        } else {
                            Vec::new()
                        }
                    }
                };
                table[i * dim + j] = entry;
            }
        }

        let mut alg = SplitSimpleLieAlgebra {
            roots: rs.clone(),
            dim,
            table,
            killing: Vec::new(),
        };
        if !alg.verify_antisymmetry() || !alg.verify_jacobi() {
            return Err(Error::InvalidType(format!("{ct}: structure constants fail Jacobi")));
        }
        alg.killing = alg.compute_killing(&weights);
        Ok(alg)
    }

    fn weight_of(rs: &RootSystem, i: usize) -> Option<Root> {
        let n = rs.num_positive();
        let l = rs.rank();
        if i < n {
            Some(rs.positive_roots()[i].clone())
        } else if i < n + l {
            None
        } else {
            Some(neg(&rs.positive_roots()[i - n - l]))
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.roots.cartan_type()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.roots.rank()
    }

    /// Root of a basis vector, `None` for Cartan elements.
    pub fn weight(&self, i: usize) -> Option<Root> {
        Self::weight_of(&self.roots, i)
    }

    fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        r
    }

    pub fn e_index(&self, i: usize) -> usize {
        self.roots.positive_index(&self.simple_root(i)).expect("simple root")
    }

    pub fn h_index(&self, i: usize) -> usize {
        self.roots.num_positive() + i
    }

    pub fn f_index(&self, i: usize) -> usize {
        self.roots.num_positive() + self.rank() + self.e_index(i)
    }

    /// Basis index of `x_r` for a (signed) root.
    pub fn root_vector_index(&self, r: &[i64]) -> Option<usize> {
        let n = self.roots.num_positive();
        let l = self.rank();
        self.roots
            .root_index(r)
            .map(|idx| if idx < n { idx } else { n + l + (idx - n) })
    }

    pub fn basis_label(&self, i: usize) -> String {
        match self.weight(i) {
            None => format!("h{}", i - self.roots.num_positive() + 1),
            Some(r) => {
                let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("x[{}]", parts.join(","))
            }
        }
    }

    /// `[b_i, b_j]` as sparse integer combination.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i * self.dim + j]
    }

    pub fn structure_constants(&self) -> Vec<StructureConstant> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for &(k, c) in self.structure(i, j) {
                    out.push(StructureConstant {
                        i,
                        j,
                        k,
                        c: c.to_string(),
                    });
                }
            }
        }
        out
    }

    pub(crate) fn bracket_sparse(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Sparse {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(i, a) in x {
            for &(j, b) in y {
                for &(k, c) in self.structure(i, j) {
                    *acc.entry(k).or_insert(0) += a * b * c;
                }
            }
        }
        let mut v: Sparse = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        v.sort_unstable();
        v
    }

    pub fn verify_antisymmetry(&self) -> bool {
        (0..self.dim).all(|i| {
            (i..self.dim).all(|j| {
                let a = self.structure(i, j);
                let mut b: Sparse = self.structure(j, i).iter().map(|&(k, c)| (k, -c)).collect();
                b.sort_unstable();
                let mut a = a.to_vec();
                a.sort_unstable();
                a == b && (i != j || a.is_empty())
            })
        })
    }

    /// Exhaustive Jacobi identity on basis triples.
    pub fn verify_jacobi(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                let ij = self.structure(i, j).to_vec();
                for k in j + 1..d {
                    let mut total: HashMap<usize, i64> = HashMap::new();
                    let jk = self.structure(j, k).to_vec();
                    let ki = self.structure(k, i).to_vec();
                    for v in [
                        self.bracket_sparse(&[(i, 1)], &jk),
                        self.bracket_sparse(&[(j, 1)], &ki),
                        self.bracket_sparse(&[(k, 1)], &ij),
                    ] {
                        for (idx, c) in v {
                            *total.entry(idx).or_insert(0) += c;
                        }
                    }
                    if total.values().any(|&c| c != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn compute_killing(&self, weights: &[Option<Root>]) -> Vec<Vec<i64>> {
        let d = self.dim;
        let coeff = |j: usize, l: usize, k: usize| -> i64 {
            self.structure(j, l)
                .iter()
                .find(|(idx, _)| *idx == k)
                .map_or(0, |(_, c)| *c)
        };
        let mut kil = vec![vec![0i64; d]; d];
        for i in 0..d {
            for j in 0..d {
                let opposite = match (&weights[i], &weights[j]) {
                    (None, None) => true,
                    (Some(a), Some(b)) => add(a, b).iter().all(|&x| x == 0),
                    _ => false,
                };
                if !opposite {
                    continue;
                }
                let mut s = 0;
                for k in 0..d {
                    for &(l, c) in self.structure(i, k) {
                        s += c * coeff(j, l, k);
                    }
                }
                kil[i][j] = s;
            }
        }
        kil
    }

    pub fn killing_matrix(&self) -> &[Vec<i64>] {
        &self.killing
    }

    /// `kappa([b_i, b_j], b_k) = kappa(b_i, [b_j, b_k])` on all basis triples.
    pub fn verify_killing_invariance(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs: i64 = self.structure(i, j).iter().map(|&(t, c)| c * self.killing[t][k]).sum();
                    let rhs: i64 = self.structure(j, k).iter().map(|&(t, c)| c * self.killing[i][t]).sum();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn killing_is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.killing[i][j] == self.killing[j][i]))
    }

    pub fn killing_nondegenerate(&self) -> bool {
        let q = CyclotomicField::rationals();
        self.killing_matrix_over(&q).rank() == self.dim
    }

    pub fn killing_matrix_over(&self, field: &CyclotomicField) -> Matrix {
        let rows = self
            .killing
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Matrix::from_rows(field, rows).expect("square")
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn basis_vector(&self, field: &CyclotomicField, i: usize) -> Vec<Scalar> {
        crate::linalg::unit_vector(field, self.dim, i)
    }

    /// Bilinear extension of the structure table.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let field = x.first().map(|s| s.field().clone()).unwrap_or_else(CyclotomicField::rationals);
        let mut out = zero_vector(&field, self.dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.try_mul(b)?;
                for &(k, c) in self.structure(i, j) {
                    out[k] += &(&ab * &field.from_int(c));
                }
            }
        }
        Ok(out)
    }

    pub fn killing(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        self.check_len(x)?;
        self.check_len(y)?;
        let field = x.first().map(|s| s.field().clone()).unwrap_or_else(CyclotomicField::rationals);
        let mut acc = field.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                let k = self.killing[i][j];
                if k != 0 && !b.is_zero() {
                    acc += &(&a.try_mul(b)? * &field.from_int(k));
                }
            }
        }
        Ok(acc)
    }

    /// Matrix of `ad x` (columns are images of basis vectors).
    pub fn ad_matrix(&self, x: &[Scalar]) -> Result<Matrix> {
        self.check_len(x)?;
        let field = x[0].field().clone();
        let mut m = Matrix::zeros(&field, self.dim, self.dim);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for &(k, c) in self.structure(i, j) {
                    let cur = m.get(k, j).clone();
                    m.set(k, j, &cur + &(a * &field.from_int(c)));
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = SplitSimpleLieAlgebra::build(Family::A, 1).unwrap();
        assert_eq!(g.dim(), 3);
        let (e, h, f) = (g.e_index(0), g.h_index(0), g.f_index(0));
        assert_eq!(g.structure(h, e), &[(e, 2)]);
        assert_eq!(g.structure(e, f), &[(h, 1)]);
        assert_eq!(g.structure(h, f), &[(f, -2)]);
        assert_eq!(g.killing_matrix()[h][h], 8);
        assert_eq!(g.killing_matrix()[e][e], 0);
        assert_eq!(g.killing_matrix()[e][f], 4);
    }

    #[test]
    fn dimensions() {
        for (f, l, d) in [(Family::A, 2, 8), (Family::G, 2, 14), (Family::B, 2, 10), (Family::D, 4, 28), (Family::F, 4, 52)] {
            let g = SplitSimpleLieAlgebra::build(f, l).unwrap();
            assert_eq!(g.dim(), d);
        }
    }

    #[test]
    fn structure_constants_are_p_plus_one() {
        let g = SplitSimpleLieAlgebra::build(Family::G, 2).unwrap();
        let rs = g.root_system();
        let n = rs.num_positive();
        for a in 0..2 * n {
            for b in 0..2 * n {
                let (ra, rb) = (rs.root(a), rs.root(b));
                let s = add(&ra, &rb);
                if s.iter().all(|&x| x == 0) || rs.root_index(&s).is_none() {
                    continue;
                }
                let i = g.root_vector_index(&ra).unwrap();
                let j = g.root_vector_index(&rb).unwrap();
                let p = rs.string_below(&ra, &rb);
                let c = g.structure(i, j)[0].1;
                assert_eq!(c.abs(), p + 1);
            }
        }
    }

    #[test]
    fn field_bracket_matches_table() {
        let k = CyclotomicField::new(3).unwrap();
        let g = SplitSimpleLieAlgebra::build(Family::A, 1).unwrap();
        let e = g.basis_vector(&k, 0);
        let f = g.basis_vector(&k, 2);
        assert_eq!(g.bracket(&e, &f).unwrap(), g.basis_vector(&k, 1));
        assert!(g.bracket(&e, &f[..2]).is_err());
        let ad = g.ad_matrix(&e).unwrap();
        assert_eq!(ad.mul_vec(&f).unwrap(), g.basis_vector(&k, 1));
    }
}
