//! Dense and sparse exact linear algebra over a cyclotomic field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::{CyclotomicField, CyclotomicScalar as Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: CyclotomicField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn zero_vector(field: &CyclotomicField, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vector(field: &CyclotomicField, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = a[0].field().zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

impl Matrix {
    pub fn zeros(field: &CyclotomicField, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &CyclotomicField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &CyclotomicField, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &CyclotomicField, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = zero_vector(&self.field, self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("square");
            }
        }
        acc
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation.
    pub fn augment(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form over the first `limit` columns.
    /// Returns the pivot columns.
    fn rref_limited(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).inverse().expect("nonzero pivot");
            for c in col..self.cols {
                let idx = row * self.cols + c;
                if !self.data[idx].is_zero() {
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            let pivot_row: Vec<Scalar> = self.row(row)[col..].to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for (k, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let idx = r * self.cols + col + k;
                        self.data[idx] -= &(&f * pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let c = self.cols;
        self.rref_limited(c)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(&self.field, self.cols);
                v[f] = self.field.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    /// Solves `self * X = rhs` for a matrix `X`, setting free variables to
    /// zero. `None` if inconsistent.
    pub fn solve_columns(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.augment(rhs);
        let pivots = aug.rref_limited(self.cols);
        for r in pivots.len()..self.rows {
            if (0..rhs.cols).any(|c| !aug.get(r, self.cols + c).is_zero()) {
                return None;
            }
        }
        let mut x = Matrix::zeros(&self.field, self.cols, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, aug.get(r, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let rhs = Matrix::from_columns(&self.field, self.rows, &[b.to_vec()]);
        self.solve_columns(&rhs).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(&self.field, self.rows);
        if self.rank() != self.rows {
            return None;
        }
        self.solve_columns(&id)
    }
}

/// Basis of the column span, extracted greedily from the given vectors.
pub fn span_basis(field: &CyclotomicField, len: usize, vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut ech = SparseEchelon::new(field, len);
    let mut out = Vec::new();
    for v in vectors {
        if ech.insert_dense(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Basis of the intersection of two subspaces given by spanning columns.
pub fn intersect(field: &CyclotomicField, len: usize, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve A x = B y.
    let mut cols: Vec<Vec<Scalar>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    let m = Matrix::from_columns(field, len, &cols);
    let kernel = m.nullspace();
    let vecs: Vec<Vec<Scalar>> = kernel
        .iter()
        .map(|k| {
            let mut v = zero_vector(field, len);
            for (i, col) in a.iter().enumerate() {
                add_scaled(&mut v, &k[i], col);
            }
            v
        })
        .collect();
    span_basis(field, len, &vecs)
}

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incrementally maintained reduced row echelon form with sparse rows.
/// Each stored row has a leading 1 at its pivot column and zeros in every
/// other pivot column.
#[derive(Clone)]
pub struct SparseEchelon {
    field: CyclotomicField,
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(field: &CyclotomicField, ncols: usize) -> Self {
        SparseEchelon {
            field: field.clone(),
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseRow)> {
        self.rows.iter()
    }

    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let hits: Vec<usize> = row.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for p in hits {
            let Some(c) = row.get(&p).cloned() else { continue };
            let prow = &self.rows[&p];
            for (k, v) in prow {
                let e = row.entry(*k).or_insert_with(|| self.field.zero());
                *e -= &(&c * v);
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
        row
    }

    /// Adds a row; returns true when the rank grows.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut r = self.reduce(row);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.inverse().expect("nonzero lead");
        for v in r.values_mut() {
            *v = &*v * &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                for (k, v) in &r {
                    let e = other.entry(*k).or_insert_with(|| self.field.zero());
                    *e -= &(&c * v);
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn insert_dense(&mut self, v: &[Scalar]) -> bool {
        self.insert(to_sparse(v))
    }

    pub fn contains_dense(&self, v: &[Scalar]) -> bool {
        self.reduce(to_sparse(v)).is_empty()
    }

    /// True when `v` lies in the kernel of every stored row.
    pub fn annihilates(&self, v: &[Scalar]) -> bool {
        self.rows.values().all(|row| {
            let mut acc = self.field.zero();
            for (k, x) in row {
                if !v[*k].is_zero() {
                    acc += &(x * &v[*k]);
                }
            }
            acc.is_zero()
        })
    }

    /// Basis of the right kernel of the stored rows.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        (0..self.ncols)
            .filter(|c| !self.rows.contains_key(c))
            .map(|f| {
                let mut v = zero_vector(&self.field, self.ncols);
                v[f] = self.field.one();
                for (p, row) in &self.rows {
                    if let Some(x) = row.get(&f) {
                        v[*p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

pub fn to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CyclotomicField {
        CyclotomicField::rationals()
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let k = q();
        Matrix::from_rows(&k, rows.iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vector(&m.mul_vec(&ns[0]).unwrap()));
    }

    #[test]
    fn inverse_and_solve() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let k = q();
        let x = m.solve(&[k.from_int(3), k.from_int(2)]).unwrap();
        assert_eq!(x, vec![k.from_int(1), k.from_int(1)]);
        assert!(mat(&[&[1, 1], &[1, 1]]).solve(&[k.from_int(1), k.from_int(2)]).is_none());
        assert!(mat(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn sparse_echelon_matches_dense() {
        let m = mat(&[&[1, 2, 0, 1], &[0, 1, 1, 0], &[1, 3, 1, 1], &[2, 0, 0, 5]]);
        let mut e = SparseEchelon::new(&q(), 4);
        for r in 0..m.rows() {
            e.insert_dense(m.row(r));
        }
        assert_eq!(e.rank(), m.rank());
        let ns = e.nullspace();
        assert_eq!(ns.len(), 4 - m.rank());
        for v in &ns {
            assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
            assert!(e.annihilates(v));
        }
        assert!(e.contains_dense(m.row(2)));
    }

    #[test]
    fn intersection() {
        let k = q();
        let a = vec![unit_vector(&k, 3, 0), unit_vector(&k, 3, 1)];
        let b = vec![unit_vector(&k, 3, 1), unit_vector(&k, 3, 2)];
        let i = intersect(&k, 3, &a, &b);
        assert_eq!(i.len(), 1);
    }
}
