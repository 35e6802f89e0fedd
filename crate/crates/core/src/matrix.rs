//! Dense matrices over an exact [`Scalar`] field.

use crate::arith::Scalar;
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    field: T::Field,
    data: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, field: T::Field) -> Self {
        Matrix { rows, cols, field, data: vec![T::zero_of(&field); rows * cols] }
    }

    pub fn identity(n: usize, field: T::Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = T::one_of(&field);
        }
        m
    }

    pub fn diagonal(entries: &[T], field: T::Field) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len(), field);
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Builds from row vectors. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>, field: T::Field) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    /// Builds from column vectors.
    pub fn from_columns(cols: &[Vec<T>], rows: usize, field: T::Field) -> Self {
        let mut m = Self::zeros(rows, cols.len(), field);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> T::Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<F: Fn(&T) -> T>(&self, f: F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.eq_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.eq_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero_of(&self.field), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    /// `self^t * g * self`.
    pub fn congruence(&self, g: &Self) -> Self {
        self.transpose().mul(g).mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.eq_one()
                    } else {
                        x.eq_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].eq_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn trace(&self) -> T {
        self.diagonal_entries().iter().fold(T::zero_of(&self.field), |acc, x| acc.add(x))
    }

    /// Principal submatrix on the given indices (in the given order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(idx.len(), idx.len(), self.field);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Columns `start..end`.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(self.rows, end - start, self.field);
        for i in 0..self.rows {
            for j in start..end {
                m[(i, j - start)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn block_diagonal(&self, other: &Self) -> Self {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        let mut out = Self::zeros(n, m, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one_of(&self.field);
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[(r, k)].eq_zero()) else {
                return T::zero_of(&self.field);
            };
            if p != k {
                m.swap_rows(p, k);
                det = det.neg();
            }
            let pivot = m[(k, k)].clone();
            det = det.mul(&pivot);
            let pinv = pivot.inv().expect("nonzero pivot");
            for r in k + 1..n {
                if m[(r, k)].eq_zero() {
                    continue;
                }
                let factor = m[(r, k)].mul(&pinv);
                for c in k..n {
                    let v = m[(r, c)].sub(&factor.mul(&m[(k, c)]));
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n, self.field);
        for k in 0..n {
            let p = (k..n).find(|&r| !m[(r, k)].eq_zero())?;
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pinv = m[(k, k)].inv()?;
            for c in 0..n {
                m[(k, c)] = m[(k, c)].mul(&pinv);
                inv[(k, c)] = inv[(k, c)].mul(&pinv);
            }
            for r in 0..n {
                if r == k || m[(r, k)].eq_zero() {
                    continue;
                }
                let factor = m[(r, k)].clone();
                for c in 0..n {
                    let v = m[(r, c)].sub(&factor.mul(&m[(k, c)]));
                    m[(r, c)] = v;
                    let w = inv[(r, c)].sub(&factor.mul(&inv[(k, c)]));
                    inv[(r, c)] = w;
                }
            }
        }
        Some(inv)
    }

    /// Leading principal minors `det(self[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows).map(|k| self.principal_submatrix(&(0..k).collect::<Vec<_>>()).determinant()).collect()
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        &mut self.data[r * self.cols + c]
    }
}

/// `u^t g v`.
pub fn bilinear<T: Scalar>(g: &Matrix<T>, u: &[T], v: &[T]) -> T {
    let gv = g.mul_vec(v);
    u.iter().zip(&gv).fold(T::zero_of(&g.field()), |acc, (a, b)| acc.add(&a.mul(b)))
}

pub fn vec_add<T: Scalar>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.add(b)).collect()
}

pub fn vec_sub<T: Scalar>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().zip(v).map(|(a, b)| a.sub(b)).collect()
}

pub fn vec_scale<T: Scalar>(s: &T, v: &[T]) -> Vec<T> {
    v.iter().map(|x| s.mul(x)).collect()
}

pub fn unit_vector<T: Scalar>(n: usize, i: usize, field: &T::Field) -> Vec<T> {
    (0..n).map(|j| if i == j { T::one_of(field) } else { T::zero_of(field) }).collect()
}

/// Whether `u` and `v` are proportional (both nonzero).
pub fn proportional<T: Scalar>(u: &[T], v: &[T]) -> bool {
    let Some(i) = u.iter().position(|x| !x.eq_zero()) else {
        return false;
    };
    if v[i].eq_zero() {
        return false;
    }
    let ratio = v[i].div(&u[i]).expect("nonzero");
    u.iter().zip(v).all(|(a, b)| a.mul(&ratio) == *b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, BigRational, Rationals};

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), Rationals).unwrap()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), rat(18));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.determinant(), rat(0));
        assert!(s.inverse().is_none());
    }

    #[test]
    fn pow_and_minors() {
        let r = m(&[&[0, 1], &[1, 0]]);
        assert!(r.pow(2).is_identity());
        assert!(!r.pow(3).is_identity());
        let a = m(&[&[1, 2], &[2, 1]]);
        assert_eq!(a.leading_minors(), vec![rat(1), rat(-3)]);
    }

    #[test]
    fn proportionality() {
        let u = vec![rat(1), rat(-2), rat(0)];
        let v = vec![rat(-3), rat(6), rat(0)];
        assert!(proportional(&u, &v));
        assert!(!proportional(&u, &[rat(1), rat(2), rat(0)]));
    }
}
