//! Dense exact linear algebra over the rationals: echelon forms, kernels,
//! solving, and an incrementally grown row span.
//!
//! Everything here is pivoting-free of rounding concerns; operations either
//! succeed exactly or report shape errors.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<QMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadDimensions);
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::BadDimensions);
        }
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.at(k, j);
                    if !add.is_zero() {
                        let cur = out.at(i, j).clone();
                        out.set(i, j, cur + add);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::BadDimensions);
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_scalar(&self, c: &Scalar) -> QMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= c.clone();
        }
        out
    }

    pub fn try_add(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::BadDimensions);
        }
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(rhs.data.iter()) {
            *v += w.clone();
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::BadDimensions);
        }
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(rhs.data.iter()) {
            *v -= w.clone();
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.at(r, c).recip();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    m.row_sub_scaled(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).recip();
            m.scale_row(c, &inv);
            for i in (c + 1)..m.rows {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    m.row_sub_scaled(i, c, &f);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red.at(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// A basis of the right kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut next_pivot = 0;
        for c in 0..self.cols {
            if next_pivot < pivots.len() && pivots[next_pivot] == c {
                next_pivot += 1;
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[c] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.at(r, c).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.at(r, self.cols).clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, f: &Scalar) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.data[idx].is_zero() {
                self.data[idx] *= f;
            }
        }
    }

    /// row[i] -= f * row[r]
    fn row_sub_scaled(&mut self, i: usize, r: usize, f: &Scalar) {
        for j in 0..self.cols {
            let sub = f * self.at(r, j);
            if !sub.is_zero() {
                let idx = i * self.cols + j;
                self.data[idx] -= sub;
            }
        }
    }
}

/// A growing subspace of `Q^cols`, kept in reduced echelon form so that
/// membership tests and insertions are cheap.
#[derive(Debug, Clone)]
pub struct RowSpan {
    cols: usize,
    /// Rows in reduced echelon form, pivot columns strictly increasing.
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(cols: usize) -> RowSpan {
        RowSpan { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after reduction against the span; zero iff contained.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.cols {
                    if !row[j].is_zero() {
                        let sub = &f * &row[j];
                        w[j] -= sub;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span.  Returns true when the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // Clear the new pivot column from the existing rows.
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.cols {
                    if !w[j].is_zero() {
                        let sub = &f * &w[j];
                        row[j] -= sub;
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> QMatrix {
        QMatrix::from_rows(vec![vec![qi(a), qi(b)], vec![qi(c), qi(d)]]).unwrap()
    }

    #[test]
    fn det_and_inverse() {
        let m = m2(2, 1, 7, 4);
        assert_eq!(m.det(), qi(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QMatrix::identity(2));
        assert_eq!(inv, m2(4, -1, -7, 2));
        let sing = m2(1, 2, 2, 4);
        assert_eq!(sing.det(), qi(0));
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        // x + 2y + 3z = 6 with a rank-1 second row.
        let a = QMatrix::from_rows(vec![
            vec![qi(1), qi(2), qi(3)],
            vec![qi(2), qi(4), qi(6)],
        ])
        .unwrap();
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        let x = a.solve(&[qi(6), qi(12)]).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![qi(6), qi(12)]);
        assert!(a.solve(&[qi(6), qi(11)]).is_none());
    }

    #[test]
    fn rref_pivots() {
        let a = QMatrix::from_rows(vec![
            vec![qi(0), qi(2), qi(4)],
            vec![qi(1), qi(1), qi(1)],
        ])
        .unwrap();
        let (r, p) = a.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.row(0), &[qi(1), qi(0), qi(-1)]);
        assert_eq!(r.row(1), &[qi(0), qi(1), qi(2)]);
    }

    #[test]
    fn row_span_grows_and_tests_membership() {
        let mut s = RowSpan::new(3);
        assert!(s.insert(&[qi(1), qi(1), qi(0)]));
        assert!(s.insert(&[qi(0), q(1, 2), qi(1)]));
        assert!(!s.insert(&[qi(2), qi(3), qi(2)]));
        assert!(s.contains(&[qi(1), qi(2), qi(2)]));
        assert!(!s.contains(&[qi(0), qi(0), qi(1)]));
        assert_eq!(s.dim(), 2);
        // Basis stays in reduced form: each pivot column is zero elsewhere.
        for (i, &p) in s.pivots().iter().enumerate() {
            for (j, row) in s.basis().iter().enumerate() {
                let expect = if i == j { qi(1) } else { qi(0) };
                assert_eq!(row[p], expect);
            }
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(QMatrix::from_rows(vec![vec![qi(1)], vec![qi(1), qi(2)]]).is_err());
    }
}
