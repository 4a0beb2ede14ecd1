use std::fmt;

use crate::scalars::{Field, Ring};

/// A dense row-major matrix over a commutative ring with involution.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// `E_{ij}` of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, T::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = &mut out.data[i * rhs.cols + j];
                        *cur = cur.add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(Ring::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Conjugate transpose: transpose with the entry involution applied.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).involve());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `other` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, other: &Self) {
        for i in 0..other.rows {
            for j in 0..other.cols {
                self.set(r0 + i, c0 + j, other.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        out
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols);
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, rhs);
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor · row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j).mul(factor);
            if !v.is_zero() {
                let cur = self.get(dst, j).add(&v);
                self.set(dst, j, cur);
            }
        }
    }

    /// `col[dst] += factor · col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src).mul(factor);
            if !v.is_zero() {
                let cur = self.get(i, dst).add(&v);
                self.set(i, dst, cur);
            }
        }
    }

    /// Replaces rows `a`, `b` by `m·[row a; row b]`.
    pub fn mix_rows(&mut self, a: usize, b: usize, m: &[[T; 2]; 2]) {
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j).clone(), self.get(b, j).clone());
            self.set(a, j, m[0][0].mul(&x).add(&m[0][1].mul(&y)));
            self.set(b, j, m[1][0].mul(&x).add(&m[1][1].mul(&y)));
        }
    }

    /// Replaces columns `a`, `b` by `[col a, col b]·m`.
    pub fn mix_cols(&mut self, a: usize, b: usize, m: &[[T; 2]; 2]) {
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a).clone(), self.get(i, b).clone());
            self.set(i, a, x.mul(&m[0][0]).add(&y.mul(&m[1][0])));
            self.set(i, b, x.mul(&m[0][1]).add(&y.mul(&m[1][1])));
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul(factor);
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(factor);
            self.set(i, j, v);
        }
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref<T> {
    pub reduced: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Field> Matrix<T> {
    pub fn rref(&self) -> Rref<T> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).neg();
                    m.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).rref();
        if aug.pivots.len() < n || aug.pivots[n - 1] >= n {
            return None;
        }
        Some(aug.reduced.submatrix(0..n, n..2 * n))
    }

    /// Basis (as rows) of `{ v : v·self = 0 }`.
    pub fn left_kernel(&self) -> Self {
        self.transpose().kernel().transpose()
    }

    /// Basis (as columns) of `{ v : self·v = 0 }`.
    pub fn kernel(&self) -> Self {
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, T::one());
            for (r, &p) in pivots.iter().enumerate() {
                out.set(p, k, reduced.get(r, f).neg());
            }
        }
        out
    }

    /// Nonzero rows of the reduced row echelon form: a basis of the row space.
    pub fn row_basis(&self) -> Self {
        let Rref { reduced, pivots } = self.rref();
        reduced.submatrix(0..pivots.len(), 0..self.cols)
    }

    /// Some `Y` with `self·Y = t`, if the system is consistent.
    pub fn solve_right(&self, t: &Self) -> Option<Self> {
        assert_eq!(self.rows, t.rows);
        let Rref { reduced, pivots } = self.hstack(t).rref();
        if pivots.last().is_some_and(|&p| p >= self.cols) {
            return None;
        }
        let mut y = Self::zeros(self.cols, t.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..t.cols {
                y.set(p, j, reduced.get(r, self.cols + j).clone());
            }
        }
        Some(y)
    }
}

impl<T: Ring> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        for row in &cells {
            f.write_str("[")?;
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c:>w$}", w = widths[j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FieldKind, RatFun, Scalar};

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn inverse_and_kernel_over_rationals() {
        let a = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k.cols(), 1);
        assert!(s.mul(&k).is_zero());
        let lk = s.left_kernel();
        assert!(lk.mul(&s).is_zero());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn solve_right_over_rational_functions() {
        let f = |s: &str| RatFun::parse(s, FieldKind::Rational).unwrap();
        let a = Matrix::from_rows(vec![vec![f("1"), f("1+x")], vec![f("0"), f("0")]]);
        let t = Matrix::from_rows(vec![vec![f("1"), f("0")], vec![f("0"), f("0")]]);
        let y = a.solve_right(&t).unwrap();
        assert_eq!(a.mul(&y), t);
        let bad = Matrix::from_rows(vec![vec![f("0"), f("0")], vec![f("1"), f("0")]]);
        assert!(a.solve_right(&bad).is_none());
    }
}
