use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::elim;
use crate::{Error, Result};

/// Dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// A `rows x cols` matrix with `diag` on the leading diagonal.
    pub fn from_diagonal<T>(rows: usize, cols: usize, diag: &[T]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        if diag.len() > rows.min(cols) {
            return Err(Error::Dimension(format!(
                "{} diagonal entries do not fit a {rows}x{cols} matrix",
                diag.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * cols + i] = d.clone().into();
        }
        Ok(m)
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn check(&self, row: usize, col: usize) -> Result<usize> {
        if row < self.rows && col < self.cols {
            Ok(row * self.cols + col)
        } else {
            Err(Error::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Result<&BigInt> {
        self.check(row, col).map(|i| &self.data[i])
    }

    pub fn set(&mut self, row: usize, col: usize, value: impl Into<BigInt>) -> Result<()> {
        let i = self.check(row, col)?;
        self.data[i] = value.into();
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Nonzero entries as `(row, col, value)`, in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (i / cols, i % cols, v))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn multiply(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scaled(&self, s: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `diag(self, other)`.
    pub fn block_diag(&self, other: &IntMatrix) -> Self {
        Self::block_diag_all([self, other])
    }

    pub fn block_diag_all<'a>(blocks: impl IntoIterator<Item = &'a IntMatrix>) -> Self {
        let blocks: Vec<&IntMatrix> = blocks.into_iter().collect();
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b).expect("blocks fit by construction");
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} block at ({r0}, {c0}) does not fit a {}x{} matrix",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].clone_from_slice(block.row(r));
        }
        Ok(())
    }

    /// The submatrix on the given row and column indices (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c)?.clone());
            }
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        })
    }

    /// The contiguous block `[r0, r0 + rows) x [c0, c0 + cols)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Self> {
        let rs: Vec<usize> = (r0..r0 + rows).collect();
        let cs: Vec<usize> = (c0..c0 + cols).collect();
        self.submatrix(&rs, &cs)
    }

    // Elementary unimodular operations.

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = -&*v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + c];
            *v = -&*v;
        }
    }

    /// `row[dst] += k * row[src]`, `dst != src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src, "row operation needs two distinct rows");
        for c in 0..self.cols {
            let s = &self.data[src * self.cols + c] * k;
            self.data[dst * self.cols + c] += s;
        }
    }

    /// `col[dst] += k * col[src]`, `dst != src`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src, "column operation needs two distinct columns");
        for r in 0..self.rows {
            let s = &self.data[r * self.cols + src] * k;
            self.data[r * self.cols + dst] += s;
        }
    }

    /// Exact determinant by Euclidean row reduction to triangular form.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if let Some(small) = self.to_small() {
            if let Some(d) = elim::determinant(self.rows, small) {
                return Ok(BigInt::from(d));
            }
        }
        Ok(elim::determinant(self.rows, self.data.clone()).expect("big arithmetic cannot overflow"))
    }

    /// `|det| = 1`.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.determinant()?.abs().is_one())
    }

    /// Inverse of a unimodular matrix, computed with integer row operations.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if let Some(small) = self.to_small() {
            if let Some(inv) = elim::inverse(n, small) {
                let inv = inv.ok_or(Error::NotUnimodular)?;
                return Ok(IntMatrix {
                    rows: n,
                    cols: n,
                    data: inv.into_iter().map(BigInt::from).collect(),
                });
            }
        }
        let inv = elim::inverse(n, self.data.clone())
            .expect("big arithmetic cannot overflow")
            .ok_or(Error::NotUnimodular)?;
        Ok(IntMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    pub(crate) fn data(&self) -> &[BigInt] {
        &self.data
    }

    /// Entries as `i64` when every one of them fits.
    pub(crate) fn to_small(&self) -> Option<Vec<i64>> {
        self.data.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
        &self.data[r * self.cols + c]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn out_of_bounds_access_is_an_error() {
        let a = IntMatrix::zeros(2, 3);
        assert!(a.get(1, 2).is_ok());
        assert!(matches!(a.get(2, 0), Err(Error::OutOfBounds { .. })));
        assert!(matches!(a.get(0, 3), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn multiply_and_identity() {
        let x = m(&[vec![1, 2, 3], vec![-4, 5, 6]]);
        assert_eq!(IntMatrix::identity(2).multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&IntMatrix::identity(3)).unwrap(), x);
        assert!(x.multiply(&x).is_err());
        let p = x.multiply(&x.transpose()).unwrap();
        assert_eq!(p, m(&[vec![14, 24], vec![24, 77]]));
    }

    #[test]
    fn transpose_is_involution() {
        let x = m(&[vec![1, 2, 3], vec![-4, 5, 6]]);
        assert_eq!(x.transpose().transpose(), x);
        assert_eq!(x.transpose().shape(), (3, 2));
    }

    #[test]
    fn block_diag_and_submatrix() {
        let a = m(&[vec![1, 2]]);
        let b = m(&[vec![3], vec![4]]);
        let d = a.block_diag(&b);
        assert_eq!(d, m(&[vec![1, 2, 0], vec![0, 0, 3], vec![0, 0, 4]]));
        assert_eq!(d.submatrix(&[1, 2], &[2]).unwrap(), b);
        assert_eq!(d.block(0, 0, 1, 2).unwrap(), a);
        assert!(d.submatrix(&[3], &[0]).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::identity(5).determinant().unwrap(), BigInt::one());
        let x = m(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(x.determinant().unwrap(), BigInt::one());
        let y = m(&[vec![0, 3, 1], vec![2, 0, 5], vec![1, 1, 1]]);
        // 0*(0-5) - 3*(2-5) + 1*(2-0) = 11
        assert_eq!(y.determinant().unwrap(), BigInt::from(11));
        let z = m(&[vec![1, 2], vec![2, 4]]);
        assert!(z.determinant().unwrap().is_zero());
        assert!(IntMatrix::zeros(2, 3).determinant().is_err());
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn unimodularity() {
        assert!(IntMatrix::identity(5).is_unimodular().unwrap());
        let d = IntMatrix::from_diagonal(2, 2, &[1, 2]).unwrap();
        assert!(!d.is_unimodular().unwrap());
        assert!(matches!(d.inverse_unimodular(), Err(Error::NotUnimodular)));
        assert!(IntMatrix::zeros(1, 2).is_unimodular().is_err());
    }

    #[test]
    fn unimodular_inverse() {
        let x = m(&[vec![2, 1, 0], vec![7, 4, 3], vec![0, 0, -1]]);
        let inv = x.inverse_unimodular().unwrap();
        assert_eq!(x.multiply(&inv).unwrap(), IntMatrix::identity(3));
        assert_eq!(inv.multiply(&x).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let mut x = IntMatrix::identity(2);
        x.set(0, 1, big.clone()).unwrap();
        assert_eq!(x.determinant().unwrap(), BigInt::one());
        let inv = x.inverse_unimodular().unwrap();
        assert_eq!(inv[(0, 1)], -big);
    }
}
