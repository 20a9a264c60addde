//! Row-major dense matrices. Used as the reference oracle for every sparse
//! kernel and as the right-hand operand of SpMM.

use alloc::vec;
use alloc::vec::Vec;

use crate::coo::{CooMatrix, Dims, Triplet};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Debug)]
pub struct DenseMatrix<T> {
    dims: Dims,
    values: Vec<T>,
}

impl<T: Value> DenseMatrix<T> {
    pub fn zeros(dims: Dims) -> Self {
        DenseMatrix {
            dims,
            values: vec![T::ZERO; dims.nrows() * dims.ncols()],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::zeros(Dims::new(n, n).expect("identity of size 0"));
        for i in 0..n {
            d.set(i, i, T::ONE);
        }
        d
    }

    pub fn from_row_major(dims: Dims, values: Vec<T>) -> Result<Self> {
        let expected = dims.nrows() * dims.ncols();
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(DenseMatrix { dims, values })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.dims.ncols() + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        let n = self.dims.ncols();
        self.values[row * n + col] = value;
    }

    #[inline]
    pub(crate) fn add_at(&mut self, row: usize, col: usize, value: T) {
        let n = self.dims.ncols();
        let slot = &mut self.values[row * n + col];
        *slot = slot.wrapping_add(value);
    }

    /// Scans for nonzero cells; the inverse of [`CooMatrix::to_dense`].
    pub fn to_coo(&self) -> CooMatrix<T> {
        let mut triplets = Vec::new();
        for c in 0..self.dims.ncols() {
            for r in 0..self.dims.nrows() {
                let v = self.get(r, c);
                if !v.is_zero() {
                    triplets.push(Triplet::new(r, c, v));
                }
            }
        }
        CooMatrix::from_canonical(self.dims, triplets)
    }

    /// Size in bytes of the dense representation.
    pub fn byte_size(dims: Dims) -> u128 {
        dims.cells() * T::SIZE as u128
    }

    /// Row-by-row dense matrix-vector product.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dims.ncols(), x.len())?;
        Ok((0..self.dims.nrows())
            .map(|r| {
                let row = &self.values[r * self.dims.ncols()..(r + 1) * self.dims.ncols()];
                row.iter()
                    .zip(x)
                    .fold(T::ZERO, |acc, (a, b)| acc.wrapping_add(a.wrapping_mul(*b)))
            })
            .collect())
    }

    /// Textbook triple-loop product.
    pub fn matmul(&self, rhs: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        check_len(self.dims.ncols(), rhs.dims.nrows())?;
        let dims = Dims::new(self.dims.nrows(), rhs.dims.ncols())?;
        let mut out = DenseMatrix::zeros(dims);
        for i in 0..dims.nrows() {
            for j in 0..dims.ncols() {
                let mut acc = T::ZERO;
                for k in 0..self.dims.ncols() {
                    acc = acc.wrapping_add(self.get(i, k).wrapping_mul(rhs.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: T) -> DenseMatrix<T> {
        DenseMatrix {
            dims: self.dims,
            values: self.values.iter().map(|v| v.wrapping_mul(s)).collect(),
        }
    }
}

impl<T: Value> PartialEq for DenseMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.same_bits(*b) || (a.is_zero() && b.is_zero()))
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
