//! Baseline compressed sparse column storage and its naive kernels.

use alloc::vec::Vec;

use crate::coo::{CooMatrix, Dims, Triplet};
use crate::dense::{check_len, DenseMatrix};
use crate::error::{Error, Result};
use crate::value::{IndexWidth, Value};

/// Three-array CSC: column pointers, row indices, values.
#[derive(Clone, Debug)]
pub struct CscMatrix<T> {
    dims: Dims,
    idx: IndexWidth,
    col_ptrs: Vec<usize>,
    row_indices: Vec<usize>,
    values: Vec<T>,
}

pub(crate) fn check_index_fit(dims: Dims, idx: IndexWidth) -> Result<()> {
    idx.check("row count", dims.nrows() as u64)
}

impl<T: Value> CscMatrix<T> {
    /// Builds with the default 4-byte index width.
    pub fn from_coo(m: &CooMatrix<T>) -> Result<Self> {
        Self::from_coo_with(m, IndexWidth::DEFAULT)
    }

    pub fn from_coo_with(m: &CooMatrix<T>, idx: IndexWidth) -> Result<Self> {
        let dims = m.dims();
        check_index_fit(dims, idx)?;
        idx.check("nonzero count", m.nnz() as u64)?;
        let mut col_ptrs = Vec::with_capacity(dims.ncols() + 1);
        let mut row_indices = Vec::with_capacity(m.nnz());
        let mut values = Vec::with_capacity(m.nnz());
        col_ptrs.push(0);
        for column in m.columns() {
            for t in column {
                row_indices.push(t.row);
                values.push(t.value);
            }
            col_ptrs.push(row_indices.len());
        }
        Ok(CscMatrix {
            dims,
            idx,
            col_ptrs,
            row_indices,
            values,
        })
    }

    /// Assembles a matrix from raw arrays, checking every invariant.
    pub fn from_parts(
        dims: Dims,
        idx: IndexWidth,
        col_ptrs: Vec<usize>,
        row_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        check_index_fit(dims, idx)?;
        check_len(dims.ncols() + 1, col_ptrs.len())?;
        check_len(row_indices.len(), values.len())?;
        if col_ptrs[0] != 0 || col_ptrs[dims.ncols()] != row_indices.len() {
            return Err(Error::InvalidStructure("column pointers must span 0..nnz"));
        }
        idx.check("nonzero count", row_indices.len() as u64)?;
        for w in col_ptrs.windows(2) {
            if w[0] > w[1] || w[1] > row_indices.len() {
                return Err(Error::InvalidStructure("column pointers must be non-decreasing"));
            }
            let rows = &row_indices[w[0]..w[1]];
            if rows.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidStructure("row indices must increase within a column"));
            }
            if rows.last().is_some_and(|&r| r >= dims.nrows()) {
                return Err(Error::InvalidStructure("row index out of range"));
            }
        }
        if values.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidStructure("explicit zero value"));
        }
        Ok(CscMatrix {
            dims,
            idx,
            col_ptrs,
            row_indices,
            values,
        })
    }

    pub fn to_coo(&self) -> CooMatrix<T> {
        CooMatrix::from_canonical(
            self.dims,
            self.iter().map(|(c, r, v)| Triplet::new(r, c, v)).collect(),
        )
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn index_width(&self) -> IndexWidth {
        self.idx
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptrs(&self) -> &[usize] {
        &self.col_ptrs
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Row indices and values of one column.
    pub fn column(&self, col: usize) -> (&[usize], &[T]) {
        let (a, b) = (self.col_ptrs[col], self.col_ptrs[col + 1]);
        (&self.row_indices[a..b], &self.values[a..b])
    }

    /// Yields `(col, row, value)` column by column, rows ascending.
    pub fn iter(&self) -> CscIter<'_, T> {
        CscIter {
            m: self,
            col: 0,
            pos: 0,
        }
    }

    /// Multiplies every stored value by `s`.
    ///
    /// Products that wrap (or underflow) to zero are dropped so the result
    /// never stores a structural zero.
    pub fn scalar_mul(&self, s: T) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let values: Vec<T> = self.values.iter().map(|v| v.wrapping_mul(s)).collect();
        if !values.iter().any(|v| v.is_zero()) {
            return Ok(CscMatrix {
                values,
                ..self.clone()
            });
        }
        let mut col_ptrs = Vec::with_capacity(self.col_ptrs.len());
        let mut row_indices = Vec::new();
        let mut kept = Vec::new();
        col_ptrs.push(0);
        for w in self.col_ptrs.windows(2) {
            for k in w[0]..w[1] {
                if !values[k].is_zero() {
                    row_indices.push(self.row_indices[k]);
                    kept.push(values[k]);
                }
            }
            col_ptrs.push(kept.len());
        }
        Ok(CscMatrix {
            dims: self.dims,
            idx: self.idx,
            col_ptrs,
            row_indices,
            values: kept,
        })
    }

    /// `y = A x`, accumulating column by column.
    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dims.ncols(), x.len())?;
        let mut y = alloc::vec![T::ZERO; self.dims.nrows()];
        for (c, &xc) in x.iter().enumerate() {
            let (rows, vals) = self.column(c);
            for (&r, &v) in rows.iter().zip(vals) {
                y[r] = y[r].wrapping_add(v.wrapping_mul(xc));
            }
        }
        Ok(y)
    }

    /// `C = A B`, the SpMV loop repeated per output column.
    pub fn spmm(&self, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        check_len(self.dims.ncols(), b.dims().nrows())?;
        let mut out = DenseMatrix::zeros(Dims::new(self.dims.nrows(), b.dims().ncols())?);
        for j in 0..b.dims().ncols() {
            for c in 0..self.dims.ncols() {
                let bc = b.get(c, j);
                let (rows, vals) = self.column(c);
                for (&r, &v) in rows.iter().zip(vals) {
                    out.add_at(r, j, v.wrapping_mul(bc));
                }
            }
        }
        Ok(out)
    }

    /// Storage in bytes: values, row indices and `ncols + 1` column pointers.
    pub fn byte_size(&self) -> u64 {
        let nnz = self.nnz() as u64;
        let idx = self.idx.bytes() as u64;
        T::SIZE as u64 * nnz + idx * nnz + idx * (self.dims.ncols() as u64 + 1)
    }
}

/// Bitwise equality of values.
impl<T: Value> PartialEq for CscMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.idx == other.idx
            && self.col_ptrs == other.col_ptrs
            && self.row_indices == other.row_indices
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.same_bits(*b))
    }
}

pub struct CscIter<'a, T> {
    m: &'a CscMatrix<T>,
    col: usize,
    pos: usize,
}

impl<T: Value> Iterator for CscIter<'_, T> {
    type Item = (usize, usize, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.pos >= self.m.values.len() {
            return None;
        }
        while self.m.col_ptrs[self.col + 1] <= self.pos {
            self.col += 1;
        }
        let item = (self.col, self.m.row_indices[self.pos], self.m.values[self.pos]);
        self.pos += 1;
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.m.values.len() - self.pos;
        (n, Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coo::DuplicatePolicy;
    use alloc::vec;

    fn coo(r: usize, c: usize, t: &[(usize, usize, i32)]) -> CooMatrix<i32> {
        CooMatrix::from_triplets(
            Dims::new(r, c).unwrap(),
            t.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect(),
            DuplicatePolicy::Sum,
        )
        .unwrap()
    }

    #[test]
    fn layout_examples() {
        let m = CscMatrix::from_coo(&coo(4, 1, &[(1, 0, 7), (3, 0, 2)])).unwrap();
        assert_eq!(m.col_ptrs(), &[0, 2]);
        assert_eq!(m.row_indices(), &[1, 3]);
        assert_eq!(m.values(), &[7, 2]);

        let m = CscMatrix::from_coo(&coo(3, 2, &[])).unwrap();
        assert_eq!(m.col_ptrs(), &[0, 0, 0]);
        assert_eq!(m.byte_size(), 12);

        let m = CscMatrix::from_coo(&coo(3, 2, &[(0, 1, 5), (2, 0, 4)])).unwrap();
        assert_eq!(m.col_ptrs(), &[0, 1, 2]);
        assert_eq!(m.row_indices(), &[2, 0]);
        assert_eq!(m.values(), &[4, 5]);
    }

    #[test]
    fn iterate_identity() {
        let id = coo(2, 2, &[(0, 0, 1), (1, 1, 1)]);
        let m = CscMatrix::from_coo(&id).unwrap();
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 1)]);
        assert_eq!(m.to_coo(), id);
        assert_eq!(CscMatrix::from_coo(&coo(2, 3, &[])).unwrap().iter().count(), 0);
    }

    #[test]
    fn scalar_multiply() {
        let id = CscMatrix::from_coo(&coo(2, 2, &[(0, 0, 1), (1, 1, 1)])).unwrap();
        assert_eq!(id.scalar_mul(3).unwrap().values(), &[3, 3]);
        assert_eq!(id.scalar_mul(1).unwrap().values(), id.values());
        assert_eq!(id.scalar_mul(0).unwrap_err(), Error::ZeroScalar);
    }

    #[test]
    fn scalar_multiply_drops_wrapped_zeros() {
        let m = CooMatrix::from_triplets(
            Dims::new(3, 1).unwrap(),
            vec![Triplet::new(0, 0, 128u8), Triplet::new(2, 0, 3u8)],
            DuplicatePolicy::Sum,
        )
        .unwrap();
        let s = CscMatrix::from_coo(&m).unwrap().scalar_mul(2).unwrap();
        assert_eq!(s.col_ptrs(), &[0, 1]);
        assert_eq!(s.row_indices(), &[2]);
        assert_eq!(s.values(), &[6]);
    }

    #[test]
    fn spmv_and_spmm() {
        let id = CscMatrix::from_coo(&coo(2, 2, &[(0, 0, 1), (1, 1, 1)])).unwrap();
        assert_eq!(id.spmv(&[4, 5]).unwrap(), vec![4, 5]);
        assert!(id.spmv(&[1]).is_err());
        let z = CscMatrix::from_coo(&coo(3, 2, &[])).unwrap();
        assert_eq!(z.spmv(&[4, 5]).unwrap(), vec![0, 0, 0]);

        let a = coo(3, 2, &[(0, 0, 2), (2, 0, -1), (1, 1, 5)]);
        let csc = CscMatrix::from_coo(&a).unwrap();
        assert_eq!(csc.spmm(&DenseMatrix::identity(2)).unwrap(), a.to_dense());
        let zero = DenseMatrix::zeros(Dims::new(2, 4).unwrap());
        assert_eq!(
            csc.spmm(&zero).unwrap(),
            DenseMatrix::zeros(Dims::new(3, 4).unwrap())
        );
    }

    #[test]
    fn unit_vectors_pick_columns() {
        let a = coo(3, 3, &[(0, 0, 2), (2, 0, -1), (1, 1, 5), (0, 2, 9), (2, 2, 4)]);
        let csc = CscMatrix::from_coo(&a).unwrap();
        let dense = a.to_dense();
        for j in 0..3 {
            let mut e = vec![0; 3];
            e[j] = 1;
            let col: Vec<i32> = (0..3).map(|r| dense.get(r, j)).collect();
            assert_eq!(csc.spmv(&e).unwrap(), col);
        }
    }

    #[test]
    fn index_width_enforced() {
        let m = CooMatrix::<i32>::empty(Dims::new(300, 1).unwrap());
        assert!(CscMatrix::from_coo_with(&m, IndexWidth::new(1).unwrap()).is_err());
        assert!(CscMatrix::from_coo_with(&m, IndexWidth::new(2).unwrap()).is_ok());
    }

    #[test]
    fn from_parts_validates() {
        let d = Dims::new(3, 2).unwrap();
        let idx = IndexWidth::DEFAULT;
        assert!(CscMatrix::from_parts(d, idx, vec![0, 1, 2], vec![2, 0], vec![4, 5]).is_ok());
        assert!(CscMatrix::<i32>::from_parts(d, idx, vec![0, 2, 1], vec![2, 0], vec![4, 5]).is_err());
        assert!(CscMatrix::<i32>::from_parts(d, idx, vec![0, 2, 2], vec![2, 0], vec![4, 5]).is_err());
        assert!(CscMatrix::<i32>::from_parts(d, idx, vec![0, 1, 2], vec![3, 0], vec![4, 5]).is_err());
        assert!(CscMatrix::<i32>::from_parts(d, idx, vec![0, 1, 2], vec![2, 0], vec![0, 5]).is_err());
        assert!(CscMatrix::<i32>::from_parts(d, idx, vec![0, 7, 2], vec![2, 0], vec![4, 5]).is_err());
    }
}
