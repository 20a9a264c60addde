//! Canonical coordinate (triplet) form.
//!
//! A [`CooMatrix`] is always canonical: triplets sorted by `(col, row)`, no
//! duplicate coordinates and no stored zeros. Every other format converts
//! through it.

use alloc::vec::Vec;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::value::{Value, ValueKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    nrows: usize,
    ncols: usize,
}

impl Dims {
    pub fn new(nrows: usize, ncols: usize) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return Err(Error::InvalidDims { nrows, ncols });
        }
        Ok(Dims { nrows, ncols })
    }

    #[inline]
    pub fn nrows(self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(self) -> usize {
        self.ncols
    }

    /// Number of cells, `nrows * ncols`.
    pub fn cells(self) -> u128 {
        self.nrows as u128 * self.ncols as u128
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triplet<T> {
    pub row: usize,
    pub col: usize,
    pub value: T,
}

impl<T> Triplet<T> {
    pub fn new(row: usize, col: usize, value: T) -> Self {
        Triplet { row, col, value }
    }
}

/// What to do with repeated coordinates during canonicalization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DuplicatePolicy {
    #[default]
    Sum,
    Reject,
}

#[derive(Clone, Debug)]
pub struct CooMatrix<T> {
    dims: Dims,
    triplets: Vec<Triplet<T>>,
}

impl<T: Value> CooMatrix<T> {
    pub fn empty(dims: Dims) -> Self {
        CooMatrix {
            dims,
            triplets: Vec::new(),
        }
    }

    /// Builds a canonical matrix from arbitrary triplets.
    ///
    /// Triplets are sorted by `(col, row)`, duplicates are summed (wrapping
    /// for integers) or rejected, and entries equal to zero are dropped,
    /// including those whose duplicates summed to zero.
    pub fn from_triplets(
        dims: Dims,
        mut triplets: Vec<Triplet<T>>,
        policy: DuplicatePolicy,
    ) -> Result<Self> {
        for t in &triplets {
            if t.row >= dims.nrows || t.col >= dims.ncols {
                return Err(Error::OutOfBounds {
                    row: t.row,
                    col: t.col,
                    nrows: dims.nrows,
                    ncols: dims.ncols,
                });
            }
        }
        triplets.sort_by_key(|t| (t.col, t.row));

        let mut out: Vec<Triplet<T>> = Vec::with_capacity(triplets.len());
        for t in triplets {
            match out.last_mut() {
                Some(last) if last.row == t.row && last.col == t.col => {
                    if policy == DuplicatePolicy::Reject {
                        return Err(Error::Duplicate {
                            row: t.row,
                            col: t.col,
                        });
                    }
                    last.value = last.value.wrapping_add(t.value);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.value.is_zero());
        Ok(CooMatrix {
            dims,
            triplets: out,
        })
    }

    /// Wraps triplets already known to be canonical.
    pub(crate) fn from_canonical(dims: Dims, triplets: Vec<Triplet<T>>) -> Self {
        debug_assert!(is_canonical(dims, &triplets));
        CooMatrix { dims, triplets }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn value_kind(&self) -> ValueKind {
        T::KIND
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn triplets(&self) -> &[Triplet<T>] {
        &self.triplets
    }

    pub fn into_triplets(self) -> Vec<Triplet<T>> {
        self.triplets
    }

    /// Triplets of column `col`, rows ascending.
    pub fn column(&self, col: usize) -> &[Triplet<T>] {
        let start = self.triplets.partition_point(|t| t.col < col);
        let end = self.triplets.partition_point(|t| t.col <= col);
        &self.triplets[start..end]
    }

    /// Iterates over the triplet slices of every column in order.
    pub fn columns(&self) -> impl Iterator<Item = &[Triplet<T>]> + '_ {
        let mut rest = &self.triplets[..];
        (0..self.dims.ncols).map(move |c| {
            let n = rest.iter().take_while(|t| t.col == c).count();
            let (head, tail) = rest.split_at(n);
            rest = tail;
            head
        })
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.dims);
        for t in &self.triplets {
            d.set(t.row, t.col, t.value);
        }
        d
    }
}

/// Bitwise equality: same dimensions and identical canonical triplets.
pub fn coo_equal<T: Value>(a: &CooMatrix<T>, b: &CooMatrix<T>) -> bool {
    a.dims == b.dims
        && a.triplets.len() == b.triplets.len()
        && a.triplets.iter().zip(&b.triplets).all(|(x, y)| {
            x.row == y.row && x.col == y.col && x.value.same_bits(y.value)
        })
}

impl<T: Value> PartialEq for CooMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        coo_equal(self, other)
    }
}

fn is_canonical<T: Value>(dims: Dims, triplets: &[Triplet<T>]) -> bool {
    triplets
        .iter()
        .all(|t| t.row < dims.nrows && t.col < dims.ncols && !t.value.is_zero())
        && triplets
            .windows(2)
            .all(|w| (w[0].col, w[0].row) < (w[1].col, w[1].row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn t(row: usize, col: usize, v: i32) -> Triplet<i32> {
        Triplet::new(row, col, v)
    }

    fn dims(r: usize, c: usize) -> Dims {
        Dims::new(r, c).unwrap()
    }

    #[test]
    fn duplicates_are_summed() {
        let m = CooMatrix::from_triplets(dims(1, 1), vec![t(0, 0, 5), t(0, 0, 3)], DuplicatePolicy::Sum)
            .unwrap();
        assert_eq!(m.triplets(), &[t(0, 0, 8)]);
    }

    #[test]
    fn duplicates_rejected_under_reject_policy() {
        let err = CooMatrix::from_triplets(dims(1, 1), vec![t(0, 0, 5), t(0, 0, 3)], DuplicatePolicy::Reject)
            .unwrap_err();
        assert_eq!(err, Error::Duplicate { row: 0, col: 0 });
    }

    #[test]
    fn explicit_zero_dropped() {
        let m = CooMatrix::from_triplets(dims(3, 2), vec![t(2, 1, 0)], DuplicatePolicy::Sum).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn duplicates_summing_to_zero_dropped() {
        let m = CooMatrix::from_triplets(dims(2, 2), vec![t(1, 1, 4), t(1, 1, -4), t(0, 0, 1)], DuplicatePolicy::Sum)
            .unwrap();
        assert_eq!(m.triplets(), &[t(0, 0, 1)]);
    }

    #[test]
    fn negative_zero_dropped() {
        let m = CooMatrix::from_triplets(
            dims(2, 2),
            vec![Triplet::new(0, 0, -0.0f32), Triplet::new(1, 0, 2.0)],
            DuplicatePolicy::Sum,
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn sorted_by_column_then_row() {
        let m = CooMatrix::from_triplets(dims(4, 1), vec![t(3, 0, 2), t(1, 0, 7)], DuplicatePolicy::Sum).unwrap();
        assert_eq!(m.triplets(), &[t(1, 0, 7), t(3, 0, 2)]);
        let m = CooMatrix::from_triplets(dims(3, 2), vec![t(0, 1, 5), t(2, 0, 4)], DuplicatePolicy::Sum).unwrap();
        assert_eq!(m.triplets(), &[t(2, 0, 4), t(0, 1, 5)]);
    }

    #[test]
    fn out_of_range_rejected() {
        let err = CooMatrix::from_triplets(dims(2, 2), vec![t(2, 0, 1)], DuplicatePolicy::Sum).unwrap_err();
        assert!(matches!(err, Error::OutOfBounds { row: 2, .. }));
        assert!(Dims::new(0, 3).is_err());
    }

    #[test]
    fn dense_views() {
        let e = CooMatrix::<i32>::empty(dims(2, 2)).to_dense();
        assert_eq!(e.values(), &[0, 0, 0, 0]);
        let m = CooMatrix::from_triplets(dims(2, 1), vec![t(1, 0, 9)], DuplicatePolicy::Sum).unwrap();
        assert_eq!(m.to_dense().values(), &[0, 9]);
        let id = CooMatrix::from_triplets(dims(2, 2), vec![t(0, 0, 1), t(1, 1, 1)], DuplicatePolicy::Sum).unwrap();
        assert_eq!(id.to_dense(), DenseMatrix::identity(2));
    }

    #[test]
    fn equality() {
        let id = CooMatrix::from_triplets(dims(2, 2), vec![t(0, 0, 1), t(1, 1, 1)], DuplicatePolicy::Sum).unwrap();
        let id2 = CooMatrix::from_triplets(dims(2, 2), vec![t(1, 1, 1), t(0, 0, 1)], DuplicatePolicy::Sum).unwrap();
        assert!(coo_equal(&id, &id));
        assert!(coo_equal(&id, &id2));
        assert!(!coo_equal(&id, &CooMatrix::empty(dims(2, 2))));
        assert!(!coo_equal(&CooMatrix::<i32>::empty(dims(2, 2)), &CooMatrix::empty(dims(2, 3))));
    }

    #[test]
    fn column_slices() {
        let m = CooMatrix::from_triplets(
            dims(3, 4),
            vec![t(0, 0, 1), t(2, 0, 1), t(1, 2, 3)],
            DuplicatePolicy::Sum,
        )
        .unwrap();
        let cols: Vec<usize> = m.columns().map(|c| c.len()).collect();
        assert_eq!(cols, vec![2, 0, 1, 0]);
        assert_eq!(m.column(2), &[t(1, 2, 3)]);
        assert!(m.column(3).is_empty());
    }
}
