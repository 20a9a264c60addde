//! Value-compressed sparse column storage.
//!
//! Each column keeps three arrays: its distinct values (ascending), how many
//! times each occurs, and the row indices grouped by value. Rows are
//! ascending within a group but the concatenated index array is generally
//! not sorted, so traversal within a column is value-major.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::coo::{CooMatrix, Dims, Triplet};
use crate::csc::{check_index_fit, CscMatrix};
use crate::dense::{check_len, DenseMatrix};
use crate::error::{Error, Result};
use crate::group::{is_canonical_order, rows_distinct, Grouped};
use crate::value::{IndexWidth, Value};

#[derive(Clone, Debug)]
pub struct VcscColumn<T> {
    values: Vec<T>,
    counts: Vec<usize>,
    indices: Vec<usize>,
}

impl<T: Value> VcscColumn<T> {
    pub fn empty() -> Self {
        VcscColumn {
            values: Vec::new(),
            counts: Vec::new(),
            indices: Vec::new(),
        }
    }

    /// Checks the per-column invariants: nonzero values in strictly
    /// ascending canonical order, positive counts summing to the index
    /// count, rows strictly ascending within each group.
    pub fn new(values: Vec<T>, counts: Vec<usize>, indices: Vec<usize>) -> Result<Self> {
        check_len(values.len(), counts.len())?;
        if !is_canonical_order(&values) {
            return Err(Error::InvalidStructure(
                "unique values must be nonzero and strictly ascending",
            ));
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::InvalidStructure("value counts must be positive"));
        }
        check_len(counts.iter().sum(), indices.len())?;
        let col = VcscColumn {
            values,
            counts,
            indices,
        };
        if col.groups().any(|(_, rows)| rows.windows(2).any(|w| w[0] >= w[1])) {
            return Err(Error::InvalidStructure("rows must increase within a value group"));
        }
        if !rows_distinct(col.indices.iter().copied()) {
            return Err(Error::InvalidStructure("a row appears under two values"));
        }
        Ok(col)
    }

    fn from_grouped(g: Grouped<T>) -> Self {
        VcscColumn {
            values: g.values,
            counts: g.counts,
            indices: g.indices,
        }
    }

    pub fn unique_values(&self) -> &[T] {
        &self.values
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn n_unique(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(value, rows)` per value group.
    pub fn groups(&self) -> impl Iterator<Item = (T, &[usize])> + '_ {
        let mut start = 0;
        self.values.iter().zip(&self.counts).map(move |(&v, &n)| {
            let rows = &self.indices[start..start + n];
            start += n;
            (v, rows)
        })
    }
}

#[derive(Clone, Debug)]
pub struct VcscMatrix<T> {
    dims: Dims,
    idx: IndexWidth,
    columns: Vec<VcscColumn<T>>,
}

impl<T: Value> VcscMatrix<T> {
    pub fn from_coo(m: &CooMatrix<T>) -> Result<Self> {
        Self::from_coo_with(m, IndexWidth::DEFAULT)
    }

    pub fn from_coo_with(m: &CooMatrix<T>, idx: IndexWidth) -> Result<Self> {
        check_index_fit(m.dims(), idx)?;
        let columns = m
            .columns()
            .map(|col| {
                VcscColumn::from_grouped(Grouped::from_entries(
                    col.iter().map(|t| (t.row, t.value)),
                ))
            })
            .collect();
        Ok(VcscMatrix {
            dims: m.dims(),
            idx,
            columns,
        })
    }

    /// Converts column by column without going through COO.
    pub fn from_csc(m: &CscMatrix<T>) -> Self {
        let columns = (0..m.dims().ncols())
            .map(|c| {
                let (rows, vals) = m.column(c);
                VcscColumn::from_grouped(Grouped::from_entries(
                    rows.iter().copied().zip(vals.iter().copied()),
                ))
            })
            .collect();
        VcscMatrix {
            dims: m.dims(),
            idx: m.index_width(),
            columns,
        }
    }

    pub fn from_columns(dims: Dims, idx: IndexWidth, columns: Vec<VcscColumn<T>>) -> Result<Self> {
        check_index_fit(dims, idx)?;
        check_len(dims.ncols(), columns.len())?;
        for col in &columns {
            if col.indices.iter().any(|&r| r >= dims.nrows()) {
                return Err(Error::InvalidStructure("row index out of range"));
            }
        }
        Ok(VcscMatrix { dims, idx, columns })
    }

    pub fn to_coo(&self) -> CooMatrix<T> {
        let mut triplets = Vec::with_capacity(self.nnz());
        let mut scratch: Vec<(usize, T)> = Vec::new();
        for (c, col) in self.columns.iter().enumerate() {
            scratch.clear();
            for (v, rows) in col.groups() {
                scratch.extend(rows.iter().map(|&r| (r, v)));
            }
            scratch.sort_unstable_by_key(|&(r, _)| r);
            triplets.extend(scratch.iter().map(|&(r, v)| Triplet::new(r, c, v)));
        }
        CooMatrix::from_canonical(self.dims, triplets)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn index_width(&self) -> IndexWidth {
        self.idx
    }

    pub fn columns(&self) -> &[VcscColumn<T>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(VcscColumn::nnz).sum()
    }

    /// Yields `(col, row, value)`: columns ascending, then value groups in
    /// stored order, rows ascending within a group.
    pub fn iter(&self) -> VcscIter<'_, T> {
        VcscIter {
            columns: &self.columns,
            col: 0,
            next_group: 0,
            pos: 0,
            left: 0,
            value: None,
        }
    }

    pub fn scalar_mul(&self, s: T) -> Result<Self> {
        self.scalar_mul_counted(s).map(|(m, _)| m)
    }

    /// Scalar multiply touching only the unique values; also returns how many
    /// multiplications were performed.
    ///
    /// If products collide, wrap to zero, or change order (negative
    /// scalars), the affected column is regrouped.
    pub fn scalar_mul_counted(&self, s: T) -> Result<(Self, u64)> {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut multiplies = 0u64;
        let columns = self
            .columns
            .iter()
            .map(|col| {
                let values: Vec<T> = col
                    .values
                    .iter()
                    .map(|v| {
                        multiplies += 1;
                        v.wrapping_mul(s)
                    })
                    .collect();
                if is_canonical_order(&values) {
                    VcscColumn {
                        values,
                        counts: col.counts.clone(),
                        indices: col.indices.clone(),
                    }
                } else {
                    regroup(col, &values)
                }
            })
            .collect();
        Ok((
            VcscMatrix {
                dims: self.dims,
                idx: self.idx,
                columns,
            },
            multiplies,
        ))
    }

    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dims.ncols(), x.len())?;
        let mut y = vec![T::ZERO; self.dims.nrows()];
        for (col, &xc) in self.columns.iter().zip(x) {
            for (v, rows) in col.groups() {
                let p = v.wrapping_mul(xc);
                for &r in rows {
                    y[r] = y[r].wrapping_add(p);
                }
            }
        }
        Ok(y)
    }

    pub fn spmm(&self, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        check_len(self.dims.ncols(), b.dims().nrows())?;
        let mut out = DenseMatrix::zeros(Dims::new(self.dims.nrows(), b.dims().ncols())?);
        for j in 0..b.dims().ncols() {
            for (c, col) in self.columns.iter().enumerate() {
                let bc = b.get(c, j);
                for (v, rows) in col.groups() {
                    let p = v.wrapping_mul(bc);
                    for &r in rows {
                        out.add_at(r, j, p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Per column: unique values, counts and indices, plus one length
    /// field (the unique-value count) at index width.
    pub fn byte_size(&self) -> u64 {
        let idx = self.idx.bytes() as u64;
        let val = T::SIZE as u64;
        self.columns
            .iter()
            .map(|c| {
                let u = c.n_unique() as u64;
                val * u + idx * u + idx * c.nnz() as u64 + idx
            })
            .sum()
    }
}

fn regroup<T: Value>(col: &VcscColumn<T>, new_values: &[T]) -> VcscColumn<T> {
    let entries = col
        .groups()
        .zip(new_values)
        .flat_map(|((_, rows), &v)| rows.iter().map(move |&r| (r, v)));
    VcscColumn::from_grouped(Grouped::from_entries(entries))
}

pub struct VcscIter<'a, T> {
    columns: &'a [VcscColumn<T>],
    col: usize,
    next_group: usize,
    pos: usize,
    left: usize,
    value: Option<T>,
}

impl<T: Value> Iterator for VcscIter<'_, T> {
    type Item = (usize, usize, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let column = self.columns.get(self.col)?;
            if self.left > 0 {
                self.left -= 1;
                let row = column.indices[self.pos];
                self.pos += 1;
                return Some((self.col, row, self.value.unwrap()));
            }
            if let Some(&n) = column.counts.get(self.next_group) {
                self.value = Some(column.values[self.next_group]);
                self.left = n;
                self.next_group += 1;
                continue;
            }
            self.col += 1;
            self.next_group = 0;
            self.pos = 0;
        }
    }
}

impl<T: Value> PartialEq for VcscColumn<T> {
    fn eq(&self, other: &Self) -> bool {
        self.counts == other.counts
            && self.indices == other.indices
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.canonical_cmp(b) == Ordering::Equal)
    }
}

impl<T: Value> PartialEq for VcscMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.idx == other.idx && self.columns == other.columns
    }
}
