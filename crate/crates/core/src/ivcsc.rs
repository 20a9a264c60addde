//! Index-and-value-compressed sparse column storage.
//!
//! Every column is one byte stream made of sections, one per distinct value:
//!
//! ```text
//! [value: SIZE bytes LE] [width: 1 byte] [first row] [delta]* [0]
//! ```
//!
//! The first row index is stored as is, each following row as its positive
//! difference from the previous one, and a single all-zero entry terminates
//! the section. All entries of a section share the smallest byte width that
//! holds its largest entry. Since a section always holds at least one row,
//! the first entry is read unconditionally and a zero there is an ordinary
//! row 0, never a delimiter.

use alloc::vec;
use alloc::vec::Vec;
use core::marker::PhantomData;

use crate::coo::{CooMatrix, Dims, Triplet};
use crate::dense::{check_len, DenseMatrix};
use crate::error::{Error, Result};
use crate::group::{is_canonical_order, rows_distinct, Grouped};
use crate::value::Value;
use crate::vcsc::VcscMatrix;

/// Bytes of the per-column length field.
pub const LEN_FIELD_BYTES: u64 = 8;

/// Smallest byte width `w` (at least 1) with `max_entry < 256^w`.
pub fn index_width(max_entry: u64) -> u8 {
    let significant_bits = 64 - max_entry.leading_zeros();
    (significant_bits.div_ceil(8)).max(1) as u8
}

#[inline]
fn write_entry(out: &mut Vec<u8>, value: u64, width: u8) {
    out.extend_from_slice(&value.to_le_bytes()[..width as usize]);
}

#[inline]
fn read_entry(bytes: &[u8], width: u8) -> u64 {
    let mut buf = [0u8; 8];
    buf[..width as usize].copy_from_slice(&bytes[..width as usize]);
    u64::from_le_bytes(buf)
}

/// A delta-encoded, byte-packed run of row indices plus its delimiter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBlock {
    width: u8,
    payload: Vec<u8>,
}

impl IndexBlock {
    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }
}

fn block_width(rows: &[usize]) -> u8 {
    let max_delta = rows.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    index_width(max_delta.max(rows[0]) as u64)
}

fn write_block(out: &mut Vec<u8>, rows: &[usize], width: u8) {
    let mut prev = rows[0];
    write_entry(out, prev as u64, width);
    for &r in &rows[1..] {
        write_entry(out, (r - prev) as u64, width);
        prev = r;
    }
    write_entry(out, 0, width);
}

/// Encodes a nonempty, strictly increasing row sequence.
pub fn encode_index_block(rows: &[usize]) -> Result<IndexBlock> {
    if rows.is_empty() || rows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndexSequence);
    }
    let width = block_width(rows);
    let mut payload = Vec::with_capacity((rows.len() + 1) * width as usize);
    write_block(&mut payload, rows, width);
    Ok(IndexBlock { width, payload })
}

/// Decodes one block from the front of `bytes`, returning the rows and the
/// number of bytes consumed (delimiter included). Rows must stay below
/// `nrows`.
pub fn decode_index_block(width: u8, bytes: &[u8], nrows: usize) -> Result<(Vec<usize>, usize)> {
    if !(1..=8).contains(&width) {
        return Err(Error::MalformedStream("index width outside 1..=8"));
    }
    let w = width as usize;
    let mut rows = Vec::new();
    let mut pos = 0;
    let mut row: u64 = 0;
    loop {
        let entry = bytes
            .get(pos..pos + w)
            .map(|b| read_entry(b, width))
            .ok_or(Error::MalformedStream("truncated index block"))?;
        pos += w;
        if rows.is_empty() {
            row = entry;
        } else if entry == 0 {
            return Ok((rows, pos));
        } else {
            row = row
                .checked_add(entry)
                .ok_or(Error::MalformedStream("row index overflow"))?;
        }
        if row >= nrows as u64 {
            return Err(Error::MalformedStream("row index beyond matrix height"));
        }
        rows.push(row as usize);
    }
}

fn append_section<T: Value>(out: &mut Vec<u8>, value: T, rows: &[usize]) {
    let width = block_width(rows);
    value.write_le(out);
    out.push(width);
    write_block(out, rows, width);
}

/// One decoded section of a column stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Section<T> {
    pub value: T,
    pub width: u8,
    pub rows: Vec<usize>,
}

/// Fully validates and decodes a column stream. Rejects anything the
/// encoder would not produce: zero or out-of-order values, non-minimal
/// widths, rows outside `nrows`, truncation.
pub fn decode_column<T: Value>(data: &[u8], nrows: usize) -> Result<Vec<Section<T>>> {
    let mut sections: Vec<Section<T>> = Vec::new();
    let mut pos = 0;
    while pos < data.len() {
        let header = data
            .get(pos..pos + T::SIZE + 1)
            .ok_or(Error::MalformedStream("truncated section header"))?;
        let value = T::read_le(header);
        let width = header[T::SIZE];
        pos += T::SIZE + 1;
        let (rows, used) = decode_index_block(width, &data[pos..], nrows)?;
        pos += used;
        if block_width(&rows) != width {
            return Err(Error::MalformedStream("index width is not minimal"));
        }
        sections.push(Section { value, width, rows });
    }
    let values: Vec<T> = sections.iter().map(|s| s.value).collect();
    if !is_canonical_order(&values) {
        return Err(Error::MalformedStream(
            "section values must be nonzero and strictly ascending",
        ));
    }
    if !rows_distinct(sections.iter().flat_map(|s| s.rows.iter().copied())) {
        return Err(Error::MalformedStream("a row appears under two values"));
    }
    Ok(sections)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IvcscColumn {
    data: Vec<u8>,
}

impl IvcscColumn {
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Length of the data stream, the value held by the length field.
    pub fn byte_len(&self) -> u64 {
        self.data.len() as u64
    }

    fn encode<T: Value>(g: &Grouped<T>) -> Self {
        let mut data = Vec::new();
        for (v, rows) in g.groups() {
            append_section(&mut data, v, rows);
        }
        IvcscColumn { data }
    }
}

#[derive(Clone, Debug)]
pub struct IvcscMatrix<T> {
    dims: Dims,
    columns: Vec<IvcscColumn>,
    nnz: usize,
    _value: PhantomData<T>,
}

impl<T: Value> IvcscMatrix<T> {
    pub fn from_coo(m: &CooMatrix<T>) -> Self {
        let columns = m
            .columns()
            .map(|col| IvcscColumn::encode(&Grouped::from_entries(col.iter().map(|t| (t.row, t.value)))))
            .collect();
        IvcscMatrix {
            dims: m.dims(),
            columns,
            nnz: m.nnz(),
            _value: PhantomData,
        }
    }

    pub fn from_vcsc(m: &VcscMatrix<T>) -> Self {
        let columns = m
            .columns()
            .iter()
            .map(|col| {
                let mut data = Vec::new();
                for (v, rows) in col.groups() {
                    append_section(&mut data, v, rows);
                }
                IvcscColumn { data }
            })
            .collect();
        IvcscMatrix {
            dims: m.dims(),
            columns,
            nnz: m.nnz(),
            _value: PhantomData,
        }
    }

    /// Builds from raw column streams, validating each one.
    pub fn from_columns(dims: Dims, columns: Vec<Vec<u8>>) -> Result<Self> {
        check_len(dims.ncols(), columns.len())?;
        let mut nnz = 0;
        for data in &columns {
            nnz += decode_column::<T>(data, dims.nrows())?
                .iter()
                .map(|s| s.rows.len())
                .sum::<usize>();
        }
        Ok(IvcscMatrix {
            dims,
            columns: columns.into_iter().map(|data| IvcscColumn { data }).collect(),
            nnz,
            _value: PhantomData,
        })
    }

    pub fn to_coo(&self) -> CooMatrix<T> {
        fn flush<T: Value>(col: usize, scratch: &mut Vec<(usize, T)>, out: &mut Vec<Triplet<T>>) {
            scratch.sort_unstable_by_key(|&(r, _)| r);
            out.extend(scratch.drain(..).map(|(r, v)| Triplet::new(r, col, v)));
        }
        let mut triplets = Vec::with_capacity(self.nnz);
        let mut scratch: Vec<(usize, T)> = Vec::new();
        let mut current = 0;
        for (c, r, v) in self.iter() {
            if c != current {
                flush(current, &mut scratch, &mut triplets);
                current = c;
            }
            scratch.push((r, v));
        }
        flush(current, &mut scratch, &mut triplets);
        CooMatrix::from_canonical(self.dims, triplets)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn columns(&self) -> &[IvcscColumn] {
        &self.columns
    }

    /// Decoded sections of one column.
    pub fn sections(&self, col: usize) -> Vec<Section<T>> {
        decode_column(&self.columns[col].data, self.dims.nrows()).expect("validated at construction")
    }

    /// Same emission order as the VCSC iterator of the equivalent matrix.
    pub fn iter(&self) -> IvcscIter<'_, T> {
        IvcscIter {
            columns: &self.columns,
            col: 0,
            pos: 0,
            in_section: false,
            width: 1,
            row: 0,
            value: T::ZERO,
        }
    }

    pub fn scalar_mul(&self, s: T) -> Result<Self> {
        self.scalar_mul_counted(s).map(|(m, _)| m)
    }

    /// Rewrites the value bytes of every section, walking the index
    /// payloads to find the next section. Columns whose products collide,
    /// vanish or reorder are re-encoded.
    pub fn scalar_mul_counted(&self, s: T) -> Result<(Self, u64)> {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut multiplies = 0u64;
        let mut nnz = 0;
        let mut columns = Vec::with_capacity(self.columns.len());
        let mut products: Vec<T> = Vec::new();
        let mut bytes = Vec::with_capacity(T::SIZE);
        for col in &self.columns {
            let mut data = col.data.clone();
            products.clear();
            let mut col_nnz = 0;
            let mut pos = 0;
            while pos < data.len() {
                let v = T::read_le(&data[pos..]).wrapping_mul(s);
                multiplies += 1;
                products.push(v);
                bytes.clear();
                v.write_le(&mut bytes);
                data[pos..pos + T::SIZE].copy_from_slice(&bytes);
                pos += T::SIZE;
                let w = data[pos] as usize;
                pos += 1 + w;
                col_nnz += 1;
                while data[pos..pos + w].iter().any(|&b| b != 0) {
                    pos += w;
                    col_nnz += 1;
                }
                pos += w;
            }
            if is_canonical_order(&products) {
                nnz += col_nnz;
                columns.push(IvcscColumn { data });
            } else {
                let g = Grouped::from_entries(
                    decode_column_unchecked::<T>(&data)
                        .into_iter()
                        .flat_map(|(v, rows)| rows.into_iter().map(move |r| (r, v))),
                );
                nnz += g.indices.len();
                columns.push(IvcscColumn::encode(&g));
            }
        }
        let out = IvcscMatrix {
            dims: self.dims,
            columns,
            nnz,
            _value: PhantomData,
        };
        Ok((out, multiplies))
    }

    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        check_len(self.dims.ncols(), x.len())?;
        let mut y = vec![T::ZERO; self.dims.nrows()];
        for (c, r, v) in self.iter() {
            y[r] = y[r].wrapping_add(v.wrapping_mul(x[c]));
        }
        Ok(y)
    }

    pub fn spmm(&self, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        check_len(self.dims.ncols(), b.dims().nrows())?;
        let mut out = DenseMatrix::zeros(Dims::new(self.dims.nrows(), b.dims().ncols())?);
        for j in 0..b.dims().ncols() {
            for (c, r, v) in self.iter() {
                out.add_at(r, j, v.wrapping_mul(b.get(c, j)));
            }
        }
        Ok(out)
    }

    /// Per column: the 8-byte length field plus the stream itself.
    pub fn byte_size(&self) -> u64 {
        self.columns.iter().map(|c| LEN_FIELD_BYTES + c.byte_len()).sum()
    }
}

/// Decodes a stream produced by this module without validation, keeping
/// whatever (possibly zero or unordered) values it holds.
fn decode_column_unchecked<T: Value>(data: &[u8]) -> Vec<(T, Vec<usize>)> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < data.len() {
        let value = T::read_le(&data[pos..]);
        let width = data[pos + T::SIZE];
        pos += T::SIZE + 1;
        let (rows, used) = decode_index_block(width, &data[pos..], usize::MAX).expect("well-formed stream");
        pos += used;
        out.push((value, rows));
    }
    out
}

pub struct IvcscIter<'a, T> {
    columns: &'a [IvcscColumn],
    col: usize,
    pos: usize,
    in_section: bool,
    width: u8,
    row: usize,
    value: T,
}

impl<T: Value> Iterator for IvcscIter<'_, T> {
    type Item = (usize, usize, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let data = &self.columns.get(self.col)?.data;
            if self.in_section {
                let entry = read_entry(&data[self.pos..], self.width) as usize;
                self.pos += self.width as usize;
                if entry == 0 {
                    self.in_section = false;
                    continue;
                }
                self.row += entry;
                return Some((self.col, self.row, self.value));
            }
            if self.pos < data.len() {
                self.value = T::read_le(&data[self.pos..]);
                self.width = data[self.pos + T::SIZE];
                self.pos += T::SIZE + 1;
                self.row = read_entry(&data[self.pos..], self.width) as usize;
                self.pos += self.width as usize;
                self.in_section = true;
                return Some((self.col, self.row, self.value));
            }
            self.col += 1;
            self.pos = 0;
        }
    }
}

impl<T: Value> PartialEq for IvcscMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.columns == other.columns
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coo::DuplicatePolicy;

    #[test]
    fn width_boundaries() {
        assert_eq!(index_width(0), 1);
        assert_eq!(index_width(255), 1);
        assert_eq!(index_width(256), 2);
        assert_eq!(index_width(65535), 2);
        assert_eq!(index_width(70000), 3);
        assert_eq!(index_width(u64::MAX), 8);
        assert_eq!(index_width(1 << 56), 8);
        assert_eq!(index_width((1 << 56) - 1), 7);
    }

    #[test]
    fn block_examples() {
        let b = encode_index_block(&[5, 9, 12]).unwrap();
        assert_eq!((b.width(), b.payload()), (1, &[5, 4, 3, 0][..]));
        let b = encode_index_block(&[0]).unwrap();
        assert_eq!((b.width(), b.payload()), (1, &[0, 0][..]));
        let b = encode_index_block(&[0, 300]).unwrap();
        assert_eq!((b.width(), b.payload()), (2, &[0, 0, 0x2c, 0x01, 0, 0][..]));
    }

    #[test]
    fn block_decodes() {
        for rows in [&[5usize, 9, 12][..], &[0][..], &[0, 300][..]] {
            let b = encode_index_block(rows).unwrap();
            let (got, used) = decode_index_block(b.width(), b.payload(), 1000).unwrap();
            assert_eq!(got, rows);
            assert_eq!(used, b.payload().len());
        }
    }

    #[test]
    fn block_errors() {
        assert_eq!(encode_index_block(&[]).unwrap_err(), Error::InvalidIndexSequence);
        assert_eq!(encode_index_block(&[3, 3]).unwrap_err(), Error::InvalidIndexSequence);
        assert!(decode_index_block(1, &[5, 4, 3], 100).is_err());
        assert!(decode_index_block(1, &[5, 4, 3, 0], 12).is_err());
        assert!(decode_index_block(0, &[0, 0], 12).is_err());
        assert!(decode_index_block(9, &[0; 32], 12).is_err());
    }

    fn two_section_column() -> CooMatrix<u8> {
        CooMatrix::from_triplets(
            Dims::new(8, 1).unwrap(),
            [(0, 3), (2, 3), (7, 3), (5, 7)]
                .iter()
                .map(|&(r, v)| Triplet::new(r, 0, v))
                .collect(),
            DuplicatePolicy::Reject,
        )
        .unwrap()
    }

    #[test]
    fn column_layout() {
        let m = IvcscMatrix::from_coo(&two_section_column());
        let c = &m.columns()[0];
        assert_eq!(c.data(), &[3, 1, 0, 2, 5, 0, 7, 1, 5, 0]);
        assert_eq!(m.byte_size(), 18);
        assert_eq!(m.to_coo(), two_section_column());
        let sections = m.sections(0);
        assert_eq!(sections[0].rows, vec![0, 2, 7]);
        assert_eq!(sections[1].rows, vec![5]);
    }

    #[test]
    fn iterate() {
        let m = IvcscMatrix::from_coo(&two_section_column());
        let got: Vec<_> = m.iter().collect();
        assert_eq!(got, vec![(0, 0, 3), (0, 2, 3), (0, 7, 3), (0, 5, 7)]);

        let one = CooMatrix::from_triplets(
            Dims::new(13, 2).unwrap(),
            [5, 9, 12].iter().map(|&r| Triplet::new(r, 1, 7i16)).collect(),
            DuplicatePolicy::Reject,
        )
        .unwrap();
        let got: Vec<_> = IvcscMatrix::from_coo(&one).iter().collect();
        assert_eq!(got, vec![(1, 5, 7), (1, 9, 7), (1, 12, 7)]);

        let empty = IvcscMatrix::from_coo(&CooMatrix::<f64>::empty(Dims::new(4, 3).unwrap()));
        assert_eq!(empty.iter().count(), 0);
        assert!(empty.columns().iter().all(|c| c.byte_len() == 0));
        assert_eq!(empty.byte_size(), 24);
    }

    #[test]
    fn float_column_size() {
        let coo = CooMatrix::from_triplets(
            Dims::new(8, 1).unwrap(),
            [(0, 3.0f32), (2, 3.0), (7, 3.0), (5, 7.0)]
                .iter()
                .map(|&(r, v)| Triplet::new(r, 0, v))
                .collect(),
            DuplicatePolicy::Reject,
        )
        .unwrap();
        assert_eq!(IvcscMatrix::from_coo(&coo).byte_size(), 24);
    }

    #[test]
    fn vcsc_path_matches() {
        let coo = two_section_column();
        let via = IvcscMatrix::from_vcsc(&VcscMatrix::from_coo(&coo).unwrap());
        assert_eq!(via, IvcscMatrix::from_coo(&coo));
    }

    #[test]
    fn scalar_multiply() {
        let m = IvcscMatrix::from_coo(&two_section_column());
        assert_eq!(m.scalar_mul(1).unwrap(), m);
        let (s, n) = m.scalar_mul_counted(2).unwrap();
        assert_eq!(n, 2);
        assert_eq!(s.columns()[0].data(), &[6, 1, 0, 2, 5, 0, 14, 1, 5, 0]);
        assert_eq!(m.scalar_mul(0).unwrap_err(), Error::ZeroScalar);
    }

    #[test]
    fn scalar_multiply_reencodes_on_collision() {
        // 3*128 and 7*128 both wrap to 128 in u8
        let m = IvcscMatrix::from_coo(&two_section_column());
        let s = m.scalar_mul(128).unwrap();
        assert_eq!(s.nnz(), 4);
        assert_eq!(s.columns()[0].data(), &[128, 1, 0, 2, 3, 2, 0]);
        assert_eq!(s.to_coo(), two_section_column().to_dense().scale(128).to_coo());
    }

    #[test]
    fn scalar_multiply_drops_vanishing_values() {
        let coo = CooMatrix::from_triplets(
            Dims::new(4, 1).unwrap(),
            vec![Triplet::new(0, 0, 2u8), Triplet::new(3, 0, 1u8)],
            DuplicatePolicy::Reject,
        )
        .unwrap();
        let s = IvcscMatrix::from_coo(&coo).scalar_mul(128).unwrap();
        assert_eq!(s.nnz(), 1);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(0, 3, 128)]);
    }

    #[test]
    fn kernels() {
        let id = IvcscMatrix::from_coo(&DenseMatrix::<i64>::identity(3).to_coo());
        assert_eq!(id.spmv(&[4, 5, 6]).unwrap(), vec![4, 5, 6]);
        assert!(id.spmv(&[1]).is_err());
        let b = DenseMatrix::from_row_major(Dims::new(3, 2).unwrap(), vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(id.spmm(&b).unwrap(), b);
    }

    #[test]
    fn from_columns_validates() {
        let d = Dims::new(8, 1).unwrap();
        let good = vec![3, 1, 0, 2, 5, 0, 7, 1, 5, 0];
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![good.clone()]).is_ok());
        // values out of order
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![vec![7, 1, 5, 0, 3, 1, 0, 2, 5, 0]]).is_err());
        // zero value
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![vec![0, 1, 5, 0]]).is_err());
        // non-minimal width
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![vec![3, 2, 5, 0, 0, 0]]).is_err());
        // truncated
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![good[..9].to_vec()]).is_err());
        // row beyond height
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![vec![3, 1, 8, 0]]).is_err());
        // row 2 under two values
        assert!(IvcscMatrix::<u8>::from_columns(d, vec![vec![3, 1, 2, 0, 7, 1, 2, 0]]).is_err());
    }
}
