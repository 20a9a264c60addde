//! The `.ivsk` binary container.
//!
//! A fixed 32-byte header followed by the format's payload. All integers
//! are little-endian.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "IVSK"
//!      4     1  version (1)
//!      5     1  format code: 0 CSC, 1 VCSC, 2 IVCSC
//!      6     1  value kind code (u8 u16 u32 u64 i8 i16 i32 i64 f32 f64 = 0..9)
//!      7     1  index size in bytes (CSC/VCSC: 1, 2, 4 or 8; IVCSC: 0)
//!      8     8  nrows
//!     16     8  ncols
//!     24     8  nnz
//! ```
//!
//! Payloads:
//!
//! - CSC: `col_ptrs[ncols + 1]`, `row_indices[nnz]` (index size each), then
//!   `values[nnz]`.
//! - VCSC, per column: unique count (index size), unique values, counts
//!   (index size each), row indices (index size each).
//! - IVCSC, per column: stream length as `u64`, then the stream.
//!
//! Payload length always equals the matrix's `byte_size()`.

use ivsk_core::{
    CscMatrix, Dims, Format, IndexWidth, IvcscMatrix, Value, ValueKind, VcscColumn, VcscMatrix,
};

use crate::error::{IoError, Result};

pub const MAGIC: [u8; 4] = *b"IVSK";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub format: Format,
    pub value_kind: ValueKind,
    /// Zero for IVCSC, which has no fixed index width.
    pub idx_size: u8,
    pub nrows: u64,
    pub ncols: u64,
    pub nnz: u64,
}

impl ContainerHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut h = [0u8; HEADER_LEN];
        h[0..4].copy_from_slice(&MAGIC);
        h[4] = VERSION;
        h[5] = self.format.code();
        h[6] = self.value_kind.code();
        h[7] = self.idx_size;
        h[8..16].copy_from_slice(&self.nrows.to_le_bytes());
        h[16..24].copy_from_slice(&self.ncols.to_le_bytes());
        h[24..32].copy_from_slice(&self.nnz.to_le_bytes());
        h
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || bytes[0..4] != MAGIC {
            return Err(IoError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(IoError::Truncated {
                needed: HEADER_LEN as u64,
                available: bytes.len() as u64,
            });
        }
        if bytes[4] != VERSION {
            return Err(IoError::UnsupportedVersion(bytes[4]));
        }
        let format = Format::from_code(bytes[5]).ok_or(IoError::UnknownFormat(bytes[5]))?;
        let value_kind =
            ValueKind::from_code(bytes[6]).ok_or(IoError::UnknownValueKind(bytes[6]))?;
        let idx_size = bytes[7];
        let idx_ok = match format {
            Format::Ivcsc => idx_size == 0,
            _ => IndexWidth::new(idx_size as usize).is_ok(),
        };
        if !idx_ok {
            return Err(IoError::BadIndexSize { format, idx_size });
        }
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        Ok(ContainerHeader {
            format,
            value_kind,
            idx_size,
            nrows: u64_at(8),
            ncols: u64_at(16),
            nnz: u64_at(24),
        })
    }

    pub fn dims(&self) -> Result<Dims> {
        let to_usize = |x: u64| {
            usize::try_from(x).map_err(|_| IoError::Matrix(ivsk_core::Error::InvalidStructure("dimension exceeds address space")))
        };
        Ok(Dims::new(to_usize(self.nrows)?, to_usize(self.ncols)?)?)
    }
}

/// A matrix type that can be stored in the container.
pub trait Stored: Sized {
    const FORMAT: Format;
    fn header(&self) -> ContainerHeader;
    fn write_payload(&self, out: &mut Vec<u8>);
    fn read_payload(header: &ContainerHeader, payload: &[u8]) -> Result<Self>;
}

pub fn serialize<M: Stored>(m: &M) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&m.header().encode());
    m.write_payload(&mut out);
    out
}

pub fn deserialize<M: Stored>(bytes: &[u8]) -> Result<M> {
    let header = ContainerHeader::decode(bytes)?;
    if header.format != M::FORMAT {
        return Err(IoError::UnexpectedFormat {
            expected: M::FORMAT,
            found: header.format,
        });
    }
    M::read_payload(&header, &bytes[HEADER_LEN..])
}

fn check_kind<T: Value>(h: &ContainerHeader) -> Result<()> {
    if h.value_kind != T::KIND {
        return Err(IoError::UnexpectedValueKind {
            expected: T::KIND,
            found: h.value_kind,
        });
    }
    Ok(())
}

fn write_uint(out: &mut Vec<u8>, value: usize, width: usize) {
    out.extend_from_slice(&(value as u64).to_le_bytes()[..width]);
}

/// Bounds-checked little-endian reader.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or(
            IoError::Truncated {
                needed: (self.pos as u64).saturating_add(n as u64),
                available: self.bytes.len() as u64,
            },
        )?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    /// Fails unless `count` items of `size` bytes remain. Called before
    /// allocating for header-declared counts, so corrupt counts cannot
    /// request more memory than the input holds.
    fn need(&self, count: usize, size: usize) -> Result<()> {
        let needed = (count as u128) * (size as u128) + self.pos as u128;
        if needed > self.bytes.len() as u128 {
            return Err(IoError::Truncated {
                needed: needed.min(u64::MAX as u128) as u64,
                available: self.bytes.len() as u64,
            });
        }
        Ok(())
    }

    fn uint(&mut self, width: usize) -> Result<u64> {
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(self.take(width)?);
        Ok(u64::from_le_bytes(buf))
    }

    fn usize(&mut self, width: usize) -> Result<usize> {
        usize::try_from(self.uint(width)?)
            .map_err(|_| IoError::Matrix(ivsk_core::Error::InvalidStructure("index exceeds address space")))
    }

    fn value<T: Value>(&mut self) -> Result<T> {
        Ok(T::read_le(self.take(T::SIZE)?))
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(IoError::LengthMismatch {
                expected: self.pos as u64,
                found: self.bytes.len() as u64,
            });
        }
        Ok(())
    }
}

fn check_nnz(header: &ContainerHeader, found: usize) -> Result<()> {
    if header.nnz != found as u64 {
        return Err(IoError::Matrix(ivsk_core::Error::InvalidStructure(
            "nonzero count disagrees with header",
        )));
    }
    Ok(())
}

impl<T: Value> Stored for CscMatrix<T> {
    const FORMAT: Format = Format::Csc;

    fn header(&self) -> ContainerHeader {
        ContainerHeader {
            format: Format::Csc,
            value_kind: T::KIND,
            idx_size: self.index_width().bytes() as u8,
            nrows: self.dims().nrows() as u64,
            ncols: self.dims().ncols() as u64,
            nnz: self.nnz() as u64,
        }
    }

    fn write_payload(&self, out: &mut Vec<u8>) {
        let w = self.index_width().bytes();
        out.reserve(self.byte_size() as usize);
        for &p in self.col_ptrs() {
            write_uint(out, p, w);
        }
        for &r in self.row_indices() {
            write_uint(out, r, w);
        }
        for &v in self.values() {
            v.write_le(out);
        }
    }

    fn read_payload(h: &ContainerHeader, payload: &[u8]) -> Result<Self> {
        check_kind::<T>(h)?;
        let dims = h.dims()?;
        let idx = IndexWidth::new(h.idx_size as usize)?;
        let w = idx.bytes() as u128;
        let expected = (T::SIZE as u128 + w) * h.nnz as u128 + w * (h.ncols as u128 + 1);
        let found = payload.len() as u128;
        if found < expected {
            return Err(IoError::Truncated {
                needed: expected.min(u64::MAX as u128) as u64,
                available: found as u64,
            });
        }
        if found > expected {
            return Err(IoError::LengthMismatch {
                expected: expected as u64,
                found: found as u64,
            });
        }
        let nnz = h.nnz as usize;
        let mut cur = Cursor::new(payload);
        let col_ptrs = (0..=dims.ncols())
            .map(|_| cur.usize(idx.bytes()))
            .collect::<Result<Vec<_>>>()?;
        let rows = (0..nnz)
            .map(|_| cur.usize(idx.bytes()))
            .collect::<Result<Vec<_>>>()?;
        let values = (0..nnz).map(|_| cur.value::<T>()).collect::<Result<Vec<_>>>()?;
        cur.finish()?;
        Ok(CscMatrix::from_parts(dims, idx, col_ptrs, rows, values)?)
    }
}

impl<T: Value> Stored for VcscMatrix<T> {
    const FORMAT: Format = Format::Vcsc;

    fn header(&self) -> ContainerHeader {
        ContainerHeader {
            format: Format::Vcsc,
            value_kind: T::KIND,
            idx_size: self.index_width().bytes() as u8,
            nrows: self.dims().nrows() as u64,
            ncols: self.dims().ncols() as u64,
            nnz: self.nnz() as u64,
        }
    }

    fn write_payload(&self, out: &mut Vec<u8>) {
        let w = self.index_width().bytes();
        out.reserve(self.byte_size() as usize);
        for col in self.columns() {
            write_uint(out, col.n_unique(), w);
            for &v in col.unique_values() {
                v.write_le(out);
            }
            for &c in col.counts() {
                write_uint(out, c, w);
            }
            for &r in col.indices() {
                write_uint(out, r, w);
            }
        }
    }

    fn read_payload(h: &ContainerHeader, payload: &[u8]) -> Result<Self> {
        check_kind::<T>(h)?;
        let dims = h.dims()?;
        let idx = IndexWidth::new(h.idx_size as usize)?;
        let w = idx.bytes();
        let mut cur = Cursor::new(payload);
        cur.need(dims.ncols(), w)?;
        let mut columns = Vec::with_capacity(dims.ncols());
        let mut nnz = 0usize;
        for _ in 0..dims.ncols() {
            let n_unique = cur.usize(w)?;
            if n_unique > dims.nrows() {
                return Err(IoError::Matrix(ivsk_core::Error::InvalidStructure(
                    "more unique values than rows",
                )));
            }
            cur.need(n_unique, T::SIZE + w)?;
            let values = (0..n_unique).map(|_| cur.value::<T>()).collect::<Result<Vec<_>>>()?;
            let counts = (0..n_unique).map(|_| cur.usize(w)).collect::<Result<Vec<_>>>()?;
            let col_nnz = counts.iter().try_fold(0usize, |a, &c| a.checked_add(c)).unwrap_or(usize::MAX);
            if col_nnz > dims.nrows() {
                return Err(IoError::Matrix(ivsk_core::Error::InvalidStructure(
                    "column holds more entries than rows",
                )));
            }
            cur.need(col_nnz, w)?;
            let indices = (0..col_nnz).map(|_| cur.usize(w)).collect::<Result<Vec<_>>>()?;
            nnz += col_nnz;
            columns.push(VcscColumn::new(values, counts, indices)?);
        }
        cur.finish()?;
        check_nnz(h, nnz)?;
        Ok(VcscMatrix::from_columns(dims, idx, columns)?)
    }
}

impl<T: Value> Stored for IvcscMatrix<T> {
    const FORMAT: Format = Format::Ivcsc;

    fn header(&self) -> ContainerHeader {
        ContainerHeader {
            format: Format::Ivcsc,
            value_kind: T::KIND,
            idx_size: 0,
            nrows: self.dims().nrows() as u64,
            ncols: self.dims().ncols() as u64,
            nnz: self.nnz() as u64,
        }
    }

    fn write_payload(&self, out: &mut Vec<u8>) {
        out.reserve(self.byte_size() as usize);
        for col in self.columns() {
            out.extend_from_slice(&col.byte_len().to_le_bytes());
            out.extend_from_slice(col.data());
        }
    }

    fn read_payload(h: &ContainerHeader, payload: &[u8]) -> Result<Self> {
        check_kind::<T>(h)?;
        let dims = h.dims()?;
        let mut cur = Cursor::new(payload);
        cur.need(dims.ncols(), 8)?;
        let mut columns = Vec::with_capacity(dims.ncols());
        for _ in 0..dims.ncols() {
            let len = cur.uint(8)?;
            let len = usize::try_from(len).map_err(|_| IoError::Truncated {
                needed: len,
                available: payload.len() as u64,
            })?;
            columns.push(cur.take(len)?.to_vec());
        }
        cur.finish()?;
        let m = IvcscMatrix::from_columns(dims, columns)?;
        check_nnz(h, m.nnz())?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ivsk_core::{CooMatrix, DuplicatePolicy, Triplet};

    fn sample() -> CooMatrix<u8> {
        CooMatrix::from_triplets(
            Dims::new(8, 2).unwrap(),
            [(0, 0, 3), (2, 0, 3), (7, 0, 3), (5, 0, 7), (1, 1, 9)]
                .iter()
                .map(|&(r, c, v)| Triplet::new(r, c, v))
                .collect(),
            DuplicatePolicy::Reject,
        )
        .unwrap()
    }

    #[test]
    fn header_layout() {
        let m = IvcscMatrix::from_coo(&sample());
        let bytes = serialize(&m);
        assert_eq!(&bytes[..8], b"IVSK\x01\x02\x00\x00");
        assert_eq!(&bytes[8..16], &8u64.to_le_bytes());
        assert_eq!(&bytes[16..24], &2u64.to_le_bytes());
        assert_eq!(&bytes[24..32], &5u64.to_le_bytes());
        assert_eq!(bytes.len() - HEADER_LEN, m.byte_size() as usize);
    }

    #[test]
    fn empty_csc_payload_is_column_pointers() {
        let m = CscMatrix::from_coo(&CooMatrix::<f32>::empty(Dims::new(3, 2).unwrap())).unwrap();
        let bytes = serialize(&m);
        assert_eq!(bytes.len() - HEADER_LEN, 12);
        assert_eq!(&bytes[HEADER_LEN..], &[0u8; 12]);
        assert!(deserialize::<CscMatrix<f32>>(&bytes).is_ok());
    }

    #[test]
    fn round_trips() {
        let coo = sample();
        let csc = CscMatrix::from_coo(&coo).unwrap();
        let vcsc = VcscMatrix::from_coo(&coo).unwrap();
        let ivcsc = IvcscMatrix::from_coo(&coo);
        assert_eq!(serialize(&deserialize::<CscMatrix<u8>>(&serialize(&csc)).unwrap()), serialize(&csc));
        assert_eq!(deserialize::<VcscMatrix<u8>>(&serialize(&vcsc)).unwrap(), vcsc);
        assert_eq!(deserialize::<IvcscMatrix<u8>>(&serialize(&ivcsc)).unwrap(), ivcsc);
    }

    #[test]
    fn rejects_corruption() {
        let bytes = serialize(&VcscMatrix::from_coo(&sample()).unwrap());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(deserialize::<VcscMatrix<u8>>(&bad), Err(IoError::BadMagic)));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(deserialize::<VcscMatrix<u8>>(&bad), Err(IoError::UnsupportedVersion(2))));
        assert!(matches!(
            deserialize::<VcscMatrix<u8>>(&bytes[..bytes.len() - 1]),
            Err(IoError::Truncated { .. })
        ));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(deserialize::<VcscMatrix<u8>>(&long), Err(IoError::LengthMismatch { .. })));
        assert!(matches!(
            deserialize::<IvcscMatrix<u8>>(&bytes),
            Err(IoError::UnexpectedFormat { .. })
        ));
        assert!(matches!(
            deserialize::<VcscMatrix<i8>>(&bytes),
            Err(IoError::UnexpectedValueKind { .. })
        ));
        assert!(matches!(deserialize::<VcscMatrix<u8>>(&bytes[..20]), Err(IoError::Truncated { .. })));
    }
}
