//! Redundancy metrics and closed-form storage models.
//!
//! The size models work from per-column statistics only, so they can be
//! evaluated for matrices far too large to build. For any matrix that is
//! built, they agree byte for byte with the `byte_size` of each format.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::coo::{CooMatrix, Dims};
use crate::csc::CscMatrix;
use crate::error::{Error, Result};
use crate::ivcsc::IvcscMatrix;
use crate::value::{IndexWidth, Value};
use crate::vcsc::VcscMatrix;

pub const GIB: f64 = (1u64 << 30) as f64;
pub const GB: f64 = 1e9;

/// Redundancy of one column, `1 - 1 / (log10(nnz) - log10(n_unique) + 1)`.
///
/// Zero when every value is distinct, approaching one as the column fills
/// with copies of few values.
pub fn column_redundancy(nnz: usize, n_unique: usize) -> Result<f64> {
    if nnz == 0 || n_unique == 0 || n_unique > nnz {
        return Err(Error::InvalidColumnCounts { nnz, n_unique });
    }
    let spread = libm::log10(nnz as f64) - libm::log10(n_unique as f64);
    Ok(1.0 - 1.0 / (spread + 1.0))
}

/// Per-column statistics feeding the size models.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColumnStats {
    pub nnz: usize,
    pub n_unique: usize,
    /// Occurrences of each distinct value.
    pub occurrences: Vec<usize>,
    /// Packed index width of each distinct value's row list.
    pub widths: Vec<u8>,
}

fn bytes_needed(x: u64) -> u8 {
    let mut w = 1u8;
    while w < 8 && x >> (8 * w as u32) != 0 {
        w += 1;
    }
    w
}

/// Gathers [`ColumnStats`] for every column straight from the triplets.
pub fn column_stats<T: Value>(m: &CooMatrix<T>) -> Vec<ColumnStats> {
    m.columns()
        .map(|col| {
            // rows arrive ascending, so each value's list is ascending too
            let mut by_value: BTreeMap<u64, (usize, usize, u64)> = BTreeMap::new();
            for t in col {
                let e = by_value
                    .entry(t.value.to_bits64())
                    .or_insert((0, t.row, t.row as u64));
                if e.0 > 0 {
                    e.2 = e.2.max((t.row - e.1) as u64);
                    e.1 = t.row;
                }
                e.0 += 1;
            }
            ColumnStats {
                nnz: col.len(),
                n_unique: by_value.len(),
                occurrences: by_value.values().map(|e| e.0).collect(),
                widths: by_value.values().map(|e| bytes_needed(e.2)).collect(),
            }
        })
        .collect()
}

/// Mean redundancy over the columns that hold at least one nonzero.
pub fn mmr(stats: &[ColumnStats]) -> Result<f64> {
    mmr_from_counts(stats.iter().map(|s| (s.nnz, s.n_unique)))
}

/// [`mmr`] from bare `(nnz, n_unique)` pairs.
pub fn mmr_from_counts(counts: impl IntoIterator<Item = (usize, usize)>) -> Result<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (nnz, u) in counts {
        if nnz == 0 {
            continue;
        }
        sum += column_redundancy(nnz, u)?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(sum / n as f64)
}

/// CSC bytes: values and row indices per nonzero plus `ncols + 1` pointers.
pub fn csc_size_model(nnz: u64, ncols: u64, val_size: u64, idx_size: u64) -> u64 {
    val_size * nnz + idx_size * nnz + idx_size * (ncols + 1)
}

/// VCSC bytes: per column, values and counts per unique value, one index
/// per nonzero, and one length field.
pub fn vcsc_size_model(stats: &[ColumnStats], val_size: u64, idx_size: u64) -> u64 {
    stats
        .iter()
        .map(|s| {
            let u = s.n_unique as u64;
            val_size * u + idx_size * u + idx_size * s.nnz as u64 + idx_size
        })
        .sum()
}

/// IVCSC bytes: per column an 8-byte length, a value and a width byte per
/// unique value, and `occurrences + 1` packed entries per unique value.
pub fn ivcsc_size_model(stats: &[ColumnStats], val_size: u64) -> u64 {
    stats
        .iter()
        .map(|s| {
            let sections: u64 = s
                .occurrences
                .iter()
                .zip(&s.widths)
                .map(|(&n, &w)| (n as u64 + 1) * w as u64)
                .sum();
            8 + s.n_unique as u64 * (val_size + 1) + sections
        })
        .sum()
}

/// One row of a storage comparison table.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressionReport {
    pub dims: Dims,
    pub nnz: u64,
    pub sparsity: f64,
    pub mmr: f64,
    pub value_size: u64,
    pub idx_size: u64,
    pub dense_bytes: u128,
    pub csc_bytes: u64,
    pub vcsc_bytes: u64,
    /// VCSC size over CSC size.
    pub vcsc_ratio: f64,
    pub ivcsc_bytes: u64,
    /// IVCSC size over CSC size.
    pub ivcsc_ratio: f64,
    /// Sizes come from the analytic models rather than built matrices.
    pub model_derived: bool,
}

impl CompressionReport {
    /// Report from statistics alone; sizes are model values.
    pub fn from_stats(dims: Dims, value_size: u64, idx_size: u64, stats: &[ColumnStats]) -> Result<Self> {
        let nnz: u64 = stats.iter().map(|s| s.nnz as u64).sum();
        let csc = csc_size_model(nnz, dims.ncols() as u64, value_size, idx_size);
        let vcsc = vcsc_size_model(stats, value_size, idx_size);
        let ivcsc = ivcsc_size_model(stats, value_size);
        Self::assemble(dims, nnz, mmr(stats)?, value_size, idx_size, [csc, vcsc, ivcsc], true)
    }

    fn assemble(
        dims: Dims,
        nnz: u64,
        mmr: f64,
        value_size: u64,
        idx_size: u64,
        [csc, vcsc, ivcsc]: [u64; 3],
        model_derived: bool,
    ) -> Result<Self> {
        let cells = dims.cells();
        Ok(CompressionReport {
            dims,
            nnz,
            sparsity: 1.0 - nnz as f64 / cells as f64,
            mmr,
            value_size,
            idx_size,
            dense_bytes: cells * value_size as u128,
            csc_bytes: csc,
            vcsc_bytes: vcsc,
            vcsc_ratio: vcsc as f64 / csc as f64,
            ivcsc_bytes: ivcsc,
            ivcsc_ratio: ivcsc as f64 / csc as f64,
            model_derived,
        })
    }
}

pub fn compression_report<T: Value>(m: &CooMatrix<T>) -> Result<CompressionReport> {
    compression_report_with(m, IndexWidth::DEFAULT)
}

/// Builds all three formats and reports their measured sizes.
pub fn compression_report_with<T: Value>(m: &CooMatrix<T>, idx: IndexWidth) -> Result<CompressionReport> {
    let stats = column_stats(m);
    let mmr = mmr(&stats)?;
    let csc = CscMatrix::from_coo_with(m, idx)?.byte_size();
    let vcsc = VcscMatrix::from_coo_with(m, idx)?.byte_size();
    let ivcsc = IvcscMatrix::from_coo(m).byte_size();
    CompressionReport::assemble(
        m.dims(),
        m.nnz() as u64,
        mmr,
        T::SIZE as u64,
        idx.bytes() as u64,
        [csc, vcsc, ivcsc],
        false,
    )
}

pub fn to_gib(bytes: u128) -> f64 {
    bytes as f64 / GIB
}

pub fn to_gb(bytes: u128) -> f64 {
    bytes as f64 / GB
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coo::{DuplicatePolicy, Triplet};
    use alloc::vec;

    #[test]
    fn redundancy_values() {
        assert_eq!(column_redundancy(1000, 1000).unwrap(), 0.0);
        assert!((column_redundancy(1_000_000, 1).unwrap() - (1.0 - 1.0 / 7.0)).abs() < 1e-12);
        assert!((column_redundancy(100, 10).unwrap() - 0.5).abs() < 1e-12);
        assert!(column_redundancy(0, 0).is_err());
        assert!(column_redundancy(5, 6).is_err());
    }

    #[test]
    fn mmr_is_a_mean_over_nonempty_columns() {
        let s = |nnz, u| ColumnStats {
            nnz,
            n_unique: u,
            ..Default::default()
        };
        assert!((mmr(&[s(100, 10), s(100, 10)]).unwrap() - 0.5).abs() < 1e-12);
        assert!((mmr(&[s(7, 7), s(100, 10)]).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(
            mmr(&[s(7, 7), s(0, 0), s(100, 10), s(0, 0)]).unwrap(),
            mmr(&[s(7, 7), s(100, 10)]).unwrap()
        );
        assert_eq!(mmr(&[s(0, 0)]).unwrap_err(), Error::EmptyMatrix);
    }

    #[test]
    fn csc_model_table_rows() {
        assert_eq!(csc_size_model(1_300_000_000, 897_733, 2, 4), 7_803_590_936);
        assert_eq!(csc_size_model(5_410_000, 124_836, 1, 4), 27_549_348);
        assert_eq!(csc_size_model(25_000_000, 59_047, 4, 4), 200_236_192);
        assert_eq!(csc_size_model(0, 2, 4, 4), 12);
    }

    #[test]
    fn stats_of_two_group_column() {
        let coo = CooMatrix::from_triplets(
            Dims::new(400, 2).unwrap(),
            vec![
                Triplet::new(0, 0, 3u8),
                Triplet::new(2, 0, 3),
                Triplet::new(7, 0, 3),
                Triplet::new(5, 0, 7),
                Triplet::new(300, 1, 1),
            ],
            DuplicatePolicy::Reject,
        )
        .unwrap();
        let stats = column_stats(&coo);
        assert_eq!(stats[0].occurrences, vec![3, 1]);
        assert_eq!(stats[0].widths, vec![1, 1]);
        assert_eq!(stats[1].widths, vec![2]);
        assert_eq!(ivcsc_size_model(&stats[..1], 1), 18);
        assert_eq!(vcsc_size_model(&stats[..1], 4, 4), 36);
    }

    #[test]
    fn report_on_empty_matrix_fails() {
        let coo = CooMatrix::<f32>::empty(Dims::new(3, 3).unwrap());
        assert_eq!(compression_report(&coo).unwrap_err(), Error::EmptyMatrix);
    }
}
