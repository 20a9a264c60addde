//! Redundancy sweeps: one fixed sparsity pattern, values redrawn from pools
//! of increasing size, storage measured at every point.

use alloc::vec::Vec;

use crate::analytics::{column_stats, csc_size_model, ivcsc_size_model, mmr, vcsc_size_model};
use crate::csc::CscMatrix;
use crate::dense::DenseMatrix;
use crate::error::Result;
use crate::ivcsc::IvcscMatrix;
use crate::matgen::{generate_structure, reassign_values, GenSpec};
use crate::value::{IndexWidth, Value};
use crate::vcsc::VcscMatrix;
use crate::Format;

/// Model and measured size of one format, in bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub model: u64,
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub n_unique: usize,
    pub mmr: f64,
    pub dense_bytes: u128,
    pub csc: Sizes,
    pub vcsc: Sizes,
    pub ivcsc: Sizes,
}

impl SweepPoint {
    pub fn sizes(&self, format: Format) -> Sizes {
        match format {
            Format::Csc => self.csc,
            Format::Vcsc => self.vcsc,
            Format::Ivcsc => self.ivcsc,
        }
    }

    /// Measured size over dense size.
    pub fn ratio_over_dense(&self, format: Format) -> f64 {
        self.sizes(format).actual as f64 / self.dense_bytes as f64
    }
}

/// Runs a sweep over `unique_list` on the pattern fixed by
/// `spec.position_seed`; `spec.n_unique` is ignored.
pub fn run_sweep<T: Value>(spec: &GenSpec, unique_list: &[usize], idx: IndexWidth) -> Result<Vec<SweepPoint>> {
    let structure = generate_structure::<T>(spec)?;
    let dense_bytes = DenseMatrix::<T>::byte_size(spec.dims);
    let (val, idx_b) = (T::SIZE as u64, idx.bytes() as u64);
    unique_list
        .iter()
        .map(|&n_unique| {
            let m = reassign_values(&structure, n_unique, spec.seed)?;
            let stats = column_stats(&m);
            Ok(SweepPoint {
                n_unique,
                mmr: mmr(&stats)?,
                dense_bytes,
                csc: Sizes {
                    model: csc_size_model(m.nnz() as u64, spec.dims.ncols() as u64, val, idx_b),
                    actual: CscMatrix::from_coo_with(&m, idx)?.byte_size(),
                },
                vcsc: Sizes {
                    model: vcsc_size_model(&stats, val, idx_b),
                    actual: VcscMatrix::from_coo_with(&m, idx)?.byte_size(),
                },
                ivcsc: Sizes {
                    model: ivcsc_size_model(&stats, val),
                    actual: IvcscMatrix::from_coo(&m).byte_size(),
                },
            })
        })
        .collect()
}

/// MMR at which `format` first becomes smaller than CSC, scanning points by
/// ascending MMR and interpolating linearly between the two points that
/// bracket the sign change. `None` if it never crosses.
pub fn crossover_mmr(points: &[SweepPoint], format: Format) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.mmr, p.sizes(format).actual as f64 - p.csc.actual as f64))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.windows(2).find_map(|w| {
        let ((m0, d0), (m1, d1)) = (w[0], w[1]);
        (d0 >= 0.0 && d1 < 0.0).then(|| m0 + (m1 - m0) * d0 / (d0 - d1))
    })
}
