//! Seeded random matrices with controlled sparsity and value redundancy.
//!
//! Structure and values come from two independent ChaCha8 streams, so the
//! values of a matrix can be redrawn without moving any nonzero. Each column
//! receives exactly `floor((1 - sparsity) * nrows)` nonzeros at rows drawn
//! uniformly without replacement (partial Fisher-Yates). Values are picked
//! uniformly from a pool of `n_unique` distinct nonzero values.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coo::{CooMatrix, Dims, Triplet};
use crate::error::{Error, Result};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub dims: Dims,
    /// Fraction of zero cells, in `[0, 1]`.
    pub sparsity: f64,
    /// Size of the value pool.
    pub n_unique: usize,
    /// Seed of the value stream.
    pub seed: u64,
    /// Seed of the structure stream.
    pub position_seed: u64,
}

impl GenSpec {
    pub fn new(dims: Dims, sparsity: f64, n_unique: usize) -> Self {
        GenSpec {
            dims,
            sparsity,
            n_unique,
            seed: 0,
            position_seed: 0,
        }
    }

    pub fn with_seeds(mut self, seed: u64, position_seed: u64) -> Self {
        self.seed = seed;
        self.position_seed = position_seed;
        self
    }

    /// Nonzeros placed in every column.
    pub fn nnz_per_column(&self) -> Result<usize> {
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::InvalidSparsity(self.sparsity));
        }
        let n = self.dims.nrows();
        // tolerance absorbs representation error, e.g. (1 - 0.9) * 1e6
        let k = libm::floor((1.0 - self.sparsity) * n as f64 + 1e-9) as usize;
        Ok(k.min(n))
    }
}

/// Generates a matrix per `spec`. Identical specs give identical matrices.
pub fn generate<T: Value>(spec: &GenSpec) -> Result<CooMatrix<T>> {
    let structure = generate_structure(spec)?;
    reassign_values(&structure, spec.n_unique, spec.seed)
}

/// The sparsity pattern alone, every stored value set to one.
pub fn generate_structure<T: Value>(spec: &GenSpec) -> Result<CooMatrix<T>> {
    let k = spec.nnz_per_column()?;
    let (nrows, ncols) = (spec.dims.nrows(), spec.dims.ncols());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.position_seed);
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut triplets = Vec::with_capacity(k * ncols);
    let mut chosen = Vec::with_capacity(k);
    for col in 0..ncols {
        for i in 0..k {
            let j = rng.random_range(i..nrows);
            perm.swap(i, j);
        }
        chosen.clear();
        chosen.extend_from_slice(&perm[..k]);
        chosen.sort_unstable();
        triplets.extend(chosen.iter().map(|&row| Triplet::new(row, col, T::ONE)));
    }
    Ok(CooMatrix::from_canonical(spec.dims, triplets))
}

/// `n_unique` distinct nonzero values drawn from `rng`, in draw order.
pub fn value_pool<T: Value, R: Rng + ?Sized>(n_unique: usize, rng: &mut R) -> Result<Vec<T>> {
    if n_unique == 0 || n_unique as u64 > T::nonzero_count() {
        return Err(Error::TooManyUnique {
            requested: n_unique,
            kind: T::KIND,
        });
    }
    let mut seen = BTreeSet::new();
    let mut pool = Vec::with_capacity(n_unique);
    while pool.len() < n_unique {
        let v = T::sample_nonzero(rng);
        if seen.insert(v.to_bits64()) {
            pool.push(v);
        }
    }
    Ok(pool)
}

/// Keeps the pattern of `m` and redraws every value from a fresh pool of
/// `n_unique` values seeded by `seed`.
pub fn reassign_values<T: Value>(m: &CooMatrix<T>, n_unique: usize, seed: u64) -> Result<CooMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = value_pool::<T, _>(n_unique, &mut rng)?;
    let triplets = m
        .triplets()
        .iter()
        .map(|t| Triplet::new(t.row, t.col, pool[rng.random_range(0..pool.len())]))
        .collect();
    Ok(CooMatrix::from_canonical(m.dims(), triplets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::column_stats;

    fn spec(r: usize, c: usize, s: f64, u: usize) -> GenSpec {
        GenSpec::new(Dims::new(r, c).unwrap(), s, u).with_seeds(7, 11)
    }

    #[test]
    fn fully_sparse_is_empty() {
        assert_eq!(generate::<f32>(&spec(50, 4, 1.0, 3)).unwrap().nnz(), 0);
    }

    #[test]
    fn pool_of_one_is_fully_redundant() {
        let m = generate::<i32>(&spec(200, 6, 0.5, 1)).unwrap();
        assert!(column_stats(&m).iter().all(|s| s.n_unique == 1 && s.nnz == 100));
    }

    #[test]
    fn deterministic() {
        let a = generate::<f64>(&spec(300, 5, 0.9, 17)).unwrap();
        let b = generate::<f64>(&spec(300, 5, 0.9, 17)).unwrap();
        assert_eq!(a, b);
        let c = generate::<f64>(&spec(300, 5, 0.9, 17).with_seeds(8, 11)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn floor_rule() {
        assert_eq!(spec(1_000_000, 1, 0.9, 1).nnz_per_column().unwrap(), 100_000);
        assert_eq!(spec(10, 1, 0.55, 1).nnz_per_column().unwrap(), 4);
        assert_eq!(spec(10, 1, 0.0, 1).nnz_per_column().unwrap(), 10);
        assert!(spec(10, 1, 1.5, 1).nnz_per_column().is_err());
        assert!(spec(10, 1, -0.1, 1).nnz_per_column().is_err());
    }

    #[test]
    fn reassign_keeps_structure() {
        let m = generate::<u16>(&spec(500, 3, 0.8, 50)).unwrap();
        let r = reassign_values(&m, 1, 99).unwrap();
        let pattern = |m: &CooMatrix<u16>| m.triplets().iter().map(|t| (t.row, t.col)).collect::<Vec<_>>();
        assert_eq!(pattern(&m), pattern(&r));
        let v = r.triplets()[0].value;
        assert!(r.triplets().iter().all(|t| t.value == v));
    }

    #[test]
    fn pool_limits() {
        let m = generate::<u8>(&spec(10, 1, 0.0, 255)).unwrap();
        assert_eq!(m.nnz(), 10);
        assert!(matches!(
            generate::<u8>(&spec(10, 1, 0.0, 256)),
            Err(Error::TooManyUnique { requested: 256, .. })
        ));
        assert!(generate::<u8>(&spec(10, 1, 0.0, 0)).is_err());
    }
}
