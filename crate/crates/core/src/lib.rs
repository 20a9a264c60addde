//! Redundancy-aware compressed sparse column formats.
//!
//! Three column-major layouts for the same matrix:
//!
//! - [`CscMatrix`]: the usual values / row indices / column pointers.
//! - [`VcscMatrix`]: per column, each distinct value once, its count, and
//!   the row indices grouped by value.
//! - [`IvcscMatrix`]: per column, one byte stream of value sections whose
//!   row indices are delta encoded and byte packed.
//!
//! All three are built from a canonical [`CooMatrix`], convert back to it
//! losslessly, and support iteration, scalar multiplication, SpMV and SpMM
//! directly on the compressed form. [`analytics`] holds the redundancy
//! metric and closed-form size models, [`matgen`] a seeded generator with
//! controllable redundancy.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use ivsk_core::{CooMatrix, Dims, DuplicatePolicy, IvcscMatrix, Triplet, VcscMatrix};
//!
//! let coo = CooMatrix::from_triplets(
//!     Dims::new(8, 1).unwrap(),
//!     vec![
//!         Triplet::new(0, 0, 3u8),
//!         Triplet::new(2, 0, 3),
//!         Triplet::new(5, 0, 7),
//!         Triplet::new(7, 0, 3),
//!     ],
//!     DuplicatePolicy::Sum,
//! )
//! .unwrap();
//!
//! let vcsc = VcscMatrix::from_coo(&coo).unwrap();
//! assert_eq!(vcsc.columns()[0].unique_values(), &[3, 7]);
//! assert_eq!(vcsc.columns()[0].indices(), &[0, 2, 7, 5]);
//!
//! let ivcsc = IvcscMatrix::from_vcsc(&vcsc);
//! assert_eq!(ivcsc.columns()[0].data(), &[3, 1, 0, 2, 5, 0, 7, 1, 5, 0]);
//! assert_eq!(ivcsc.to_coo(), coo);
//! ```
#![no_std]

extern crate alloc;

pub mod analytics;
pub mod coo;
pub mod csc;
pub mod dense;
pub mod error;
mod group;
pub mod ivcsc;
pub mod matgen;
pub mod sweep;
pub mod value;
pub mod vcsc;

pub use coo::{coo_equal, CooMatrix, Dims, DuplicatePolicy, Triplet};
pub use csc::CscMatrix;
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use ivcsc::{IvcscColumn, IvcscMatrix};
pub use value::{IndexWidth, NumericClass, Value, ValueKind};
pub use vcsc::{VcscColumn, VcscMatrix};

/// The three storage layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Csc,
    Vcsc,
    Ivcsc,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csc, Format::Vcsc, Format::Ivcsc];

    pub fn name(self) -> &'static str {
        match self {
            Format::Csc => "csc",
            Format::Vcsc => "vcsc",
            Format::Ivcsc => "ivcsc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Container format code.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }
}

impl core::fmt::Display for Format {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}
