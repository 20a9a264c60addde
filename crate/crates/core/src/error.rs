use crate::value::ValueKind;

/// Errors produced while building, converting or operating on matrices.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1, got {nrows}x{ncols}")]
    InvalidDims { nrows: usize, ncols: usize },

    #[error("invalid value kind: {width}-byte {class}")]
    InvalidValueKind { width: usize, class: &'static str },

    #[error("index width {0} is not one of 1, 2, 4, 8")]
    InvalidIndexWidth(usize),

    #[error("{what} {value} does not fit in {idx_size}-byte indices")]
    IndexOverflow {
        what: &'static str,
        value: u64,
        idx_size: usize,
    },

    #[error("entry ({row}, {col}) lies outside a {nrows}x{ncols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },

    #[error("duplicate entry at ({row}, {col})")]
    Duplicate { row: usize, col: usize },

    #[error("scalar multiplier must be nonzero")]
    ZeroScalar,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value kind mismatch: {left} vs {right}")]
    KindMismatch { left: ValueKind, right: ValueKind },

    #[error("matrix has no nonzero entries")]
    EmptyMatrix,

    #[error("redundancy needs 1 <= unique ({n_unique}) <= nnz ({nnz})")]
    InvalidColumnCounts { nnz: usize, n_unique: usize },

    #[error("sparsity {0} is outside [0, 1]")]
    InvalidSparsity(f64),

    #[error("cannot draw {requested} distinct nonzero {kind} values")]
    TooManyUnique { requested: usize, kind: ValueKind },

    #[error("index sequence must be nonempty and strictly increasing")]
    InvalidIndexSequence,

    #[error("invalid matrix structure: {0}")]
    InvalidStructure(&'static str),

    #[error("malformed column stream: {0}")]
    MalformedStream(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
