//! File formats, benchmarks and the `ivsk` command line on top of
//! [`ivsk_core`].

pub use ivsk_core;

pub mod bench;
pub mod cli;
pub mod container;
mod dynamic;
pub mod error;
pub mod files;
pub mod mtx;

pub use error::{IoError, Result};
