//! Timing harness for the five compressed-form operations.
//!
//! Each (format, operation, sweep point) runs twice untimed, then a fixed
//! number of timed repeats whose results are folded into a [`Sink`] the
//! optimizer must treat as observable. Timing uses the monotonic wall clock.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::time::{Duration, Instant};

use ivsk_core::analytics::{column_stats, mmr};
use ivsk_core::matgen::{generate_structure, reassign_values, GenSpec};
use ivsk_core::{CooMatrix, CscMatrix, DenseMatrix, Dims, Format, IndexWidth, IvcscMatrix, Value, VcscMatrix};

use crate::error::Result;

pub const WARMUPS: usize = 2;
pub const REPEATS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Construct,
    Iterate,
    Scalar,
    Spmv,
    Spmm,
}

impl Op {
    pub const ALL: [Op; 5] = [Op::Construct, Op::Iterate, Op::Scalar, Op::Spmv, Op::Spmm];

    pub fn name(self) -> &'static str {
        match self {
            Op::Construct => "construct",
            Op::Iterate => "iterate",
            Op::Scalar => "scalar",
            Op::Spmv => "spmv",
            Op::Spmm => "spmm",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == name)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accumulator for benchmark results. Every write goes through a volatile
/// store so the work producing it cannot be removed.
#[derive(Debug, Default)]
pub struct Sink {
    acc: u64,
    writes: u64,
}

impl Sink {
    pub fn absorb(&mut self, x: u64) {
        let next = self.acc.rotate_left(5) ^ black_box(x);
        // SAFETY: `self.acc` is a valid, aligned, exclusively borrowed u64.
        unsafe { std::ptr::write_volatile(&mut self.acc, next) };
        self.writes += 1;
    }

    pub fn value(&self) -> u64 {
        self.acc
    }

    /// Number of results absorbed so far.
    pub fn writes(&self) -> u64 {
        self.writes
    }
}

/// Runs `f` `warmups` times untimed and `repeats` times timed, feeding
/// every result to `sink`.
pub fn time_op<F>(warmups: usize, repeats: usize, sink: &mut Sink, mut f: F) -> Result<Vec<Duration>>
where
    F: FnMut() -> Result<u64>,
{
    for _ in 0..warmups {
        sink.absorb(f()?);
    }
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let out = f()?;
        times.push(start.elapsed());
        sink.absorb(out);
    }
    Ok(times)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub format: Format,
    pub op: Op,
    pub n_unique: usize,
    pub mmr: f64,
    pub times: Vec<Duration>,
    pub mean: Duration,
}

impl BenchRecord {
    fn new(format: Format, op: Op, n_unique: usize, mmr: f64, times: Vec<Duration>) -> Self {
        let total: Duration = times.iter().sum();
        let mean = if times.is_empty() {
            Duration::ZERO
        } else {
            total / times.len() as u32
        };
        BenchRecord {
            format,
            op,
            n_unique,
            mmr,
            times,
            mean,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ops: Vec<Op>,
    pub formats: Vec<Format>,
    pub warmups: usize,
    pub repeats: usize,
    pub idx: IndexWidth,
    /// Columns of the dense right-hand side used by SpMM.
    pub spmm_cols: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ops: Op::ALL.to_vec(),
            formats: Format::ALL.to_vec(),
            warmups: WARMUPS,
            repeats: REPEATS,
            idx: IndexWidth::DEFAULT,
            spmm_cols: 4,
        }
    }
}

fn fold_values<T: Value>(values: &[T]) -> u64 {
    values.iter().fold(0u64, |h, v| h.rotate_left(1) ^ v.to_bits64())
}

fn fold_iter<T: Value>(it: impl Iterator<Item = (usize, usize, T)>) -> u64 {
    it.fold(0u64, |h, (c, r, v)| h.wrapping_add(v.to_bits64() ^ (r as u64) ^ ((c as u64) << 32)))
}

struct Inputs<T> {
    x: Vec<T>,
    b: DenseMatrix<T>,
    scalar: T,
}

impl<T: Value> Inputs<T> {
    fn new(dims: Dims, spmm_cols: usize) -> Result<Self> {
        let n = dims.ncols();
        let k = spmm_cols.max(1);
        let ramp = |i: usize| T::from_f64_lossy((i % 7 + 1) as f64);
        Ok(Inputs {
            x: (0..n).map(ramp).collect(),
            b: DenseMatrix::from_row_major(Dims::new(n, k)?, (0..n * k).map(ramp).collect())?,
            scalar: T::ONE.wrapping_add(T::ONE),
        })
    }
}

fn bench_one<T: Value>(
    format: Format,
    op: Op,
    coo: &CooMatrix<T>,
    inputs: &Inputs<T>,
    cfg: &BenchConfig,
    sink: &mut Sink,
) -> Result<Vec<Duration>> {
    let (w, r, idx) = (cfg.warmups, cfg.repeats, cfg.idx);
    macro_rules! run {
        ($m:expr) => {{
            let m = $m;
            match op {
                Op::Construct => unreachable!(),
                Op::Iterate => time_op(w, r, sink, || Ok(fold_iter(m.iter()))),
                Op::Scalar => time_op(w, r, sink, || Ok(m.scalar_mul(inputs.scalar)?.nnz() as u64)),
                Op::Spmv => time_op(w, r, sink, || Ok(fold_values(&m.spmv(&inputs.x)?))),
                Op::Spmm => time_op(w, r, sink, || Ok(fold_values(m.spmm(&inputs.b)?.values()))),
            }
        }};
    }
    match (op, format) {
        (Op::Construct, Format::Csc) => {
            time_op(w, r, sink, || Ok(CscMatrix::from_coo_with(coo, idx)?.byte_size()))
        }
        (Op::Construct, Format::Vcsc) => {
            time_op(w, r, sink, || Ok(VcscMatrix::from_coo_with(coo, idx)?.byte_size()))
        }
        (Op::Construct, Format::Ivcsc) => time_op(w, r, sink, || Ok(IvcscMatrix::from_coo(coo).byte_size())),
        (_, Format::Csc) => run!(CscMatrix::from_coo_with(coo, idx)?),
        (_, Format::Vcsc) => run!(VcscMatrix::from_coo_with(coo, idx)?),
        (_, Format::Ivcsc) => run!(IvcscMatrix::from_coo(coo)),
    }
}

/// Benchmarks every configured format and operation at each point of a
/// redundancy sweep. Records come out point-major, then format, then op.
pub fn run_benchmark<T: Value>(
    spec: &GenSpec,
    unique_list: &[usize],
    cfg: &BenchConfig,
    sink: &mut Sink,
) -> Result<Vec<BenchRecord>> {
    let structure = generate_structure::<T>(spec)?;
    let inputs = Inputs::<T>::new(spec.dims, cfg.spmm_cols)?;
    let mut records = Vec::with_capacity(unique_list.len() * cfg.formats.len() * cfg.ops.len());
    for &n_unique in unique_list {
        let coo = reassign_values(&structure, n_unique, spec.seed)?;
        let mmr = mmr(&column_stats(&coo))?;
        for &format in &cfg.formats {
            for &op in &cfg.ops {
                let times = bench_one(format, op, &coo, &inputs, cfg, sink)?;
                records.push(BenchRecord::new(format, op, n_unique, mmr, times));
            }
        }
    }
    Ok(records)
}

/// Writes records as CSV with times in nanoseconds.
pub fn write_csv<W: Write>(records: &[BenchRecord], repeats: usize, mut w: W) -> Result<()> {
    write!(w, "format,op,n_unique,mmr")?;
    for i in 1..=repeats {
        write!(w, ",rep{i}")?;
    }
    writeln!(w, ",mean")?;
    for rec in records {
        write!(w, "{},{},{},{:.6}", rec.format, rec.op, rec.n_unique, rec.mmr)?;
        for t in &rec.times {
            write!(w, ",{}", t.as_nanos())?;
        }
        writeln!(w, ",{}", rec.mean.as_nanos())?;
    }
    Ok(())
}
