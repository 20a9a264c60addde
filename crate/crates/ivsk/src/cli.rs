//! The `ivsk` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ivsk_core::analytics::{compression_report_with, to_gb, to_gib, CompressionReport};
use ivsk_core::matgen::{generate, GenSpec};
use ivsk_core::sweep::{crossover_mmr, run_sweep, SweepPoint};
use ivsk_core::{Dims, Format, IndexWidth, ValueKind};

use crate::bench::{run_benchmark, write_csv, BenchConfig, Op, Sink};
use crate::error::IoError;
use crate::files::{encode, FileKind, Loaded};
use crate::with_value_type;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ivsk", version, about = "Redundancy-aware sparse matrix storage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print dimensions, redundancy and the size of every format.
    Stats(StatsArgs),
    /// Convert between Matrix Market and the binary container.
    Convert(ConvertArgs),
    /// Generate a random matrix with a given number of unique values.
    Gen(GenArgs),
    /// Measure all formats while the number of unique values varies.
    Sweep(SweepArgs),
    /// Time the compressed-form operations over a sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    pub input: PathBuf,
    /// Input file type, overriding the extension: mtx or ivsk.
    #[arg(long, value_parser = parse_file_kind)]
    pub format: Option<FileKind>,
    /// Element type used for Matrix Market input.
    #[arg(long, value_parser = parse_value_kind)]
    pub value_type: Option<ValueKind>,
    /// Index size in bytes for CSC and VCSC (1, 2, 4 or 8).
    #[arg(long, value_parser = parse_index_width)]
    pub idx_size: Option<IndexWidth>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also write the report as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Layout stored in a .ivsk output.
    #[arg(long, value_parser = parse_format)]
    pub to: Format,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, value_parser = parse_count)]
    pub rows: usize,
    #[arg(long, value_parser = parse_count)]
    pub cols: usize,
    /// Fraction of zero entries in every column.
    #[arg(long)]
    pub sparsity: f64,
    /// Seed for the value pool and value assignment.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Seed for the sparsity pattern.
    #[arg(long, default_value_t = 0)]
    pub position_seed: u64,
    #[arg(long, value_parser = parse_value_kind, default_value = "f32")]
    pub value_type: ValueKind,
    #[arg(long, value_parser = parse_index_width, default_value = "4")]
    pub idx_size: IndexWidth,
}

impl MatrixArgs {
    fn spec(&self, n_unique: usize) -> Result<GenSpec, CliError> {
        let dims = Dims::new(self.rows, self.cols).map_err(usage)?;
        let spec = GenSpec::new(dims, self.sparsity, n_unique).with_seeds(self.seed, self.position_seed);
        spec.nnz_per_column().map_err(usage)?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Unique values in the pool.
    #[arg(long, value_parser = parse_count)]
    pub unique: usize,
    /// Layout stored in a .ivsk output.
    #[arg(long, value_parser = parse_format, default_value = "ivcsc")]
    pub to: Format,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Comma-separated pool sizes, e.g. 1,10,1e3.
    #[arg(long, value_parser = parse_count, value_delimiter = ',', required = true)]
    pub unique_list: Vec<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    #[arg(long, value_parser = parse_count, value_delimiter = ',', required = true)]
    pub unique_list: Vec<usize>,
    #[arg(long, value_parser = parse_op, value_delimiter = ',', default_value = "construct,iterate,scalar,spmv,spmm")]
    pub ops: Vec<Op>,
    #[arg(long, value_parser = parse_format, value_delimiter = ',', default_value = "csc,vcsc,ivcsc")]
    pub formats: Vec<Format>,
    #[arg(long, default_value_t = crate::bench::REPEATS)]
    pub repeats: usize,
    /// Columns of the dense operand for SpMM.
    #[arg(long, default_value_t = 4)]
    pub spmm_cols: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_file_kind(s: &str) -> Result<FileKind, String> {
    FileKind::from_name(s).ok_or_else(|| format!("expected mtx or ivsk, got '{s}'"))
}

fn parse_value_kind(s: &str) -> Result<ValueKind, String> {
    ValueKind::from_name(s).ok_or_else(|| format!("unknown value type '{s}'"))
}

fn parse_index_width(s: &str) -> Result<IndexWidth, String> {
    s.parse::<usize>()
        .ok()
        .and_then(|n| IndexWidth::new(n).ok())
        .ok_or_else(|| format!("index size must be 1, 2, 4 or 8, got '{s}'"))
}

fn parse_format(s: &str) -> Result<Format, String> {
    Format::from_name(s).ok_or_else(|| format!("expected csc, vcsc or ivcsc, got '{s}'"))
}

fn parse_op(s: &str) -> Result<Op, String> {
    Op::from_name(s).ok_or_else(|| format!("unknown operation '{s}'"))
}

/// A non-negative integer, also accepted in exponent form such as `1e6`.
fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(format!("expected a count, got '{s}'")),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    File(#[from] IoError),
    #[error("{}: {source}", path.display())]
    Path { path: PathBuf, source: IoError },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::File(_) | CliError::Path { .. } => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Path {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

/// Whether output may use ANSI styling.
pub fn color_enabled() -> bool {
    std::env::var_os("IVSK_NO_COLOR").is_none() && io::stdout().is_terminal()
}

struct Style {
    color: bool,
}

impl Style {
    fn bold(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[1m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn load(args: &InputArgs) -> Result<(Loaded, ValueKind, IndexWidth), CliError> {
    let kind = match args.format {
        Some(k) => k,
        None => FileKind::detect(&args.input)?,
    };
    let loaded = Loaded::read(&args.input, kind).map_err(|source| CliError::Path {
        path: args.input.clone(),
        source,
    })?;
    let value_kind = match (args.value_type, kind) {
        (Some(v), FileKind::MatrixMarket) => v,
        (Some(v), FileKind::Container) => {
            let stored = loaded.value_kind()?;
            if stored != v {
                return Err(IoError::UnexpectedValueKind {
                    expected: v,
                    found: stored,
                }
                .into());
            }
            v
        }
        (None, _) => loaded.value_kind()?,
    };
    let idx = args.idx_size.or(loaded.index_width()).unwrap_or_default();
    Ok((loaded, value_kind, idx))
}

fn cmd_stats(args: &StatsArgs, out: &mut dyn Write, style: &Style) -> Result<(), CliError> {
    let (loaded, kind, idx) = load(&args.input)?;
    let report = with_value_type!(kind, T => {
        let coo = loaded.to_coo::<T>()?;
        compression_report_with(&coo, idx).map_err(IoError::from)?
    });
    print_report(&report, kind, out, style).map_err(internal)?;
    if let Some(path) = &args.out {
        write_file(path, report_csv(&report).as_bytes())?;
    }
    Ok(())
}

fn print_report(r: &CompressionReport, kind: ValueKind, out: &mut dyn Write, style: &Style) -> io::Result<()> {
    writeln!(out, "{}", style.bold("matrix"))?;
    writeln!(out, "  dims        {} x {}", r.dims.nrows(), r.dims.ncols())?;
    writeln!(out, "  nnz         {}", r.nnz)?;
    writeln!(out, "  sparsity    {:.2}%", r.sparsity * 100.0)?;
    writeln!(out, "  MMR         {:.6}", r.mmr)?;
    writeln!(out, "  value type  {kind} ({} B), index size {} B", r.value_size, r.idx_size)?;
    writeln!(out, "{}", style.bold(&format!(
        "{:<7} {:>16} {:>12} {:>12} {:>10} {:>10}",
        "format", "bytes", "GiB", "GB", "vs dense", "vs CSC"
    )))?;
    let rows: [(&str, u128); 4] = [
        ("dense", r.dense_bytes),
        ("csc", r.csc_bytes as u128),
        ("vcsc", r.vcsc_bytes as u128),
        ("ivcsc", r.ivcsc_bytes as u128),
    ];
    for (name, bytes) in rows {
        writeln!(
            out,
            "{:<7} {:>16} {:>12.3} {:>12.3} {:>9.2}% {:>9.2}%",
            name,
            bytes,
            to_gib(bytes),
            to_gb(bytes),
            100.0 * bytes as f64 / r.dense_bytes as f64,
            100.0 * bytes as f64 / r.csc_bytes as f64,
        )?;
    }
    Ok(())
}

fn report_csv(r: &CompressionReport) -> String {
    format!(
        "rows,cols,nnz,sparsity,mmr,value_size,idx_size,dense_bytes,csc_bytes,vcsc_bytes,ivcsc_bytes,vcsc_ratio,ivcsc_ratio\n\
         {},{},{},{:.6},{:.6},{},{},{},{},{},{},{:.6},{:.6}\n",
        r.dims.nrows(),
        r.dims.ncols(),
        r.nnz,
        r.sparsity,
        r.mmr,
        r.value_size,
        r.idx_size,
        r.dense_bytes,
        r.csc_bytes,
        r.vcsc_bytes,
        r.ivcsc_bytes,
        r.vcsc_ratio,
        r.ivcsc_ratio,
    )
}

fn cmd_convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (loaded, kind, idx) = load(&args.input)?;
    let target = FileKind::detect(&args.out)?;
    let (bytes, nnz) = with_value_type!(kind, T => {
        let coo = loaded.to_coo::<T>()?;
        (encode(&coo, target, args.to, idx)?, coo.nnz())
    });
    write_file(&args.out, &bytes)?;
    writeln!(out, "wrote {} ({} nonzeros, {} bytes)", args.out.display(), nnz, bytes.len()).map_err(internal)?;
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let target = FileKind::detect(&args.out)?;
    let m = &args.matrix;
    let spec = m.spec(args.unique)?;
    let bytes = with_value_type!(m.value_type, T => {
        let coo = generate::<T>(&spec).map_err(usage)?;
        encode(&coo, target, args.to, m.idx_size)?
    });
    write_file(&args.out, &bytes)?;
    writeln!(out, "wrote {} ({} bytes)", args.out.display(), bytes.len()).map_err(internal)?;
    Ok(())
}

/// CSV header of a sweep table.
pub const SWEEP_HEADER: &str = "n_unique,mmr,dense_bytes,csc_model,csc_actual,csc_ratio,\
vcsc_model,vcsc_actual,vcsc_ratio,ivcsc_model,ivcsc_actual,ivcsc_ratio";

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&format!("{},{:.6},{}", p.n_unique, p.mmr, p.dense_bytes));
        for f in Format::ALL {
            let sz = p.sizes(f);
            s.push_str(&format!(",{},{},{:.6}", sz.model, sz.actual, p.ratio_over_dense(f)));
        }
        s.push('\n');
    }
    s
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let m = &args.matrix;
    let spec = m.spec(1)?;
    let points = with_value_type!(m.value_type, T => run_sweep::<T>(&spec, &args.unique_list, m.idx_size).map_err(usage)?);
    let csv = sweep_csv(&points);
    match &args.out {
        Some(path) => {
            write_file(path, csv.as_bytes())?;
            for f in [Format::Vcsc, Format::Ivcsc] {
                match crossover_mmr(&points, f) {
                    Some(x) => writeln!(out, "{f} smaller than csc above MMR {x:.6}"),
                    None => writeln!(out, "{f} never crosses csc on this sweep"),
                }
                .map_err(internal)?;
            }
        }
        None => out.write_all(csv.as_bytes()).map_err(internal)?,
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.repeats == 0 {
        return Err(usage("--repeats must be at least 1"));
    }
    let m = &args.matrix;
    let spec = m.spec(1)?;
    let cfg = BenchConfig {
        ops: args.ops.clone(),
        formats: args.formats.clone(),
        repeats: args.repeats,
        idx: m.idx_size,
        spmm_cols: args.spmm_cols,
        ..BenchConfig::default()
    };
    let mut sink = Sink::default();
    let records = with_value_type!(m.value_type, T => run_benchmark::<T>(&spec, &args.unique_list, &cfg, &mut sink).map_err(usage)?);
    let mut csv = Vec::new();
    write_csv(&records, args.repeats, &mut csv).map_err(internal)?;
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(&csv).map_err(internal)?,
    }
    Ok(())
}

/// Runs one parsed command, writing human-readable output to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let style = Style { color: color_enabled() };
    match &cli.command {
        Command::Stats(a) => cmd_stats(a, out, &style),
        Command::Convert(a) => cmd_convert(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("ivsk: {e}");
            e.exit_code()
        }
    }
}
