//! Matrix Market coordinate files.
//!
//! Reads `real`, `integer` and `pattern` fields with `general`, `symmetric`
//! or `skew-symmetric` storage. Indices are converted from 1-based to
//! 0-based, symmetric storage is expanded, duplicates are summed and zeros
//! dropped. Writing always produces `general` storage.

use std::io::Write;

use ivsk_core::{CooMatrix, Dims, DuplicatePolicy, NumericClass, Triplet, Value, ValueKind};

use crate::error::{IoError, Result};

/// Comment line prefix recording the element type a file was written from.
const HINT: &str = "% ivsk value-type";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// A parsed file whose values are still text, so the caller can pick the
/// element type after looking at them.
#[derive(Clone, Debug)]
pub struct MatrixMarket<'a> {
    pub field: Field,
    pub symmetry: Symmetry,
    pub dims: Dims,
    /// Element type recorded by [`write_matrix_market`], if present.
    pub value_hint: Option<ValueKind>,
    entries: Vec<(usize, usize, &'a str, usize)>,
}

fn mm_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::MatrixMarket {
        line,
        msg: msg.into(),
    }
}

impl<'a> MatrixMarket<'a> {
    pub fn parse(text: &'a str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, banner) = lines.next().ok_or_else(|| mm_err(1, "empty file"))?;
        let tokens: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
        if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
            return Err(mm_err(1, "missing %%MatrixMarket matrix banner"));
        }
        if tokens[2] != "coordinate" {
            return Err(mm_err(1, format!("unsupported layout '{}'", tokens[2])));
        }
        let field = match tokens[3].as_str() {
            "real" | "double" => Field::Real,
            "integer" => Field::Integer,
            "pattern" => Field::Pattern,
            other => return Err(mm_err(1, format!("unsupported field '{other}'"))),
        };
        let symmetry = match tokens[4].as_str() {
            "general" => Symmetry::General,
            "symmetric" => Symmetry::Symmetric,
            "skew-symmetric" => Symmetry::SkewSymmetric,
            other => return Err(mm_err(1, format!("unsupported symmetry '{other}'"))),
        };
        if field == Field::Pattern && symmetry == Symmetry::SkewSymmetric {
            return Err(mm_err(1, "pattern matrices cannot be skew-symmetric"));
        }

        let mut value_hint = None;
        let mut body = lines.filter(|(_, l)| {
            let t = l.trim_start();
            if let Some(name) = t.strip_prefix(HINT) {
                value_hint = ValueKind::from_name(name.trim());
            }
            !t.is_empty() && !t.starts_with('%')
        });
        let (size_line, size) = body.next().ok_or_else(|| mm_err(2, "missing size line"))?;
        let nums: Vec<usize> = size
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| mm_err(size_line, "bad size line")))
            .collect::<Result<_>>()?;
        let [nrows, ncols, nnz] = nums[..] else {
            return Err(mm_err(size_line, "size line needs rows, columns and entries"));
        };
        let dims = Dims::new(nrows, ncols).map_err(|e| mm_err(size_line, e.to_string()))?;

        let mut entries = Vec::with_capacity(nnz);
        for (line, l) in body {
            let mut it = l.split_whitespace();
            let mut index = |what: &str, bound: usize| -> Result<usize> {
                let i: usize = it
                    .next()
                    .ok_or_else(|| mm_err(line, format!("missing {what} index")))?
                    .parse()
                    .map_err(|_| mm_err(line, format!("bad {what} index")))?;
                if i == 0 || i > bound {
                    return Err(mm_err(line, format!("{what} index {i} outside 1..={bound}")));
                }
                Ok(i - 1)
            };
            let row = index("row", nrows)?;
            let col = index("column", ncols)?;
            let value = match field {
                Field::Pattern => "1",
                _ => it.next().ok_or_else(|| mm_err(line, "missing value"))?,
            };
            if it.next().is_some() {
                return Err(mm_err(line, "trailing tokens"));
            }
            entries.push((row, col, value, line));
        }
        if entries.len() != nnz {
            return Err(mm_err(
                size_line,
                format!("size line declares {nnz} entries, found {}", entries.len()),
            ));
        }
        Ok(MatrixMarket {
            field,
            symmetry,
            dims,
            value_hint,
            entries,
        })
    }

    /// The recorded element type if there is one. Otherwise the smallest
    /// type holding every value: `u8` for patterns, the narrowest fitting
    /// integer type for integer fields (unsigned when no entry is negative),
    /// `f64` for reals.
    pub fn natural_kind(&self) -> ValueKind {
        if let Some(kind) = self.value_hint {
            return kind;
        }
        match self.field {
            Field::Pattern => ValueKind::U8,
            Field::Real => ValueKind::F64,
            Field::Integer => {
                let (mut lo, mut hi) = (0i128, 0i128);
                for (_, _, v, _) in &self.entries {
                    let x: i128 = v.parse().unwrap_or(i128::MAX);
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
                if self.symmetry == Symmetry::SkewSymmetric {
                    lo = lo.min(-hi);
                    hi = hi.max(-lo);
                }
                let class = if lo < 0 { NumericClass::Signed } else { NumericClass::Unsigned };
                [1usize, 2, 4, 8]
                    .into_iter()
                    .find(|&w| {
                        let bits = 8 * w as u32;
                        match class {
                            NumericClass::Unsigned => hi < (1i128 << bits),
                            _ => lo >= -(1i128 << (bits - 1)) && hi < (1i128 << (bits - 1)),
                        }
                    })
                    .and_then(|w| ValueKind::new(w, class).ok())
                    .unwrap_or(ValueKind::F64)
            }
        }
    }

    pub fn to_coo<T: Value>(&self) -> Result<CooMatrix<T>> {
        if self.symmetry == Symmetry::SkewSymmetric && T::KIND.class() == NumericClass::Unsigned {
            return Err(mm_err(1, format!("skew-symmetric data cannot be stored as {}", T::KIND)));
        }
        let mut triplets = Vec::with_capacity(self.entries.len() * 2);
        for &(row, col, text, line) in &self.entries {
            let v: T = text
                .parse()
                .map_err(|_| mm_err(line, format!("value '{text}' is not representable as {}", T::KIND)))?;
            triplets.push(Triplet::new(row, col, v));
            if row != col {
                match self.symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => triplets.push(Triplet::new(col, row, v)),
                    Symmetry::SkewSymmetric => triplets.push(Triplet::new(col, row, v.wrapping_neg())),
                }
            }
        }
        Ok(CooMatrix::from_triplets(self.dims, triplets, DuplicatePolicy::Sum)?)
    }
}

/// Parses a Matrix Market file into the given element type.
pub fn read_matrix_market<T: Value>(text: &str) -> Result<CooMatrix<T>> {
    MatrixMarket::parse(text)?.to_coo()
}

pub fn write_matrix_market<T: Value, W: Write>(m: &CooMatrix<T>, mut w: W) -> Result<()> {
    let field = match T::KIND.class() {
        NumericClass::Float => "real",
        _ => "integer",
    };
    writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
    writeln!(w, "{HINT} {}", T::KIND)?;
    writeln!(w, "{} {} {}", m.dims().nrows(), m.dims().ncols(), m.nnz())?;
    for t in m.triplets() {
        // Debug formatting of floats is the shortest exact round-trip form
        writeln!(w, "{} {} {:?}", t.row + 1, t.col + 1, t.value)?;
    }
    Ok(())
}

pub fn matrix_market_string<T: Value>(m: &CooMatrix<T>) -> String {
    let mut buf = Vec::new();
    write_matrix_market(m, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDENTITY: &str = "%%MatrixMarket matrix coordinate integer general\n% comment\n2 2 2\n1 1 1\n2 2 1\n";

    #[test]
    fn reads_identity() {
        let m: CooMatrix<i32> = read_matrix_market(IDENTITY).unwrap();
        assert_eq!(m.to_dense(), ivsk_core::DenseMatrix::identity(2));
    }

    #[test]
    fn pattern_values_are_one() {
        let text = "%%MatrixMarket matrix coordinate pattern general\n3 2 2\n3 1\n1 2\n";
        let mm = MatrixMarket::parse(text).unwrap();
        assert_eq!(mm.natural_kind(), ValueKind::U8);
        let m: CooMatrix<u8> = mm.to_coo().unwrap();
        assert_eq!(m.triplets(), &[Triplet::new(2, 0, 1), Triplet::new(0, 1, 1)]);
    }

    #[test]
    fn duplicates_sum() {
        let text = "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 2\n1 1 2\n";
        let m: CooMatrix<i64> = read_matrix_market(text).unwrap();
        assert_eq!(m.triplets(), &[Triplet::new(0, 0, 4)]);
    }

    #[test]
    fn symmetric_expands() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 2.5\n3 1 -1\n";
        let m: CooMatrix<f64> = read_matrix_market(text).unwrap();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.to_dense().get(0, 2), -1.0);
        let text = "%%MatrixMarket matrix coordinate integer skew-symmetric\n3 3 1\n3 1 4\n";
        let m: CooMatrix<i8> = read_matrix_market(text).unwrap();
        assert_eq!(m.to_dense().get(0, 2), -4);
        assert!(read_matrix_market::<u8>(text).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "",
            "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n",
            "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n",
            "%%MatrixMarket matrix coordinate real hermitian\n1 1 1\n1 1 1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2\n",
            "hello\n",
        ] {
            assert!(MatrixMarket::parse(bad).is_err(), "accepted {bad:?}");
        }
        assert!(read_matrix_market::<u8>("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 300\n").is_err());
        assert!(read_matrix_market::<i32>("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.5\n").is_err());
    }

    #[test]
    fn natural_integer_kinds() {
        let kind = |vals: &str| {
            let text = format!("%%MatrixMarket matrix coordinate integer general\n9 1 2\n{vals}");
            MatrixMarket::parse(&text).unwrap().natural_kind()
        };
        assert_eq!(kind("1 1 255\n2 1 1\n"), ValueKind::U8);
        assert_eq!(kind("1 1 256\n2 1 1\n"), ValueKind::U16);
        assert_eq!(kind("1 1 -1\n2 1 127\n"), ValueKind::I8);
        assert_eq!(kind("1 1 -1\n2 1 128\n"), ValueKind::I16);
        assert_eq!(kind("1 1 5000000000\n2 1 1\n"), ValueKind::U64);
    }

    #[test]
    fn write_then_read() {
        for text in [
            IDENTITY,
            "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 2\n1 1 2\n",
        ] {
            let m: CooMatrix<i32> = read_matrix_market(text).unwrap();
            let back: CooMatrix<i32> = read_matrix_market(&matrix_market_string(&m)).unwrap();
            assert_eq!(back, m);
        }
        let m = CooMatrix::from_triplets(
            Dims::new(2, 2).unwrap(),
            vec![Triplet::new(0, 1, 0.1f32), Triplet::new(1, 0, 1e-30), Triplet::new(1, 1, 3e38)],
            DuplicatePolicy::Sum,
        )
        .unwrap();
        let text = matrix_market_string(&m);
        assert_eq!(MatrixMarket::parse(&text).unwrap().natural_kind(), ValueKind::F32);
        let back: CooMatrix<f32> = read_matrix_market(&text).unwrap();
        assert_eq!(back, m);
    }
}
