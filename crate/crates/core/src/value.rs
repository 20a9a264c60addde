//! Numeric element types and index widths.
//!
//! Every format in this crate is generic over a [`Value`]: one of the ten
//! primitive numeric types `u8..u64`, `i8..i64`, `f32`, `f64`. Values have a
//! canonical little-endian byte encoding, and two values are "the same" for
//! grouping purposes iff those encodings are identical.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumericClass {
    Unsigned,
    Signed,
    Float,
}

impl NumericClass {
    pub fn name(self) -> &'static str {
        match self {
            NumericClass::Unsigned => "unsigned-int",
            NumericClass::Signed => "signed-int",
            NumericClass::Float => "float",
        }
    }
}

/// Runtime description of an element type: byte width plus numeric class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValueKind {
    width: u8,
    class: NumericClass,
}

impl ValueKind {
    pub const U8: ValueKind = ValueKind::raw(1, NumericClass::Unsigned);
    pub const U16: ValueKind = ValueKind::raw(2, NumericClass::Unsigned);
    pub const U32: ValueKind = ValueKind::raw(4, NumericClass::Unsigned);
    pub const U64: ValueKind = ValueKind::raw(8, NumericClass::Unsigned);
    pub const I8: ValueKind = ValueKind::raw(1, NumericClass::Signed);
    pub const I16: ValueKind = ValueKind::raw(2, NumericClass::Signed);
    pub const I32: ValueKind = ValueKind::raw(4, NumericClass::Signed);
    pub const I64: ValueKind = ValueKind::raw(8, NumericClass::Signed);
    pub const F32: ValueKind = ValueKind::raw(4, NumericClass::Float);
    pub const F64: ValueKind = ValueKind::raw(8, NumericClass::Float);

    /// All supported kinds, in container-code order.
    pub const ALL: [ValueKind; 10] = [
        Self::U8,
        Self::U16,
        Self::U32,
        Self::U64,
        Self::I8,
        Self::I16,
        Self::I32,
        Self::I64,
        Self::F32,
        Self::F64,
    ];

    const fn raw(width: u8, class: NumericClass) -> Self {
        ValueKind { width, class }
    }

    pub fn new(width_bytes: usize, class: NumericClass) -> Result<Self> {
        let ok = match class {
            NumericClass::Float => matches!(width_bytes, 4 | 8),
            _ => matches!(width_bytes, 1 | 2 | 4 | 8),
        };
        if !ok {
            return Err(Error::InvalidValueKind {
                width: width_bytes,
                class: class.name(),
            });
        }
        Ok(ValueKind::raw(width_bytes as u8, class))
    }

    pub fn width_bytes(self) -> usize {
        self.width as usize
    }

    pub fn class(self) -> NumericClass {
        self.class
    }

    /// One-byte code used by the binary container.
    pub fn code(self) -> u8 {
        Self::ALL.iter().position(|k| *k == self).unwrap() as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    /// Short Rust-style name, e.g. `"u16"` or `"f32"`.
    pub fn name(self) -> &'static str {
        const NAMES: [&str; 10] = [
            "u8", "u16", "u32", "u64", "i8", "i16", "i32", "i64", "f32", "f64",
        ];
        NAMES[self.code() as usize]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bytes per stored index in the CSC and VCSC layouts (and per VCSC count).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexWidth(u8);

impl IndexWidth {
    pub const DEFAULT: IndexWidth = IndexWidth(4);

    pub fn new(bytes: usize) -> Result<Self> {
        match bytes {
            1 | 2 | 4 | 8 => Ok(IndexWidth(bytes as u8)),
            _ => Err(Error::InvalidIndexWidth(bytes)),
        }
    }

    pub fn bytes(self) -> usize {
        self.0 as usize
    }

    /// Largest value representable at this width.
    pub fn max_value(self) -> u64 {
        if self.0 == 8 {
            u64::MAX
        } else {
            (1u64 << (8 * self.0 as u32)) - 1
        }
    }

    pub fn check(self, what: &'static str, value: u64) -> Result<()> {
        if value > self.max_value() {
            return Err(Error::IndexOverflow {
                what,
                value,
                idx_size: self.bytes(),
            });
        }
        Ok(())
    }
}

impl Default for IndexWidth {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A matrix element type.
///
/// Integer arithmetic wraps; float arithmetic is plain IEEE 754.
pub trait Value:
    Copy + PartialEq + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
    const KIND: ValueKind;
    const SIZE: usize;
    const ZERO: Self;
    const ONE: Self;

    /// Numeric zero test; `-0.0` counts as zero.
    fn is_zero(self) -> bool;
    fn wrapping_add(self, rhs: Self) -> Self;
    fn wrapping_mul(self, rhs: Self) -> Self;
    fn wrapping_neg(self) -> Self;
    /// Canonical bit pattern, zero-extended to 64 bits.
    fn to_bits64(self) -> u64;
    /// Total order used to sort unique values within a column. Consistent
    /// with bitwise equality; numeric order for all non-NaN values.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    fn write_le(self, out: &mut Vec<u8>);
    /// Decodes from exactly `SIZE` little-endian bytes.
    fn read_le(bytes: &[u8]) -> Self;
    fn to_f64(self) -> f64;
    fn from_f64_lossy(x: f64) -> Self;
    /// Number of distinct nonzero values of this type (saturating).
    fn nonzero_count() -> u64;
    /// Draws a random nonzero value.
    fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self;

    #[inline]
    fn same_bits(self, other: Self) -> bool {
        self.to_bits64() == other.to_bits64()
    }
}

macro_rules! impl_int_value {
    ($t:ty, $u:ty, $kind:expr) => {
        impl Value for $t {
            const KIND: ValueKind = $kind;
            const SIZE: usize = core::mem::size_of::<$t>();
            const ZERO: Self = 0;
            const ONE: Self = 1;

            #[inline]
            fn is_zero(self) -> bool {
                self == 0
            }
            #[inline]
            fn wrapping_add(self, rhs: Self) -> Self {
                <$t>::wrapping_add(self, rhs)
            }
            #[inline]
            fn wrapping_mul(self, rhs: Self) -> Self {
                <$t>::wrapping_mul(self, rhs)
            }
            #[inline]
            fn wrapping_neg(self) -> Self {
                <$t>::wrapping_neg(self)
            }
            #[inline]
            fn to_bits64(self) -> u64 {
                self as $u as u64
            }
            #[inline]
            fn canonical_cmp(&self, other: &Self) -> Ordering {
                self.cmp(other)
            }
            #[inline]
            fn write_le(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
            #[inline]
            fn read_le(bytes: &[u8]) -> Self {
                let mut buf = [0u8; core::mem::size_of::<$t>()];
                buf.copy_from_slice(&bytes[..Self::SIZE]);
                <$t>::from_le_bytes(buf)
            }
            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn from_f64_lossy(x: f64) -> Self {
                x as $t
            }
            fn nonzero_count() -> u64 {
                <$u>::MAX as u64
            }
            fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
                loop {
                    let v = rng.random::<$t>();
                    if v != 0 {
                        return v;
                    }
                }
            }
        }
    };
}

impl_int_value!(u8, u8, ValueKind::U8);
impl_int_value!(u16, u16, ValueKind::U16);
impl_int_value!(u32, u32, ValueKind::U32);
impl_int_value!(u64, u64, ValueKind::U64);
impl_int_value!(i8, u8, ValueKind::I8);
impl_int_value!(i16, u16, ValueKind::I16);
impl_int_value!(i32, u32, ValueKind::I32);
impl_int_value!(i64, u64, ValueKind::I64);

/// Half-width of the interval random float values are drawn from.
pub const FLOAT_SAMPLE_RANGE: f64 = 1000.0;

macro_rules! impl_float_value {
    ($t:ty, $kind:expr) => {
        impl Value for $t {
            const KIND: ValueKind = $kind;
            const SIZE: usize = core::mem::size_of::<$t>();
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;

            #[inline]
            fn is_zero(self) -> bool {
                self == 0.0
            }
            #[inline]
            fn wrapping_add(self, rhs: Self) -> Self {
                self + rhs
            }
            #[inline]
            fn wrapping_mul(self, rhs: Self) -> Self {
                self * rhs
            }
            #[inline]
            fn wrapping_neg(self) -> Self {
                -self
            }
            #[inline]
            fn to_bits64(self) -> u64 {
                self.to_bits() as u64
            }
            #[inline]
            fn canonical_cmp(&self, other: &Self) -> Ordering {
                self.total_cmp(other)
            }
            #[inline]
            fn write_le(self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }
            #[inline]
            fn read_le(bytes: &[u8]) -> Self {
                let mut buf = [0u8; core::mem::size_of::<$t>()];
                buf.copy_from_slice(&bytes[..Self::SIZE]);
                <$t>::from_le_bytes(buf)
            }
            #[inline]
            fn to_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn from_f64_lossy(x: f64) -> Self {
                x as $t
            }
            fn nonzero_count() -> u64 {
                // distinct finite values in the sampling interval dwarf any pool size
                u64::MAX
            }
            fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
                let r = FLOAT_SAMPLE_RANGE as $t;
                loop {
                    let v: $t = rng.random_range(-r..r);
                    if v != 0.0 {
                        return v;
                    }
                }
            }
        }
    };
}

impl_float_value!(f32, ValueKind::F32);
impl_float_value!(f64, ValueKind::F64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_codes_round_trip() {
        for (i, k) in ValueKind::ALL.iter().enumerate() {
            assert_eq!(k.code() as usize, i);
            assert_eq!(ValueKind::from_code(i as u8), Some(*k));
            assert_eq!(ValueKind::from_name(k.name()), Some(*k));
        }
        assert_eq!(ValueKind::from_code(10), None);
    }

    #[test]
    fn float_kind_needs_wide_width() {
        assert!(ValueKind::new(2, NumericClass::Float).is_err());
        assert!(ValueKind::new(1, NumericClass::Float).is_err());
        assert_eq!(ValueKind::new(4, NumericClass::Float), Ok(ValueKind::F32));
        assert!(ValueKind::new(3, NumericClass::Signed).is_err());
    }

    #[test]
    fn index_width_limits() {
        assert!(IndexWidth::new(3).is_err());
        assert_eq!(IndexWidth::new(1).unwrap().max_value(), 255);
        assert_eq!(IndexWidth::new(8).unwrap().max_value(), u64::MAX);
        assert!(IndexWidth::new(2).unwrap().check("row", 65536).is_err());
        assert!(IndexWidth::new(2).unwrap().check("row", 65535).is_ok());
    }

    #[test]
    fn negative_zero_is_zero() {
        assert!((-0.0f32).is_zero());
        assert!((-0.0f64).is_zero());
        assert!(!(f32::MIN_POSITIVE).is_zero());
    }

    #[test]
    fn le_encoding() {
        let mut out = Vec::new();
        0x0102i16.write_le(&mut out);
        (-1i8).write_le(&mut out);
        1.0f32.write_le(&mut out);
        assert_eq!(out, [0x02, 0x01, 0xff, 0x00, 0x00, 0x80, 0x3f]);
        assert_eq!(i16::read_le(&out[0..2]), 0x0102);
        assert_eq!(f32::read_le(&out[3..7]), 1.0);
        assert_eq!((-1i8).to_bits64(), 0xff);
    }

    #[test]
    fn canonical_order_is_numeric() {
        assert_eq!((-3i32).canonical_cmp(&2), Ordering::Less);
        assert_eq!((-1.5f64).canonical_cmp(&0.25), Ordering::Less);
        assert_eq!(2.0f32.canonical_cmp(&2.0), Ordering::Equal);
    }
}
