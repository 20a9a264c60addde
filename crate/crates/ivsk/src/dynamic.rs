//! Runtime dispatch from a [`ValueKind`](ivsk_core::ValueKind) to a concrete
//! element type.

/// Expands `$body` once per element type, with `$T` bound to the type that
/// matches `$kind`.
///
/// ```
/// use ivsk::with_value_type;
/// use ivsk_core::{Value, ValueKind};
///
/// let size = with_value_type!(ValueKind::I16, T => T::SIZE);
/// assert_eq!(size, 2);
/// ```
#[macro_export]
macro_rules! with_value_type {
    ($kind:expr, $T:ident => $body:expr) => {{
        use $crate::ivsk_core::ValueKind as __Kind;
        match $kind {
            k if k == __Kind::U8 => { type $T = u8; $body }
            k if k == __Kind::U16 => { type $T = u16; $body }
            k if k == __Kind::U32 => { type $T = u32; $body }
            k if k == __Kind::U64 => { type $T = u64; $body }
            k if k == __Kind::I8 => { type $T = i8; $body }
            k if k == __Kind::I16 => { type $T = i16; $body }
            k if k == __Kind::I32 => { type $T = i32; $body }
            k if k == __Kind::I64 => { type $T = i64; $body }
            k if k == __Kind::F32 => { type $T = f32; $body }
            _ => { type $T = f64; $body }
        }
    }};
}
