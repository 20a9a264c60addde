use alloc::vec::Vec;

use crate::value::Value;

/// One column split into value groups: unique values in canonical order,
/// their occurrence counts, and the row indices concatenated group by group
/// (ascending within a group).
pub(crate) struct Grouped<T> {
    pub values: Vec<T>,
    pub counts: Vec<usize>,
    pub indices: Vec<usize>,
}

impl<T: Value> Grouped<T> {
    /// Groups `(row, value)` entries. Zero values are skipped. Input order
    /// does not matter.
    pub fn from_entries(entries: impl Iterator<Item = (usize, T)>) -> Self {
        let mut pairs: Vec<(T, usize)> = entries
            .filter(|(_, v)| !v.is_zero())
            .map(|(r, v)| (v, r))
            .collect();
        pairs.sort_unstable_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut values: Vec<T> = Vec::new();
        let mut counts = Vec::new();
        let mut indices = Vec::with_capacity(pairs.len());
        for (v, r) in pairs {
            match values.last() {
                Some(last) if last.same_bits(v) => *counts.last_mut().unwrap() += 1,
                _ => {
                    values.push(v);
                    counts.push(1);
                }
            }
            indices.push(r);
        }
        Grouped {
            values,
            counts,
            indices,
        }
    }

    /// Iterates `(value, rows)` per group.
    pub fn groups(&self) -> impl Iterator<Item = (T, &[usize])> + '_ {
        let mut start = 0;
        self.values.iter().zip(&self.counts).map(move |(&v, &n)| {
            let rows = &self.indices[start..start + n];
            start += n;
            (v, rows)
        })
    }
}

/// True when values are nonzero and strictly ascending in canonical order.
pub(crate) fn is_canonical_order<T: Value>(values: &[T]) -> bool {
    values.iter().all(|v| !v.is_zero())
        && values
            .windows(2)
            .all(|w| w[0].canonical_cmp(&w[1]) == core::cmp::Ordering::Less)
}

/// True when no row appears twice across a column's groups.
pub(crate) fn rows_distinct(rows: impl Iterator<Item = usize>) -> bool {
    let mut all: Vec<usize> = rows.collect();
    all.sort_unstable();
    all.windows(2).all(|w| w[0] != w[1])
}
