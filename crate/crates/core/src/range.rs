//! Splitting inclusive integer ranges into contiguous pieces.

use alloc::vec::Vec;

/// Splits `[lo, hi]` into at most `parts` contiguous, ascending, disjoint
/// inclusive subranges whose union is `[lo, hi]`. An empty range (`lo > hi`)
/// yields no pieces.
pub fn split_inclusive(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    if lo > hi {
        return Vec::new();
    }
    let parts = parts.max(1) as u128;
    let len = u128::from(hi - lo) + 1;
    let parts = parts.min(len);
    (0..parts)
        .map(|i| {
            let start = u128::from(lo) + len * i / parts;
            let end = u128::from(lo) + len * (i + 1) / parts - 1;
            (start as u64, end as u64)
        })
        .collect()
}
