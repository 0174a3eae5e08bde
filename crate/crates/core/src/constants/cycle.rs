use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::rational::binomial;

/// Largest cycle the exhaustive subset tally accepts.
pub const BRUTE_FORCE_MAX_N: usize = 20;

/// `2n · C(n + 2m − 1, 2m − 1)`.
///
/// Counted as stated this overshoots the number of vertex subsets of `C_n` with at
/// most `m` arcs (for `n = 3, m = 1` it gives 24 against 8), so treat it as an
/// upper bound.
pub fn cycle_subset_count(n: u64, m: u64) -> Result<BigUint> {
    if n < 3 || m == 0 {
        return Err(Error::invalid("cycle subset count needs n >= 3 and m >= 1"));
    }
    Ok(BigUint::from(2 * n) * binomial(n + 2 * m - 1, 2 * m - 1))
}

/// `hist[a]` is the number of subsets of `C_n`'s vertices forming exactly `a` arcs.
/// The full vertex set counts as one arc.
pub fn cycle_component_histogram(n: usize) -> Result<Vec<u64>> {
    if !(3..=BRUTE_FORCE_MAX_N).contains(&n) {
        return Err(Error::invalid(format!("exhaustive tally needs 3 <= n <= {BRUTE_FORCE_MAX_N}")));
    }
    let full = (1u32 << n) - 1;
    let mut hist = vec![0u64; n / 2 + 2];
    for mask in 0..=full {
        hist[arcs(mask, n)] += 1;
    }
    Ok(hist)
}

/// Subsets of `C_n` with at most `m` arcs.
pub fn cycle_subset_tally(n: usize, m: usize) -> Result<u64> {
    Ok(cycle_component_histogram(n)?.iter().take(m + 1).sum())
}

/// Number of maximal arcs in the subset `mask` of `C_n`.
pub fn arcs(mask: u32, n: usize) -> usize {
    if mask == (1u32 << n) - 1 {
        return 1;
    }
    // An arc starts at every member whose predecessor is absent.
    let rotated = ((mask << 1) | (mask >> (n - 1))) & ((1u32 << n) - 1);
    (mask & !rotated).count_ones() as usize
}

/// Edges of `C_n` leaving the subset `mask`.
pub fn cycle_cut(mask: u32, n: usize) -> usize {
    let rotated = ((mask << 1) | (mask >> (n - 1))) & ((1u32 << n) - 1);
    (mask ^ rotated).count_ones() as usize
}
