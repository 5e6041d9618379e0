//! Colexicographic enumeration of fixed-size index subsets.
//!
//! Subsets are sorted ascending; colex order compares the largest element
//! first. Rank `r` of `c_0 < … < c_{k−1}` is `Σ C(c_i, i + 1)`.

use std::cmp::Ordering;

use rayon::prelude::*;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Subset of colex rank `rank` among the `k`-subsets.
pub fn unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        // largest c with C(c, i) <= rank
        let mut c = i - 1;
        while binomial(c + 1, i) <= rank {
            c += 1;
        }
        rank -= binomial(c, i);
        out[i - 1] = c;
    }
    out
}

pub fn rank(subset: &[usize]) -> u128 {
    subset.iter().enumerate().map(|(i, &c)| binomial(c, i + 1)).sum()
}

/// Advances to the colex successor within `{0, …, n − 1}`; false at the end.
pub fn next(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in 0..k {
        let limit = if i + 1 < k { subset[i + 1] } else { n };
        if subset[i] + 1 < limit {
            subset[i] += 1;
            for (j, v) in subset.iter_mut().enumerate().take(i) {
                *v = j;
            }
            return true;
        }
    }
    false
}

/// Colex comparison of two sorted subsets of equal size.
pub fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

const CHUNK: u128 = 512;

/// Folds `visit` over every `k`-subset of `{0, …, n − 1}` in parallel.
///
/// Chunks are processed independently and their partial results are merged
/// left to right in colex order, so the result does not depend on scheduling.
pub fn par_fold<T, V, M>(n: usize, k: usize, identity: impl Fn() -> T + Sync, visit: V, merge: M) -> T
where
    T: Send,
    V: Fn(T, &[usize], u128) -> T + Sync,
    M: Fn(T, T) -> T,
{
    let total = binomial(n, k);
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<T> = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let start = c as u128 * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut subset = unrank(start, k);
            let mut acc = identity();
            let mut r = start;
            loop {
                acc = visit(acc, &subset, r);
                r += 1;
                if r >= end || !next(&mut subset, n) {
                    break;
                }
            }
            acc
        })
        .collect();
    parts.into_iter().fold(identity(), merge)
}
