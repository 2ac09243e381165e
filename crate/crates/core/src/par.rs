//! Chunked scans over index ranges.
//!
//! Work is split into fixed-size chunks whose boundaries do not depend on the
//! number of worker threads, and per-chunk results are merged in chunk order.
//! Floating point reductions are therefore bit-identical between the rayon
//! path, the sequential fallback (`--no-default-features`) and any thread count.

use std::cell::Cell;
use std::ops::Range;

use crate::error::Result;

/// Elements per chunk.
pub const CHUNK: usize = 1 << 12;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every scan started on this thread executed sequentially.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    struct Reset(bool);
    impl Drop for Reset {
        fn drop(&mut self) {
            FORCE_SEQUENTIAL.with(|c| c.set(self.0));
        }
    }
    let _reset = Reset(FORCE_SEQUENTIAL.with(|c| c.replace(true)));
    f()
}

/// Whether scans started on this thread may use the rayon pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get())
}

fn chunk_ranges(len: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    (0..len.div_ceil(CHUNK)).map(move |i| i * CHUNK..((i + 1) * CHUNK).min(len))
}

/// Applies `f` to each chunk of `0..len`, returning results in chunk order.
pub fn map_chunks<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        let ranges: Vec<_> = chunk_ranges(len).collect();
        return ranges.into_par_iter().map(f).collect();
    }
    chunk_ranges(len).map(f).collect()
}

/// `[f(lo), f(lo+1), ..., f(hi-1)]`, stopping at the lowest failing index.
pub fn try_map_range<T, F>(lo: u64, hi: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let len = hi.saturating_sub(lo) as usize;
    let parts = map_chunks(len, |r| {
        (r.start..r.end).map(|i| f(lo + i as u64)).collect::<Result<Vec<T>>>()
    });
    let mut out = Vec::with_capacity(len);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Number of indices in `lo..hi` satisfying `pred`.
pub fn count_range<F>(lo: u64, hi: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    let len = hi.saturating_sub(lo) as usize;
    map_chunks(len, |r| (r.start..r.end).filter(|&i| pred(lo + i as u64)).count() as u64)
        .into_iter()
        .sum()
}

/// Deterministic sum: sequential within chunks, pairwise across chunk sums.
pub fn sum_f64<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let partial = map_chunks(len, |r| r.map(&term).sum::<f64>());
    pairwise(&partial)
}

/// Sorts ascending by `f64::total_cmp`. The result does not depend on the mode.
pub fn sort_f64(values: &mut [f64]) {
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::slice::ParallelSliceMut;
        values.par_sort_unstable_by(f64::total_cmp);
        return;
    }
    values.sort_unstable_by(f64::total_cmp);
}

fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise(a) + pairwise(b)
        }
    }
}
