//! Thin facade over the optional data-parallel runtime.
//!
//! The hot loops in this crate (feature extraction, frequency counting,
//! per-batch metric folds) are embarrassingly parallel maps and additive
//! reductions, so running them on rayon cannot change any observable result:
//! maps collect in index order and reductions are commutative merges of
//! per-chunk accumulators. The `parallel` feature therefore only changes
//! throughput. With the feature disabled these helpers compile to plain
//! sequential loops and the crate has no rayon dependency at all.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum number of items before fanning work out is worth the overhead.
#[cfg(feature = "parallel")]
const PARALLEL_CUTOFF: usize = 4096;

/// Maps `f` over `items`, preserving input order in the output.
#[cfg(feature = "parallel")]
pub(crate) fn map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    if items.len() < PARALLEL_CUTOFF {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

/// Maps `f` over `items`, preserving input order in the output.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    F: Fn(&I) -> T,
{
    items.iter().map(f).collect()
}

/// Folds chunks of `items` into per-chunk accumulators and merges them.
///
/// `fold` must be a plain accumulation and `merge` a commutative, associative
/// combination for the overall result to be independent of chunking.
#[cfg(feature = "parallel")]
pub(crate) fn fold_chunks<I, A, FInit, FFold, FMerge>(
    items: &[I],
    init: FInit,
    fold: FFold,
    merge: FMerge,
) -> A
where
    I: Sync,
    A: Send,
    FInit: Fn() -> A + Sync + Send,
    FFold: Fn(&mut A, &I) + Sync + Send,
    FMerge: Fn(A, A) -> A + Sync + Send,
{
    if items.len() < PARALLEL_CUTOFF {
        let mut acc = init();
        for item in items {
            fold(&mut acc, item);
        }
        return acc;
    }
    items
        .par_chunks(PARALLEL_CUTOFF)
        .map(|chunk| {
            let mut acc = init();
            for item in chunk {
                fold(&mut acc, item);
            }
            acc
        })
        .reduce(&init, merge)
}

/// Folds chunks of `items` into per-chunk accumulators and merges them.
#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_chunks<I, A, FInit, FFold, FMerge>(
    items: &[I],
    init: FInit,
    fold: FFold,
    _merge: FMerge,
) -> A
where
    FInit: Fn() -> A,
    FFold: Fn(&mut A, &I),
    FMerge: Fn(A, A) -> A,
{
    let mut acc = init();
    for item in items {
        fold(&mut acc, item);
    }
    acc
}
