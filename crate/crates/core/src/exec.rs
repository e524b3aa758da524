//! Chunked execution shared by the parallel and sequential code paths.
//!
//! Both paths reduce over the same fixed chunk boundaries, so floating-point
//! folds agree bit for bit whether or not the `parallel` feature is active.
//! `Mode::Auto` uses rayon when the feature is compiled in and the input is
//! large enough to pay for it; `Mode::Seq` forces the sequential path, which
//! the `*_seq` entry points expose for benchmarking and cross-checks.

use crate::error::Result;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) const CHUNK: usize = 4096;

/// Execution mode for the chunked kernels: `Auto` may use the thread pool,
/// `Seq` always stays on the calling thread.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Seq,
}

impl Mode {
    #[cfg(feature = "parallel")]
    fn parallel(self, len: usize) -> bool {
        match self {
            Mode::Seq => false,
            Mode::Auto => len > CHUNK,
        }
    }
}

/// Sum `f` over `items`, chunk by chunk, totals accumulated in chunk order.
pub(crate) fn chunked_sum<T, F>(items: &[T], mode: Mode, f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.parallel(items.len()) {
        let partials: Vec<f64> = items
            .par_chunks(CHUNK)
            .map(|chunk| chunk.iter().map(&f).sum::<f64>())
            .collect();
        return partials.iter().sum::<f64>() + 0.0;
    }
    let _ = mode;
    // Empty input sums to IEEE -0.0; adding +0.0 pins the sign.
    items
        .chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).sum::<f64>())
        .sum::<f64>()
        + 0.0
}

/// Maximum of `f` over `items`; 0 on empty input (callers feed nonnegatives).
pub(crate) fn chunked_max<T, F>(items: &[T], mode: Mode, f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.parallel(items.len()) {
        let partials: Vec<f64> = items
            .par_chunks(CHUNK)
            .map(|chunk| chunk.iter().map(&f).fold(0.0f64, f64::max))
            .collect();
        return partials.into_iter().fold(0.0, f64::max);
    }
    let _ = mode;
    items.iter().map(&f).fold(0.0, f64::max)
}

/// Map `f` over `items` preserving order; the first error in input order wins.
pub(crate) fn try_map<T, R, F>(items: &[T], mode: Mode, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.parallel(items.len()) {
        let chunks: Vec<Result<Vec<R>>> = items
            .par_chunks(CHUNK)
            .map(|chunk| chunk.iter().map(&f).collect())
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for chunk in chunks {
            out.extend(chunk?);
        }
        return Ok(out);
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Fold `items` into a state built per chunk and merged in chunk order.
/// `merge` must be associative and agree with running `step` sequentially;
/// all in-crate uses fold exact integer statistics, where that holds.
pub(crate) fn try_fold<T, S, FI, FS, FM>(
    items: &[T],
    mode: Mode,
    init: FI,
    step: FS,
    merge: FM,
) -> Result<S>
where
    T: Sync,
    S: Send,
    FI: Fn() -> S + Sync + Send,
    FS: Fn(&mut S, &T) -> Result<()> + Sync + Send,
    FM: Fn(S, S) -> S + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel(items.len()) {
        let parts: Vec<Result<S>> = items
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut state = init();
                for item in chunk {
                    step(&mut state, item)?;
                }
                Ok(state)
            })
            .collect();
        let mut acc: Option<S> = None;
        for part in parts {
            let state = part?;
            acc = Some(match acc {
                None => state,
                Some(prev) => merge(prev, state),
            });
        }
        return Ok(acc.unwrap_or_else(init));
    }
    let _ = (mode, merge);
    let mut state = init();
    for item in items {
        step(&mut state, item)?;
    }
    Ok(state)
}
