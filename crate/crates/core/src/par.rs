//! Order-preserving map helpers that use rayon when the `parallel` feature is
//! enabled and fall back to plain iterators otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..len).map(f).collect()
}

/// Filter-map over `0..len` in chunks, concatenated in index order.
pub(crate) fn filter_map_range<R, F>(len: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    const CHUNK: u64 = 1 << 12;
    let chunks = len.div_ceil(CHUNK) as usize;
    map_range(chunks, |c| {
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(len);
        (start..end).filter_map(&f).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}
