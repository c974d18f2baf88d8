//! Index-range combinators shared by the exhaustive searches.
//!
//! With the `parallel` feature the ranges are split across the rayon pool;
//! `find_first` still returns the smallest satisfying index, so witnesses are
//! independent of scheduling.

/// Ranges shorter than this are always scanned on the calling thread.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 11;

#[cfg(feature = "parallel")]
pub(crate) fn find_first<F>(len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    if len < PAR_THRESHOLD {
        return (0..len).find(|&i| pred(i));
    }
    (0..len).into_par_iter().find_first(|&i| pred(i))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first<F>(len: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    (0..len).find(|&i| pred(i))
}

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if len < PAR_THRESHOLD {
        return (0..len).map(f).collect();
    }
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

/// Like [`map_range`] but never falls back to sequential for short ranges;
/// used where each item is itself expensive (lemma instances).
#[cfg(feature = "parallel")]
pub(crate) fn map_tasks<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_tasks<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).map(f).collect()
}

pub(crate) fn all<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    find_first(len, |i| !pred(i)).is_none()
}
