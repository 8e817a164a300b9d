//! Data-parallel helpers over index ranges and slices.
//!
//! With the `parallel` feature these run on the rayon pool; without it they
//! run sequentially. Results are identical either way: collections keep
//! input order and searches return the lowest matching index.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

pub fn map_range<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Collects `f(i)` for every `i` where it returns `Some`, in index order.
pub fn filter_map_range<R, F>(range: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.filter_map(f).collect()
    }
}

pub fn filter_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().filter_map(f).collect()
    }
}

/// The smallest index in `range` for which `f` returns `Some`, with its value.
pub fn find_first<R, F>(range: Range<u64>, f: F) -> Option<(u64, R)>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range
            .into_par_iter()
            .filter_map(|i| f(i).map(|r| (i, r)))
            .find_first(|_| true)
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.into_iter().find_map(|i| f(i).map(|r| (i, r)))
    }
}

pub fn count<F>(range: Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().filter(|&i| f(i)).count() as u64
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.filter(|&i| f(i)).count() as u64
    }
}
