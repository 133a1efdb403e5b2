//! Worker selection for the data-parallel loops.
//!
//! With the `parallel` feature (default) the loops run on rayon; without it,
//! or with [`Workers::Sequential`], they run as plain iterators. Every caller
//! combines results in index order, so outputs never depend on the worker count.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Workers {
    /// Single-threaded iterator path.
    Sequential,
    /// rayon's global pool.
    #[default]
    Auto,
    /// A dedicated pool with this many threads.
    Threads(usize),
}

impl Workers {
    /// `0` means auto, `1` sequential.
    pub fn from_count(n: usize) -> Self {
        match n {
            0 => Workers::Auto,
            1 => Workers::Sequential,
            n => Workers::Threads(n),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Workers::Sequential
    }
}

/// Runs `body` inside the pool selected by `workers`.
pub(crate) fn install<R: Send>(workers: Workers, body: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Workers::Threads(n) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            return pool.install(body);
        }
    }
    let _ = workers;
    body()
}

/// Maps `f` over `0..n`, results in index order.
pub(crate) fn map_range<R, F>(workers: Workers, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = workers;
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, results in slice order.
pub(crate) fn map_slice<T, R, F>(workers: Workers, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = workers;
    items.iter().map(f).collect()
}

/// First (lowest index) `Some` produced by `f` over the slice.
pub(crate) fn find_map_first<T, R, F>(workers: Workers, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    let _ = workers;
    items.iter().find_map(f)
}
