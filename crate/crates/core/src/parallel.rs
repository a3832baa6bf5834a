//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) work runs on a rayon pool of the
//! requested width; without it, or with a width of one, work runs on the
//! calling thread. Output order never depends on the width.

/// Maps `f` over `items`, returning results in input order.
pub fn map_indexed<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 && items.len() > 1 {
        use rayon::prelude::*;
        return with_pool(workers, || items.par_iter().enumerate().map(|(i, item)| f(i, item)).collect());
    }
    let _ = workers;
    items.iter().enumerate().map(|(i, item)| f(i, item)).collect()
}

/// Runs `f(0..n)` and returns the results in index order.
pub fn map_range<R, F>(n: usize, workers: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 && n > 1 {
        use rayon::prelude::*;
        return with_pool(workers, || (0..n).into_par_iter().map(&f).collect());
    }
    let _ = workers;
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn with_pool<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(op),
        Err(e) => {
            log::warn!("falling back to the global rayon pool: {e}");
            op()
        }
    }
}

/// Whether this build can actually run work on more than one thread.
pub const fn is_parallel_build() -> bool {
    cfg!(feature = "parallel")
}
