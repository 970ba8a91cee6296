//! Index-ordered maps over independent work items.
//!
//! With the `parallel` feature the default map runs on the rayon pool; without it everything
//! is sequential. Results are always returned in index order.

pub fn map_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_par<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_seq(count, f)
}

pub fn par_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_par(count, f)
}

/// Same as `par_map` over a slice of inputs.
pub fn par_map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    par_map(items.len(), |i| f(&items[i]))
}

/// Sizes the global pool. Without the `parallel` feature this only validates the count.
#[cfg(feature = "parallel")]
pub fn init_workers(workers: usize) -> Result<(), String> {
    if workers == 0 {
        return Err("worker count must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn init_workers(workers: usize) -> Result<(), String> {
    if workers == 0 {
        return Err("worker count must be positive".into());
    }
    Ok(())
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
