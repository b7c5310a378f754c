//! Order-preserving data-parallel map. With the `parallel` feature off, or
//! `threads <= 1`, everything runs on the calling thread.

#[cfg(feature = "parallel")]
mod pools {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    use rayon::{ThreadPool, ThreadPoolBuilder};

    /// One pool per requested width, built on first use.
    pub(super) fn pool(threads: usize) -> Arc<ThreadPool> {
        static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
        let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
        pools
            .entry(threads)
            .or_insert_with(|| {
                Arc::new(
                    ThreadPoolBuilder::new()
                        .num_threads(threads)
                        .thread_name(|i| format!("rado-worker-{i}"))
                        .build()
                        .expect("thread pool"),
                )
            })
            .clone()
    }
}

/// Whether this build can run work on more than one thread.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// `items.iter().map(f).collect()`, spread over `threads` workers.
pub fn map_ordered<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads > 1 && items.len() > 1 {
        use rayon::prelude::*;
        return pools::pool(threads).install(|| items.par_iter().map(f).collect());
    }
    let _ = threads;
    items.iter().map(f).collect()
}
