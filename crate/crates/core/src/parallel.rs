//! Order-preserving data-parallel map with a sequential fallback.

use std::num::NonZeroUsize;

/// Upper bound on worker threads for a data-parallel section.
///
/// `Workers::SEQUENTIAL` (one worker) always takes the plain-loop path, as
/// does every value when the crate is built without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Workers(NonZeroUsize);

impl Workers {
    pub const SEQUENTIAL: Workers = Workers(NonZeroUsize::MIN);

    pub fn new(count: usize) -> crate::Result<Self> {
        NonZeroUsize::new(count)
            .map(Workers)
            .ok_or_else(|| crate::Error::domain("worker count must be at least 1"))
    }

    /// One worker per available hardware thread.
    pub fn available() -> Self {
        Workers(std::thread::available_parallelism().unwrap_or(NonZeroUsize::MIN))
    }

    pub fn get(self) -> usize {
        self.0.get()
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::available()
    }
}

/// Map `f` over `items`, returning results in input order.
pub fn par_map<T, R, F>(items: &[T], workers: Workers, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers.get() > 1 && items.len() > 1 {
            use rayon::prelude::*;
            // fall through to the sequential path if no threads can be spawned
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers.get()).build() {
                return pool.install(|| items.par_iter().map(&f).collect());
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    items.iter().map(f).collect()
}

/// Fallible variant of [`par_map`]; the first error in input order wins.
pub fn try_par_map<T, R, E, F>(items: &[T], workers: Workers, f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    par_map(items, workers, f).into_iter().collect()
}
