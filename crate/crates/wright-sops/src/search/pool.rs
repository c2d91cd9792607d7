//! Order-preserving map over a fixed number of workers.

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

#[cfg(feature = "parallel")]
pub(crate) struct Pool(rayon::ThreadPool);

#[cfg(feature = "parallel")]
impl Pool {
    pub(crate) fn new(workers: usize) -> Result<Pool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .thread_name(|i| format!("search-{i}"))
            .build()
            .map(Pool)
            .map_err(|e| Error::Argument(format!("cannot start {workers} workers: {e}")))
    }

    pub(crate) fn map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
        use rayon::prelude::*;
        self.0.install(|| items.par_iter().map(f).collect())
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) struct Pool;

#[cfg(not(feature = "parallel"))]
impl Pool {
    pub(crate) fn new(_workers: usize) -> Result<Pool> {
        Ok(Pool)
    }

    pub(crate) fn map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
        items.iter().map(f).collect()
    }
}
