//! Execution strategy for the exhaustive sweeps.
//!
//! Every sweep in the crate is written against the small set of combinators
//! below. With the `parallel` feature (on by default) [`Exec::Parallel`] fans
//! work out over a rayon pool; without it, or with [`Exec::Sequential`], the
//! same closures run on the calling thread. Results never depend on the
//! strategy: reductions are order-independent and collected vectors keep input
//! order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// The strategy actually used: `Parallel` degrades to `Sequential` when the
    /// crate is built without the `parallel` feature.
    pub fn effective(self) -> Exec {
        if cfg!(feature = "parallel") {
            self
        } else {
            Exec::Sequential
        }
    }

    /// Ordered map over `0..n`.
    pub fn map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Ordered map over a slice.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Ordered filter-map over `0..n`.
    pub fn filter_map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> Option<T> + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().filter_map(f).collect(),
            _ => (0..n).filter_map(f).collect(),
        }
    }

    /// Fold `0..n` into per-worker accumulators and merge them. `merge` must be
    /// associative and commutative for the result to be strategy independent.
    pub fn fold_range<A, I, F, M>(self, n: u64, init: I, fold: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, u64) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n)
                .into_par_iter()
                .fold(&init, &fold)
                .reduce(&init, &merge),
            _ => {
                // A single accumulator needs no merging.
                let _ = &merge;
                (0..n).fold(init(), fold)
            }
        }
    }

    /// First (lowest index) item of the slice for which `f` returns `Some`.
    pub fn find_first<S, T, F>(self, items: &[S], f: F) -> Option<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> Option<T> + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items
                .par_iter()
                .map(f)
                .find_first(|r| r.is_some())
                .flatten(),
            _ => items.iter().find_map(f),
        }
    }

    /// First (lowest index) `i` in `0..n` for which `f` returns `Some`.
    pub fn find_first_range<T, F>(self, n: u64, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(u64) -> Option<T> + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n)
                .into_par_iter()
                .map(f)
                .find_first(|r| r.is_some())
                .flatten(),
            _ => (0..n).find_map(f),
        }
    }
}

/// Run `f` inside a pool with `jobs` workers (0 = rayon default). Without the
/// `parallel` feature this just calls `f`.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}
