//! Sequential / data-parallel execution of the inner scans.
//!
//! Every helper returns exactly what the sequential loop would return
//! (first match in index order, results in index order), so outputs do not
//! depend on the mode or on the thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How the hot loops are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the global rayon pool. Without the `parallel` feature this
    /// behaves like [`Execution::Sequential`].
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

// Below this many items the rayon overhead dominates.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 2048;

impl Execution {
    #[cfg(feature = "parallel")]
    fn parallel_for(self, len: usize) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel && len >= PAR_THRESHOLD
    }

    /// Smallest index in `range` satisfying `pred`.
    pub fn find_first<P>(self, range: Range<usize>, pred: P) -> Option<usize>
    where
        P: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().find_first(|&i| pred(i));
        }
        range.into_iter().find(|&i| pred(i))
    }

    /// First `Some` produced over `range`, in index order.
    pub fn find_map_first<R, F>(self, range: Range<usize>, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }

    /// `range.map(f).collect()`, order preserved.
    pub fn map<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range.into_par_iter().map(f).collect();
        }
        range.into_iter().map(f).collect()
    }

    /// Runs two independent closures, concurrently in parallel mode.
    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return rayon::join(a, b);
        }
        (a(), b())
    }

    /// Folds chunks of `range` into accumulators and merges them. `reduce`
    /// must be associative and commutative for the result to be independent
    /// of the split.
    pub fn fold_reduce<A, I, F, M>(self, range: Range<usize>, identity: I, fold: F, reduce: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, usize) -> A + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(range.len()) {
            return range
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &reduce);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = reduce;
        range.into_iter().fold(identity(), fold)
    }
}
