//! Sequential or rayon-backed execution of index-parallel work.
//!
//! Work is split into fixed-size chunks whose results are combined in chunk
//! order, so the output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Indices handled by one task.
pub const CHUNK: usize = 4096;

/// Parallel by default when the `parallel` feature is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// `f(0), f(1), ..., f(n-1)` in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().with_min_len(64).map(f).collect(),
        }
    }

    /// Folds `0..n` chunk by chunk with `fold`, then merges chunk results in
    /// chunk order with `merge`.
    pub fn fold_chunks<A, I, F, M>(self, n: u64, init: I, fold: F, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(A, u64) -> A + Sync + Send,
        M: Fn(A, A) -> A,
    {
        let chunks = n.div_ceil(CHUNK as u64) as usize;
        let run = |k: usize| {
            let lo = k as u64 * CHUNK as u64;
            let hi = (lo + CHUNK as u64).min(n);
            (lo..hi).fold(init(), &fold)
        };
        let parts = self.map(chunks, run);
        parts.into_iter().fold(init(), merge)
    }
}
