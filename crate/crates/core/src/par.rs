//! Execution strategy for the data-parallel loops (solver starts, subset and
//! partition sweeps, Monte Carlo draws).
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! global pool; without it every strategy runs sequentially. Results are
//! always collected in index order, so the output never depends on the
//! strategy or the thread count.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// `(0..len).map(f).collect()`, possibly in parallel.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Send + Sync,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    /// Splits `0..total` into contiguous chunks, maps each chunk, and returns
    /// the per-chunk results in order.
    pub fn map_chunks<T, F>(self, total: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, u64) -> T + Send + Sync,
    {
        const CHUNK: u64 = 1 << 12;
        let chunks = total.div_ceil(CHUNK) as usize;
        self.map(chunks, |c| {
            let lo = c as u64 * CHUNK;
            let hi = (lo + CHUNK).min(total);
            f(lo, hi)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let f = |i: usize| (i * i) as u64;
        assert_eq!(Exec::Sequential.map(1000, f), Exec::Parallel.map(1000, f));
        let g = |lo: u64, hi: u64| (lo..hi).sum::<u64>();
        let seq: u64 = Exec::Sequential.map_chunks(100_000, g).iter().sum();
        let par: u64 = Exec::Parallel.map_chunks(100_000, g).iter().sum();
        assert_eq!(seq, par);
        assert_eq!(seq, 99_999 * 100_000 / 2);
    }
}
