//! Execution strategy for the data-parallel loops (per-period projections in
//! RSP, independent trials in experiments).
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] runs
//! sequentially. Results are always collected in index order, so both
//! strategies produce bit-identical output.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// Whether work will actually be spread across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `range`, returning results in index order.
    pub fn map_range<T, F>(self, range: std::ops::Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_preserve_order() {
        let seq = Execution::Sequential.map_range(0..1000, |i| i * i);
        let par = Execution::Parallel.map_range(0..1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }
}
