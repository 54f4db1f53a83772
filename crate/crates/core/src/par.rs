// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sequential or rayon-backed mapping over independent work items.
//!
//! Results always come back in input order, so every reduction downstream
//! runs over the same sequence whatever the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the ambient rayon pool. Without the `parallel` feature this is
    /// the same as `Sequential`.
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            #[cfg(not(feature = "parallel"))]
            Execution::Parallel => items.iter().map(f).collect(),
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or inline when the
/// `parallel` feature is off or `threads` is `None`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let v: Vec<u32> = (0..1000).collect();
        let seq = Execution::Sequential.map(&v, |x| x * 3);
        let par = with_threads(Some(4), || Execution::Parallel.map(&v, |x| x * 3));
        assert_eq!(seq, par);
    }
}
