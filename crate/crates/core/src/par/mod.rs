//! Multicore kernel variants.
//!
//! Every kernel runs as a fork-join region over a fixed number of threads
//! with static contiguous chunking. Inputs are shared read-only; each
//! thread writes a disjoint slice of the output, a private buffer, or (for
//! atomic MTTKRP) shared atomic cells.
//!
//! Determinism: `par_tew_eq`, `par_ts`, `par_tew`, `par_ttv` and `par_ttm`
//! are bit-identical to their sequential counterparts for any thread
//! count. `par_mttkrp` reassociates sums across threads and is only
//! tolerance-equal for more than one thread.
//!
//! A thread count of `0` means "automatic": the `SPTK_NUM_THREADS`
//! environment variable if set, otherwise the available hardware
//! parallelism. An explicit count always wins.

mod elementwise;
mod fiber;
mod mttkrp;
mod partition;

use std::fmt;
use std::str::FromStr;

pub use elementwise::{par_tew, par_tew_eq, par_ts};
pub use fiber::{par_ttm, par_ttm_with_fibers, par_ttv, par_ttv_with_fibers};
pub use mttkrp::par_mttkrp;
pub use partition::{partition_for_tew, SlicePartition};

/// Environment variable consulted when the thread count is `0`.
pub const THREADS_ENV: &str = "SPTK_NUM_THREADS";

/// Resolves a requested thread count.
pub fn resolve_threads(requested: usize) -> usize {
    if requested > 0 {
        return requested;
    }
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// How concurrent updates to the MTTKRP output are protected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MttkrpStrategy {
    /// Thread-local `dims[mode] x R` buffers, summed after the parallel phase.
    Privatize,
    /// Atomic read-modify-write adds into the shared output.
    Atomic,
}

impl MttkrpStrategy {
    pub fn name(self) -> &'static str {
        match self {
            MttkrpStrategy::Privatize => "privatize",
            MttkrpStrategy::Atomic => "atomic",
        }
    }
}

impl fmt::Display for MttkrpStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MttkrpStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "privatize" => Ok(MttkrpStrategy::Privatize),
            "atomic" => Ok(MttkrpStrategy::Atomic),
            _ => Err(format!(
                "unknown strategy `{s}` (expected privatize or atomic)"
            )),
        }
    }
}

/// Cut points splitting `0..len` into `parts` contiguous chunks whose sizes
/// differ by at most one.
pub(crate) fn chunk_bounds(len: usize, parts: usize) -> Vec<usize> {
    let parts = parts.max(1);
    (0..=parts).map(|p| p * len / parts).collect()
}

/// Splits `data` at the cut points in `bounds` (which start at 0 and end at
/// `data.len()`).
pub(crate) fn split_at_bounds<'a, T>(mut data: &'a mut [T], bounds: &[usize]) -> Vec<&'a mut [T]> {
    let mut out = Vec::with_capacity(bounds.len().saturating_sub(1));
    for w in bounds.windows(2) {
        let (head, tail) = data.split_at_mut(w[1] - w[0]);
        out.push(head);
        data = tail;
    }
    out
}

/// Runs `f` on every item, one scoped thread per item; the last item runs
/// on the calling thread. Results come back in item order.
pub(crate) fn fork_join<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync,
{
    let mut items = items;
    let Some(last) = items.pop() else {
        return Vec::new();
    };
    if items.is_empty() {
        return vec![f(last)];
    }
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = items.into_iter().map(|it| s.spawn(move || f(it))).collect();
        let tail = f(last);
        let mut out: Vec<T> = handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
            .collect();
        out.push(tail);
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_and_balance() {
        assert_eq!(chunk_bounds(10, 4), vec![0, 2, 5, 7, 10]);
        assert_eq!(chunk_bounds(0, 3), vec![0, 0, 0, 0]);
        assert_eq!(chunk_bounds(5, 0), vec![0, 5]);
        let mut v: Vec<u32> = (0..10).collect();
        let parts = split_at_bounds(&mut v, &[0, 2, 5, 7, 10]);
        assert_eq!(
            parts.iter().map(|p| p.len()).collect::<Vec<_>>(),
            vec![2, 3, 2, 3]
        );
    }

    #[test]
    fn fork_join_preserves_order() {
        let out = fork_join((0..6).collect(), |i: usize| i * i);
        assert_eq!(out, vec![0, 1, 4, 9, 16, 25]);
        assert!(fork_join(Vec::<usize>::new(), |i| i).is_empty());
    }

    #[test]
    fn explicit_thread_count_wins() {
        assert_eq!(resolve_threads(3), 3);
        assert!(resolve_threads(0) >= 1);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [MttkrpStrategy::Privatize, MttkrpStrategy::Atomic] {
            assert_eq!(s.name().parse::<MttkrpStrategy>().unwrap(), s);
        }
        assert!("locks".parse::<MttkrpStrategy>().is_err());
    }
}
