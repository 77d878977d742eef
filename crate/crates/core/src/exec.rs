//! Sequential and data-parallel execution of index-range searches.
//!
//! All searches in this crate reduce to "find the smallest index in `0..len`
//! satisfying a predicate". The parallel strategy splits the range into
//! chunks and keeps the minimal hit, so both strategies return the same index.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runtime choice of execution strategy.
///
/// `Parallel` silently degrades to `Sequential` when the crate is built
/// without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExecPolicy {
    Sequential,
    #[default]
    Parallel,
}

impl ExecPolicy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecPolicy::Parallel
    }
}

const CHUNK: u64 = 4096;

/// Smallest `i` in `0..len` with `pred(i)` returning `Some`, together with the
/// returned payload.
pub fn find_first<T, F>(policy: ExecPolicy, len: u64, pred: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    if !policy.is_parallel() || len <= CHUNK {
        return (0..len).find_map(|i| pred(i).map(|v| (i, v)));
    }
    par_find_first(len, pred)
}

#[cfg(feature = "parallel")]
fn par_find_first<T, F>(len: u64, pred: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(len);
        (start..end).find_map(|i| pred(i).map(|v| (i, v)))
    })
}

#[cfg(not(feature = "parallel"))]
fn par_find_first<T, F>(len: u64, pred: F) -> Option<(u64, T)>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    (0..len).find_map(|i| pred(i).map(|v| (i, v)))
}

/// First element of `items` (in slice order) for which `pred` returns `Some`.
pub fn find_first_in<I, T, F>(policy: ExecPolicy, items: &[I], pred: F) -> Option<(usize, T)>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Option<T> + Sync + Send,
{
    find_first(policy, items.len() as u64, |i| pred(&items[i as usize]))
        .map(|(i, v)| (i as usize, v))
}

/// Order-preserving map.
pub fn map<I, T, F>(policy: ExecPolicy, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = policy;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_on_first_hit() {
        let pred = |i: u64| (i % 7919 == 7918 || i == 50_001).then_some(i * 2);
        let seq = find_first(ExecPolicy::Sequential, 100_000, pred);
        let par = find_first(ExecPolicy::Parallel, 100_000, pred);
        assert_eq!(seq, Some((7918, 15836)));
        assert_eq!(seq, par);
        assert_eq!(find_first(ExecPolicy::Parallel, 10, |_| None::<()>), None);
    }

    #[test]
    fn map_keeps_order() {
        let v: Vec<u32> = (0..10_000).collect();
        assert_eq!(
            map(ExecPolicy::Parallel, &v, |x| x + 1),
            map(ExecPolicy::Sequential, &v, |x| x + 1)
        );
    }
}
