//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature (default) [`Exec::Parallel`] runs on the rayon
//! pool; without it every strategy runs sequentially. Results are always
//! collected in index order, so output never depends on scheduling.

use std::ops::Range;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy will actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `range` and returns the results in index order.
///
/// Ranges shorter than `min_len` stay on the calling thread.
pub fn map_range<T, F>(exec: Exec, range: Range<usize>, min_len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && range.len() >= min_len.max(2) {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = (exec, min_len);
    range.map(f).collect()
}

/// Fills `out[i] = f(i)` for every index.
pub fn fill<T, F>(exec: Exec, out: &mut [T], min_len: usize, f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && out.len() >= min_len.max(2) {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
        return;
    }
    let _ = (exec, min_len);
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

/// Runs both closures, concurrently when `exec` allows it.
pub fn join<A, B, RA, RB>(exec: Exec, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return rayon::join(a, b);
    }
    let _ = exec;
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let seq = map_range(Exec::Sequential, 0..1000, 1, |i| i * i);
        let par = map_range(Exec::Parallel, 0..1000, 1, |i| i * i);
        assert_eq!(seq, par);

        let mut a = vec![0u64; 777];
        let mut b = vec![0u64; 777];
        fill(Exec::Sequential, &mut a, 1, |i| (i as u64) << 3);
        fill(Exec::Parallel, &mut b, 1, |i| (i as u64) << 3);
        assert_eq!(a, b);
    }
}
