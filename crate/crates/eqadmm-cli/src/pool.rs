//! Tiny indexed work pool: jobs are split into contiguous ranges across
//! threads and results reassembled by index, so output order never
//! depends on scheduling. `EQADMM_THREADS` caps the pool size.

use std::env;
use std::thread;

pub fn pool_size(jobs: usize) -> usize {
    let hw = thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = env::var("EQADMM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(hw);
    cap.min(jobs).max(1)
}

/// Runs `job(i)` for `i in 0..jobs` on the pool and returns results in
/// index order.
pub fn run_indexed<T, F>(jobs: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs == 0 {
        return Vec::new();
    }
    let workers = pool_size(jobs);
    if workers == 1 {
        return (0..jobs).map(job).collect();
    }
    let mut slots: Vec<Option<T>> = (0..jobs).map(|_| None).collect();
    thread::scope(|scope| {
        let mut rest: &mut [Option<T>] = &mut slots;
        let mut start = 0usize;
        for w in 0..workers {
            // near-even contiguous split
            let remaining_workers = workers - w;
            let take = rest.len().div_ceil(remaining_workers);
            let (chunk, tail) = rest.split_at_mut(take);
            rest = tail;
            let job = &job;
            scope.spawn(move || {
                for (k, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(job(start + k));
                }
            });
            start += take;
        }
    });
    slots.into_iter().map(|s| s.expect("job slot filled")).collect()
}
