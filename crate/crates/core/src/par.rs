//! Deterministic parallel search over `n`-ranges.

use rayon::prelude::*;

/// The result of `check` at the smallest `n` in `lo..=hi` where it is
/// `Some`. With `jobs > 1` the range is cut into chunks searched on a
/// dedicated pool; the answer is the same for every `jobs`.
pub fn find_first<T, F>(lo: u64, hi: u64, jobs: usize, check: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    if lo > hi {
        return None;
    }
    if jobs <= 1 {
        return (lo..=hi).find_map(check);
    }
    let span = hi - lo + 1;
    let chunk = span.div_ceil(jobs as u64 * 4).max(1);
    let chunks: Vec<(u64, u64)> = (0..span.div_ceil(chunk))
        .map(|i| (lo + i * chunk, (lo + (i + 1) * chunk - 1).min(hi)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        chunks
            .par_iter()
            .find_map_first(|&(a, b)| (a..=b).find_map(&check))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_answer_for_any_jobs() {
        let f = |n: u64| (n % 97 == 13 && n > 500).then_some(n);
        for jobs in [1, 2, 5, 16] {
            assert_eq!(find_first(0, 10_000, jobs, f), Some(595));
            assert_eq!(find_first(596, 600, jobs, f), None);
        }
        assert_eq!(find_first(5, 4, 3, f), None);
    }
}
