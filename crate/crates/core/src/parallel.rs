//! Deterministic work splitting, parallel or sequential.
//!
//! Grid scans and boundary sweeps are embarrassingly parallel, but naive
//! parallel reduction reorders floating-point sums. Work is therefore split
//! into fixed chunks whose boundaries depend only on the problem size; each
//! chunk produces its partial result independently and the results are
//! combined in chunk order. The parallel build then returns bit-identical
//! numbers to the sequential one, for any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Splits `0..n` into `chunk`-sized ranges and maps each through `f`,
/// returning the per-chunk results in range order.
pub fn map_chunks<T, F>(n: usize, chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    assert!(chunk > 0, "chunk size must be positive");
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    #[cfg(feature = "parallel")]
    {
        starts
            .par_iter()
            .map(|&s| f(s..(s + chunk).min(n)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        starts.iter().map(|&s| f(s..(s + chunk).min(n))).collect()
    }
}

/// True when this build distributes chunks over a thread pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Applies a `CCCHART_THREADS` override to the global thread pool. Returns
/// the requested count, or `None` when unset, unparsable, or already fixed.
pub fn configure_threads_from_env() -> Option<usize> {
    let requested: usize = std::env::var("CCCHART_THREADS").ok()?.trim().parse().ok()?;
    if requested == 0 {
        return None;
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(requested)
            .build_global()
            .ok()?;
        Some(requested)
    }
    #[cfg(not(feature = "parallel"))]
    {
        // Sequential build: acknowledge the variable but nothing to configure.
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_results_arrive_in_order() {
        let got = map_chunks(10, 3, |r| (r.start, r.end));
        assert_eq!(got, vec![(0, 3), (3, 6), (6, 9), (9, 10)]);
    }

    #[test]
    fn chunk_partials_match_a_sequential_reference_bitwise() {
        // The determinism contract: per-chunk values and their order depend
        // only on (n, chunk), never on how chunks were scheduled.
        let n = 10_000;
        let chunk = 128;
        let part = |r: std::ops::Range<usize>| r.map(|i| (i as f64 * 0.37).sin()).sum::<f64>();
        let reference: Vec<f64> = (0..n).step_by(chunk).map(|s| part(s..(s + chunk).min(n))).collect();
        let got = map_chunks(n, chunk, part);
        assert_eq!(got.len(), reference.len());
        for (g, r) in got.iter().zip(&reference) {
            assert_eq!(g.to_bits(), r.to_bits());
        }
    }

    #[test]
    fn empty_input_maps_to_no_chunks() {
        let got: Vec<usize> = map_chunks(0, 8, |r| r.len());
        assert!(got.is_empty());
    }
}
