//! Rayon drivers. Results never depend on the worker count: certificate
//! slices are merged in lead order and sweep trials use per-trial seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use unate_core::certificate::{
    enumerate_slice, enumeration_size, lead_choices, report_from_slice, CertError, CertReport,
    EnumerationSlice, Params,
};

pub fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Enumeration-mode certificate check split over vertex 0's out-choice.
pub fn certify_enumeration(
    k: usize,
    p: &Params,
    budget: u64,
    workers: usize,
) -> Result<CertReport, CertError> {
    let size = enumeration_size(k);
    if size > u128::from(budget) {
        return Err(CertError::BudgetExceeded {
            count: size,
            budget,
        });
    }
    let leads: Vec<_> = lead_choices(k).collect();
    let merged = pool(workers).install(|| {
        leads
            .par_iter()
            .map(|&lead| enumerate_slice(k, p, lead))
            .reduce(EnumerationSlice::default, |mut a, b| {
                a.merge(b);
                a
            })
    });
    Ok(report_from_slice(k, p, merged))
}

/// Seed for trial `i` of a sweep seeded with `base`.
pub fn trial_seed(base: u64, i: u64) -> u64 {
    // splitmix64 step so neighbouring trials get unrelated streams
    let mut z = base.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `trial(i, rng)` for `i < trials` and returns the indices that failed,
/// in increasing order.
pub fn seeded_sweep<F>(base: u64, trials: u64, workers: usize, trial: F) -> Vec<u64>
where
    F: Fn(u64, &mut ChaCha8Rng) -> bool + Sync,
{
    pool(workers).install(|| {
        (0..trials)
            .into_par_iter()
            .filter(|&i| !trial(i, &mut ChaCha8Rng::seed_from_u64(trial_seed(base, i))))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use unate_core::certificate::{default_params, verify_certificate, CertMode};

    #[test]
    fn parallel_matches_sequential() {
        let p = default_params(5).unwrap();
        let seq = verify_certificate(5, Some(p.clone()), CertMode::Enumeration, u64::MAX).unwrap();
        for w in [1, 3] {
            assert_eq!(certify_enumeration(5, &p, u64::MAX, w).unwrap(), seq);
        }
        assert!(matches!(
            certify_enumeration(5, &p, 10, 2),
            Err(CertError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn sweeps_are_worker_independent() {
        use rand::Rng;
        let run = |w| seeded_sweep(42, 200, w, |_, rng| rng.gen_range(0..10) != 0);
        let a = run(1);
        assert_eq!(a, run(4));
        assert!(!a.is_empty());
    }
}
