//! Brute-force exact sampling: compute all C(m, n) collision-free weights
//! once, then draw i.i.d. patterns by inverse CDF.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{advance_pattern_colex, binomial, pattern_unrank, Matrix};
use crate::permanent::per_ryser_threads;
use crate::samplers::{SampleSet, SamplerId, SamplerStats};
use crate::scalar::{Real, Scalar};
use crate::Interferometer;

/// Default cap on C(m, n): keeps desk machines under minutes and ~1 GB.
pub const DEFAULT_MAX_PATTERNS: u64 = 10_000_000;

fn checked_pattern_count(m: usize, n: usize, max_patterns: u64) -> Result<u64> {
    let total = binomial(m, n)
        .filter(|&t| t <= max_patterns as u128)
        .ok_or_else(|| {
            Error::SizeLimit(format!(
                "C({m},{n}) exceeds the brute-force guard of {max_patterns}"
            ))
        })?;
    Ok(total as u64)
}

/// All C(m, n) unnormalized weights |Per(A_S)|², indexed by combinadic rank.
/// Work is split across threads by contiguous rank ranges.
pub fn cfs_weights<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    max_patterns: u64,
) -> Result<Vec<T>> {
    let m = u.m();
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    let total = checked_pattern_count(m, n, max_patterns)? as usize;
    let mut weights = vec![T::zero(); total];
    let threads = crate::thread_count().max(1).min(total.max(1));

    let fill = |chunk: &mut [T], start_rank: usize| -> Result<()> {
        let first = pattern_unrank(start_rank as u128, n, m)?;
        let mut modes = first.modes().to_vec();
        let mut sub: Matrix<num_complex::Complex<T>> = Matrix::zeros(n, n);
        let cols: Vec<usize> = (0..n).collect();
        for w in chunk.iter_mut() {
            u.matrix().select_into(&modes, &cols, &mut sub);
            // Single-threaded kernel: parallelism lives at the rank level.
            *w = per_ryser_threads(&sub, 1)?.modulus_sqr();
            advance_pattern_colex(&mut modes, m);
        }
        Ok(())
    };

    if threads == 1 {
        fill(&mut weights, 0)?;
    } else {
        let chunk_len = total.div_ceil(threads);
        let fill = &fill;
        std::thread::scope(|scope| -> Result<()> {
            let mut handles = Vec::new();
            for (idx, chunk) in weights.chunks_mut(chunk_len).enumerate() {
                handles.push(scope.spawn(move || fill(chunk, idx * chunk_len)));
            }
            for h in handles {
                h.join().expect("brute-force worker panicked")?;
            }
            Ok(())
        })?;
    }
    Ok(weights)
}

/// The exact CFS-renormalized boson-sampling distribution, by rank.
pub fn cfs_distribution<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    max_patterns: u64,
) -> Result<Vec<T>> {
    let mut w = cfs_weights(u, n, max_patterns)?;
    let z = w.iter().fold(T::zero(), |a, &b| a + b);
    if !(z > T::zero()) {
        return Err(Error::DegenerateInput("all CFS weights vanish".into()));
    }
    for v in w.iter_mut() {
        *v = *v / z;
    }
    Ok(w)
}

/// Computes every CFS probability once, then draws `count` i.i.d. patterns.
pub fn sample_brute_force<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    count: usize,
    seed: u64,
    max_patterns: u64,
) -> Result<SampleSet> {
    let m = u.m();
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    checked_pattern_count(m, n, max_patterns)?;

    let mut stats = SamplerStats::default();
    let mut patterns = Vec::with_capacity(count);
    if count > 0 {
        let mut cdf = cfs_weights(u, n, max_patterns)?;
        stats.complex_perms = cdf.len() as u64;
        let mut acc = T::zero();
        for w in cdf.iter_mut() {
            acc = acc + *w;
            *w = acc;
        }
        let z = acc;
        if !(z > T::zero()) {
            return Err(Error::DegenerateInput("all CFS weights vanish".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let v = T::unit_uniform(&mut rng) * z;
            let rank = cdf.partition_point(|&c| c <= v).min(cdf.len() - 1);
            patterns.push(pattern_unrank(rank as u128, n, m)?);
        }
    }

    Ok(SampleSet {
        n,
        m,
        patterns,
        inputs: None,
        sampler_id: SamplerId::Brute,
        seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: None,
        acceptance_rate: None,
        k_detected: None,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pattern_rank;
    use crate::OutputPattern;

    #[test]
    fn single_photon_split_matches_moduli() {
        let u = crate::haar_unitary::<f64>(2, 41).unwrap();
        let p0 = u.matrix().get(0, 0).norm_sqr();
        let draws = 100_000usize;
        let s = sample_brute_force(&u, 1, draws, 43, DEFAULT_MAX_PATTERNS).unwrap();
        let zeros = s
            .patterns
            .iter()
            .filter(|p| p.modes() == [0])
            .count() as f64;
        let expect = p0 / (p0 + u.matrix().get(1, 0).norm_sqr());
        let sigma = (expect * (1.0 - expect) / draws as f64).sqrt();
        assert!((zeros / draws as f64 - expect).abs() < 3.0 * sigma);
    }

    #[test]
    fn counts_each_permanent_once() {
        let u = crate::haar_unitary::<f64>(9, 47).unwrap();
        let s = sample_brute_force(&u, 3, 10, 1, DEFAULT_MAX_PATTERNS).unwrap();
        assert_eq!(s.stats.complex_perms, 84);
    }

    #[test]
    fn empty_request_is_empty() {
        let u = crate::haar_unitary::<f64>(6, 3).unwrap();
        let s = sample_brute_force(&u, 2, 0, 1, DEFAULT_MAX_PATTERNS).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.stats.complex_perms, 0);
    }

    #[test]
    fn guard_rejects_oversized_problems() {
        let u = crate::haar_unitary::<f64>(30, 3).unwrap();
        // C(30, 15) = 155117520 > default guard.
        assert!(matches!(
            sample_brute_force(&u, 15, 1, 1, DEFAULT_MAX_PATTERNS),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn distribution_sums_to_one_and_orders_by_rank() {
        let u = crate::haar_unitary::<f64>(6, 5).unwrap();
        let dist = cfs_distribution(&u, 2, DEFAULT_MAX_PATTERNS).unwrap();
        assert_eq!(dist.len(), 15);
        let total: f64 = dist.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // Spot-check rank alignment.
        let pat = OutputPattern::new(vec![1, 4]).unwrap();
        let w = crate::samplers::bs_weight(&u, &pat).unwrap();
        let z: f64 = cfs_weights(&u, 2, DEFAULT_MAX_PATTERNS).unwrap().iter().sum();
        let rank = pattern_rank(&pat, 6).unwrap() as usize;
        assert!((dist[rank] - w / z).abs() < 1e-12);
    }
}
