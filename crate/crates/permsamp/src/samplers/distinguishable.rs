//! Distinguishable-particle sampling: each photon entering column j lands in
//! output mode i independently with probability |U_ij|². Efficient (O(mn)
//! per draw) and the proposal distribution for MIS.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{InputSubset, OutputPattern};
use crate::samplers::{random_subset, SampleSet, SamplerId, SamplerStats};
use crate::scalar::Real;
use crate::Interferometer;

/// Per-input-column cumulative |U_ij|² tables for inverse-CDF routing.
#[derive(Clone, Debug)]
pub struct ColumnCdfs<T> {
    m: usize,
    tables: Vec<Vec<T>>,
}

impl<T: Real> ColumnCdfs<T> {
    pub fn new(u: &Interferometer<T>, cols: &[usize]) -> Result<Self> {
        let m = u.m();
        let mut tables = Vec::with_capacity(cols.len());
        for &j in cols {
            if j >= m {
                return Err(Error::IndexOutOfRange(format!("input column {j} of {m}")));
            }
            let mut cdf = Vec::with_capacity(m);
            let mut acc = T::zero();
            for i in 0..m {
                acc = acc + u.matrix().get(i, j).norm_sqr();
                cdf.push(acc);
            }
            tables.push(cdf);
        }
        Ok(Self { m, tables })
    }

    pub fn particles(&self) -> usize {
        self.tables.len()
    }

    /// One routing draw: landing mode per particle, collisions allowed.
    pub fn draw_routing<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<usize>) {
        out.clear();
        for cdf in &self.tables {
            let total = *cdf.last().expect("nonempty cdf");
            let v = T::unit_uniform(rng) * total;
            let idx = cdf.partition_point(|&c| c <= v).min(self.m - 1);
            out.push(idx);
        }
    }

    /// Draws until collision-free; returns the sorted pattern and the number
    /// of routing attempts used.
    pub fn draw_pattern<R: Rng + ?Sized>(&self, rng: &mut R) -> (OutputPattern, u64) {
        let mut landing = Vec::with_capacity(self.particles());
        let mut tries = 0u64;
        loop {
            tries += 1;
            self.draw_routing(rng, &mut landing);
            landing.sort_unstable();
            if landing.windows(2).all(|w| w[0] < w[1]) {
                return (
                    OutputPattern::new(landing).expect("sorted distinct modes"),
                    tries,
                );
            }
        }
    }
}

/// Samples `count` collision-free patterns of n distinguishable particles;
/// collided draws are resampled. Deterministic per seed.
pub fn sample_distinguishable<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    if n == 0 || n > u.m() {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {}",
            u.m()
        )));
    }
    let cols: Vec<usize> = (0..n).collect();
    let cdfs = ColumnCdfs::new(u, &cols)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut patterns = Vec::with_capacity(count);
    let mut proposals = 0u64;
    for _ in 0..count {
        let (p, tries) = cdfs.draw_pattern(&mut rng);
        proposals += tries;
        patterns.push(p);
    }
    let acceptance_rate = if proposals > 0 {
        Some(count as f64 / proposals as f64)
    } else {
        None
    };
    Ok(SampleSet {
        n,
        m: u.m(),
        patterns,
        inputs: None,
        sampler_id: SamplerId::Distinguishable,
        seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: None,
        acceptance_rate,
        k_detected: None,
        stats: SamplerStats {
            proposals,
            accepted: count as u64,
            ..SamplerStats::default()
        },
    })
}

/// Fraction of raw routing draws that are collision-free; estimates the
/// normalization Σ_CFS Per(|A_S|²) of the distinguishable distribution.
pub fn collision_free_fraction<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    draws: usize,
    seed: u64,
) -> Result<T> {
    if n == 0 || n > u.m() {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {}",
            u.m()
        )));
    }
    if draws == 0 {
        return Err(Error::InvalidConfig("draws must be ≥ 1".into()));
    }
    let cols: Vec<usize> = (0..n).collect();
    let cdfs = ColumnCdfs::new(u, &cols)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut landing = Vec::with_capacity(n);
    let mut free = 0usize;
    for _ in 0..draws {
        cdfs.draw_routing(&mut rng, &mut landing);
        landing.sort_unstable();
        if landing.windows(2).all(|w| w[0] < w[1]) {
            free += 1;
        }
    }
    Ok(T::from_f64_exact(free as f64 / draws as f64))
}

/// Collision-free fraction of lossy distinguishable routing: a uniformly
/// random k-subset of the n prepared inputs, then k-particle routing.
pub fn lossy_collision_free_fraction<T: Real>(
    u: &Interferometer<T>,
    n_prepared: usize,
    k: usize,
    draws: usize,
    seed: u64,
) -> Result<T> {
    if k == 0 || k > n_prepared || n_prepared > u.m() {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ k ≤ n ≤ m, got k = {k}, n = {n_prepared}, m = {}",
            u.m()
        )));
    }
    if draws == 0 {
        return Err(Error::InvalidConfig("draws must be ≥ 1".into()));
    }
    let all_cols: Vec<usize> = (0..n_prepared).collect();
    let cdfs = ColumnCdfs::new(u, &all_cols)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut free = 0usize;
    let mut landing: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..draws {
        let subset = random_subset(&mut rng, n_prepared, k);
        landing.clear();
        for &j in &subset {
            let cdf = &cdfs.tables[j];
            let total = *cdf.last().expect("nonempty cdf");
            let v = T::unit_uniform(&mut rng) * total;
            landing.push(cdf.partition_point(|&c| c <= v).min(u.m() - 1));
        }
        landing.sort_unstable();
        if landing.windows(2).all(|w| w[0] < w[1]) {
            free += 1;
        }
    }
    Ok(T::from_f64_exact(free as f64 / draws as f64))
}

/// Uniform input subset as an [`InputSubset`].
pub(crate) fn draw_input_subset<R: Rng + ?Sized>(
    rng: &mut R,
    bound: usize,
    k: usize,
) -> InputSubset {
    InputSubset::new(random_subset(rng, bound, k)).expect("sorted distinct columns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{advance_pattern_colex, pattern_rank};
    use crate::samplers::dist_weight;
    use crate::test_support::identity_interferometer;

    #[test]
    fn identity_routes_straight_through() {
        let u = identity_interferometer(5);
        let s = sample_distinguishable(&u, 3, 50, 7).unwrap();
        for p in &s.patterns {
            assert_eq!(p.modes(), &[0, 1, 2]);
        }
        assert_eq!(s.acceptance_rate, Some(1.0));
    }

    #[test]
    fn frequencies_match_renormalized_dist_weights() {
        let (n, m) = (2usize, 4usize);
        let u = crate::haar_unitary::<f64>(m, 13).unwrap();
        let draws = 100_000usize;
        let s = sample_distinguishable(&u, n, draws, 19).unwrap();

        // Exact CFS-renormalized distinguishable distribution.
        let mut weights = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            let pat = OutputPattern::new(p.clone()).unwrap();
            weights.push(dist_weight(&u, &pat).unwrap());
            if !advance_pattern_colex(&mut p, m) {
                break;
            }
        }
        let z: f64 = weights.iter().sum();

        let mut counts = vec![0usize; weights.len()];
        for pat in &s.patterns {
            counts[pattern_rank(pat, m).unwrap() as usize] += 1;
        }
        for (rank, &w) in weights.iter().enumerate() {
            let expect = w / z;
            let sigma = (expect * (1.0 - expect) / draws as f64).sqrt();
            let got = counts[rank] as f64 / draws as f64;
            assert!(
                (got - expect).abs() <= 3.0 * sigma + 1e-9,
                "rank {rank}: {got} vs {expect} ± {sigma}"
            );
        }
    }

    #[test]
    fn resampling_cost_matches_collision_free_mass() {
        let (n, m) = (3usize, 6usize);
        let u = crate::haar_unitary::<f64>(m, 23).unwrap();

        // Enumerate P(collision-free) exactly from distinguishable weights.
        let mut p_cf = 0.0;
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            p_cf += dist_weight(&u, &OutputPattern::new(p.clone()).unwrap()).unwrap();
            if !advance_pattern_colex(&mut p, m) {
                break;
            }
        }

        let count = 20_000usize;
        let s = sample_distinguishable(&u, n, count, 29).unwrap();
        let tries_per_accept = s.stats.proposals as f64 / count as f64;
        let expected = 1.0 / p_cf;
        assert!(
            (tries_per_accept - expected).abs() / expected < 0.05,
            "tries/accept {tries_per_accept} vs 1/P_cf {expected}"
        );

        let est = collision_free_fraction(&u, n, 100_000, 31).unwrap();
        assert!((est - p_cf).abs() < 0.01, "estimate {est} vs exact {p_cf}");
    }

    #[test]
    fn dimension_guards() {
        let u = identity_interferometer(3);
        assert!(sample_distinguishable(&u, 0, 5, 1).is_err());
        assert!(sample_distinguishable(&u, 4, 5, 1).is_err());
        assert!(collision_free_fraction(&u, 2, 0, 1).is_err());
    }
}
