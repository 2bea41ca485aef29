//! Lossy and scattershot boson sampling.
//!
//! Lossy: n photons prepared, n−k lost before the circuit; probabilities
//! average |Per(A_{S,T})|² over all k-subsets T of the prepared inputs. The
//! sampler draws T uniformly per emitted pattern, then runs a fresh
//! burn-in-only MIS chain on the k×k submatrices (thinning is meaningless
//! across fresh chains).
//!
//! Scattershot: the input is a uniformly random n-subset of all m modes,
//! sampled per pattern, otherwise identical machinery.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    advance_pattern_colex, binomial, pattern_rank, InputSubset, OutputPattern,
};
use crate::samplers::distinguishable::draw_input_subset;
use crate::samplers::{
    bs_weight_cols, dist_weight_cols, ChainConfig, LossConfig, MisChain, SampleSet, SamplerId,
    SamplerStats,
};
use crate::scalar::Real;
use crate::{split_seed, Interferometer};

/// Guard on the C(n, k) term count of the lossy likelihood sum.
pub const LOSSY_LIKELIHOOD_MAX_TERMS: u128 = 10_000;

fn fresh_chain_sample<T: Real>(
    u: &Interferometer<T>,
    cols: InputSubset,
    tau_burn: usize,
    seed: u64,
) -> Result<(OutputPattern, SamplerStats)> {
    let mut chain = MisChain::new(u, cols, seed)?;
    chain.advance(tau_burn)?;
    Ok((chain.state().pattern.clone(), chain.stats))
}

fn run_fresh_chain_batch<T: Real>(
    u: &Interferometer<T>,
    count: usize,
    config: &ChainConfig,
    draw_cols: impl Fn(&mut ChaCha8Rng) -> InputSubset + Sync,
) -> Result<Vec<(OutputPattern, InputSubset, SamplerStats)>> {
    let job = |i: usize| -> Result<(OutputPattern, InputSubset, SamplerStats)> {
        let seed = split_seed(config.seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = draw_cols(&mut rng);
        // The chain itself gets an independent stream.
        let (pattern, stats) = fresh_chain_sample(u, cols.clone(), config.tau_burn, seed ^ 0x5DEE_CE66)?;
        Ok((pattern, cols, stats))
    };

    let workers = crate::thread_count().min(config.chains.max(1)).max(1);
    if workers == 1 || count < 2 {
        return (0..count).map(job).collect();
    }
    let job = &job;
    let mut results: Vec<Option<Result<_>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let lo = count * w / workers;
            let hi = count * (w + 1) / workers;
            handles.push(scope.spawn(move || {
                (lo..hi).map(|i| (i, job(i))).collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (i, r) in h.join().expect("lossy worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("job result")).collect()
}

/// Lossy MIS sampler; emits patterns of size k with their input subsets.
pub fn sample_mis_lossy<T: Real>(
    u: &Interferometer<T>,
    loss: &LossConfig,
    count: usize,
    config: &ChainConfig,
) -> Result<SampleSet> {
    loss.validate()?;
    config.validate()?;
    let (n, k) = (loss.n_prepared, loss.k_detected);
    if n > u.m() {
        return Err(Error::InvalidDimension(format!(
            "n = {n} photons exceed m = {} modes",
            u.m()
        )));
    }
    let rows = run_fresh_chain_batch(u, count, config, |rng| draw_input_subset(rng, n, k))?;

    let mut stats = SamplerStats::default();
    let mut patterns = Vec::with_capacity(count);
    let mut inputs = Vec::with_capacity(count);
    for (p, t, s) in rows {
        stats.absorb(&s);
        patterns.push(p);
        inputs.push(t);
    }
    let acceptance_rate = if stats.proposals > 0 {
        Some(stats.accepted as f64 / stats.proposals as f64)
    } else {
        None
    };
    Ok(SampleSet {
        n,
        m: u.m(),
        patterns,
        inputs: Some(inputs),
        sampler_id: SamplerId::MisLossy,
        seed: config.seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: Some(*config),
        acceptance_rate,
        k_detected: if k == n { None } else { Some(k) },
        stats,
    })
}

/// Scattershot MIS sampler: per pattern, a uniform n-subset of all m input
/// modes, then a fresh burn-in-only chain; the input is recorded per pattern.
pub fn sample_mis_scattershot<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    count: usize,
    config: &ChainConfig,
) -> Result<SampleSet> {
    config.validate()?;
    if n == 0 || n > u.m() {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {}",
            u.m()
        )));
    }
    let m = u.m();
    let rows = run_fresh_chain_batch(u, count, config, |rng| draw_input_subset(rng, m, n))?;

    let mut stats = SamplerStats::default();
    let mut patterns = Vec::with_capacity(count);
    let mut inputs = Vec::with_capacity(count);
    for (p, t, s) in rows {
        stats.absorb(&s);
        patterns.push(p);
        inputs.push(t);
    }
    let acceptance_rate = if stats.proposals > 0 {
        Some(stats.accepted as f64 / stats.proposals as f64)
    } else {
        None
    };
    Ok(SampleSet {
        n,
        m,
        patterns,
        inputs: Some(inputs),
        sampler_id: SamplerId::MisScattershot,
        seed: config.seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: Some(*config),
        acceptance_rate,
        k_detected: None,
        stats,
    })
}

fn input_subsets(n: usize, k: usize) -> Vec<InputSubset> {
    let mut out = Vec::new();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        out.push(InputSubset::new(cols.clone()).expect("sorted"));
        if !advance_pattern_colex(&mut cols, n) {
            break;
        }
    }
    out
}

/// Unnormalized lossy likelihood of a size-k pattern:
/// (1/C(n,k)) Σ_{T ∈ Λ_{n,k}} |Per(A_{S,T})|², guarded to
/// [`LOSSY_LIKELIHOOD_MAX_TERMS`] terms.
pub fn lossy_likelihood<T: Real>(
    u: &Interferometer<T>,
    s: &OutputPattern,
    n_prepared: usize,
) -> Result<T> {
    lossy_mean_over_inputs(u, s, n_prepared, bs_weight_cols)
}

/// Distinguishable-particle analogue: (1/C(n,k)) Σ_T Per(|A_{S,T}|²).
pub fn lossy_dist_likelihood<T: Real>(
    u: &Interferometer<T>,
    s: &OutputPattern,
    n_prepared: usize,
) -> Result<T> {
    lossy_mean_over_inputs(u, s, n_prepared, dist_weight_cols)
}

fn lossy_mean_over_inputs<T: Real>(
    u: &Interferometer<T>,
    s: &OutputPattern,
    n_prepared: usize,
    weight: impl Fn(&Interferometer<T>, &OutputPattern, &InputSubset) -> Result<T>,
) -> Result<T> {
    let k = s.len();
    if k > n_prepared || n_prepared > u.m() {
        return Err(Error::InvalidDimension(format!(
            "need k ≤ n ≤ m, got k = {k}, n = {n_prepared}, m = {}",
            u.m()
        )));
    }
    let terms = binomial(n_prepared, k)
        .filter(|&t| t <= LOSSY_LIKELIHOOD_MAX_TERMS)
        .ok_or_else(|| {
            Error::SizeLimit(format!(
                "lossy likelihood needs C({n_prepared},{k}) ≤ {LOSSY_LIKELIHOOD_MAX_TERMS} terms"
            ))
        })?;
    let mut acc = T::zero();
    for t in input_subsets(n_prepared, k) {
        acc = acc + weight(u, s, &t)?;
    }
    Ok(acc / T::from_f64_exact(terms as f64))
}

/// Exact lossy distribution over all C(m, k) patterns by rank: the average
/// of |Per(A_{S,T})|² over Λ_{n,k}, renormalized over the CFS. Enumeration
/// oracle for the lossy sampler.
pub fn temperament_distribution<T: Real>(
    u: &Interferometer<T>,
    n_prepared: usize,
    k: usize,
    max_patterns: u64,
) -> Result<Vec<T>> {
    let m = u.m();
    if k == 0 || k > n_prepared || n_prepared > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ k ≤ n ≤ m, got k = {k}, n = {n_prepared}, m = {m}"
        )));
    }
    let total = binomial(m, k)
        .filter(|&t| t <= max_patterns as u128)
        .ok_or_else(|| Error::SizeLimit(format!("C({m},{k}) exceeds {max_patterns}")))?;
    let mut weights = Vec::with_capacity(total as usize);
    let mut modes: Vec<usize> = (0..k).collect();
    loop {
        let s = OutputPattern::new(modes.clone())?;
        weights.push(lossy_likelihood(u, &s, n_prepared)?);
        if !advance_pattern_colex(&mut modes, m) {
            break;
        }
    }
    let z = weights.iter().fold(T::zero(), |a, &b| a + b);
    if !(z > T::zero()) {
        return Err(Error::DegenerateInput("all lossy weights vanish".into()));
    }
    for w in weights.iter_mut() {
        *w = *w / z;
    }
    Ok(weights)
}

/// Exact joint distribution of (input subset, output pattern) for the
/// scattershot sampler, as a map keyed by (input rank, output rank).
/// Enumeration oracle for tests; small instances only.
pub fn scattershot_joint_distribution<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    max_cells: u64,
) -> Result<std::collections::HashMap<(u128, u128), T>> {
    let m = u.m();
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    let per_side = binomial(m, n).ok_or_else(|| Error::SizeLimit("C(m,n) overflow".into()))?;
    let cells = per_side
        .checked_mul(per_side)
        .filter(|&c| c <= max_cells as u128)
        .ok_or_else(|| Error::SizeLimit(format!("C({m},{n})² exceeds {max_cells}")))?;
    let _ = cells;

    let inputs = input_subsets(m, n);
    let uniform_t = T::from_f64_exact(1.0 / inputs.len() as f64);
    let mut joint = std::collections::HashMap::new();
    for t in &inputs {
        // Per-input CFS normalization: conditioned on T, patterns follow the
        // renormalized |Per(A_{S,T})|² distribution.
        let mut weights = Vec::with_capacity(per_side as usize);
        let mut modes: Vec<usize> = (0..n).collect();
        loop {
            let s = OutputPattern::new(modes.clone())?;
            weights.push(bs_weight_cols(u, &s, t)?);
            if !advance_pattern_colex(&mut modes, m) {
                break;
            }
        }
        let z = weights.iter().fold(T::zero(), |a, &b| a + b);
        let t_rank = pattern_rank(&OutputPattern::new(t.columns().to_vec())?, m)?;
        for (rank, w) in weights.into_iter().enumerate() {
            joint.insert((t_rank, rank as u128), uniform_t * w / z);
        }
    }
    Ok(joint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::sample_mis;
    use crate::test_support::tv_distance;

    #[test]
    fn lossless_loss_config_reduces_to_standard_target() {
        // k = n: Λ_{n,n} is a singleton, every input record is (0..n) and the
        // sampled distribution is plain CFS boson sampling.
        let u = crate::haar_unitary::<f64>(4, 91).unwrap();
        let loss = LossConfig {
            n_prepared: 2,
            k_detected: 2,
        };
        let config = ChainConfig {
            tau_burn: 40,
            tau_thin: 1,
            chains: 2,
            seed: 17,
        };
        let draws = 10_000;
        let s = sample_mis_lossy(&u, &loss, draws, &config).unwrap();
        assert!(s.k_detected.is_none());
        for t in s.inputs.as_ref().unwrap() {
            assert_eq!(t.columns(), &[0, 1]);
        }
        let exact = crate::samplers::cfs_distribution(&u, 2, 1_000_000).unwrap();
        let tv = tv_distance(&s, &exact);
        assert!(tv < 0.05, "TV {tv}");
    }

    #[test]
    fn single_survivor_averages_columns() {
        // k = 1: output mode i carries weight (1/n)Σ_j |U_ij|².
        let (n, m) = (3usize, 5usize);
        let u = crate::haar_unitary::<f64>(m, 93).unwrap();
        let temper = temperament_distribution(&u, n, 1, 1_000).unwrap();
        let mut expected: Vec<f64> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| u.matrix().get(i, j).norm_sqr())
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        let z: f64 = expected.iter().sum();
        for e in expected.iter_mut() {
            *e /= z;
        }
        for (a, b) in temper.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn lossy_chain_budget_is_burn_in_only() {
        let u = crate::haar_unitary::<f64>(9, 95).unwrap();
        let loss = LossConfig {
            n_prepared: 3,
            k_detected: 2,
        };
        let config = ChainConfig {
            tau_burn: 13,
            tau_thin: 100,
            chains: 2,
            seed: 3,
        };
        let count = 25;
        let s = sample_mis_lossy(&u, &loss, count, &config).unwrap();
        // Per pattern: one init evaluation plus τ_burn steps; thinning unused.
        let expected = (count * (1 + config.tau_burn)) as u64;
        assert_eq!(s.stats.complex_perms, expected);
        assert_eq!(s.stats.real_perms, expected);
        assert_eq!(s.k_detected, Some(2));
    }

    #[test]
    fn lossy_worker_count_does_not_change_output() {
        let u = crate::haar_unitary::<f64>(6, 97).unwrap();
        let loss = LossConfig {
            n_prepared: 3,
            k_detected: 2,
        };
        let mk = |chains| ChainConfig {
            tau_burn: 10,
            tau_thin: 1,
            chains,
            seed: 7,
        };
        let a = sample_mis_lossy(&u, &loss, 40, &mk(1)).unwrap();
        let b = sample_mis_lossy(&u, &loss, 40, &mk(4)).unwrap();
        assert_eq!(a.patterns, b.patterns);
        assert_eq!(a.inputs, b.inputs);
    }

    #[test]
    fn scattershot_with_all_modes_used_reduces_to_mis() {
        // m = n leaves a single input choice.
        let u = crate::haar_unitary::<f64>(3, 99).unwrap();
        let config = ChainConfig {
            tau_burn: 10,
            tau_thin: 1,
            chains: 1,
            seed: 4,
        };
        let s = sample_mis_scattershot(&u, 3, 20, &config).unwrap();
        for t in s.inputs.as_ref().unwrap() {
            assert_eq!(t.columns(), &[0, 1, 2]);
        }
        for p in &s.patterns {
            assert_eq!(p.modes(), &[0, 1, 2]);
        }
        let mis = sample_mis(&u, 3, 20, &config).unwrap();
        for p in &mis.patterns {
            assert_eq!(p.modes(), &[0, 1, 2]);
        }
    }

    #[test]
    fn scattershot_input_marginal_is_uniform() {
        let (n, m) = (2usize, 5usize);
        let u = crate::haar_unitary::<f64>(m, 101).unwrap();
        let config = ChainConfig {
            tau_burn: 15,
            tau_thin: 1,
            chains: 2,
            seed: 9,
        };
        let draws = 10_000usize;
        let s = sample_mis_scattershot(&u, n, draws, &config).unwrap();
        let subsets = binomial(m, n).unwrap() as usize;
        let mut counts = vec![0usize; subsets];
        for t in s.inputs.as_ref().unwrap() {
            let rank =
                pattern_rank(&OutputPattern::new(t.columns().to_vec()).unwrap(), m).unwrap();
            counts[rank as usize] += 1;
        }
        let expect = draws as f64 / subsets as f64;
        let sigma = (expect * (1.0 - 1.0 / subsets as f64)).sqrt();
        for (rank, c) in counts.iter().enumerate() {
            assert!(
                (*c as f64 - expect).abs() < 3.0 * sigma,
                "subset {rank}: {c} vs {expect} ± {sigma}"
            );
        }
    }

    #[test]
    fn guards() {
        let u = crate::haar_unitary::<f64>(4, 1).unwrap();
        let bad = LossConfig {
            n_prepared: 3,
            k_detected: 4,
        };
        assert!(sample_mis_lossy(&u, &bad, 1, &ChainConfig::with_seed(1)).is_err());
        // C(n, k) guard on the likelihood sum.
        let u30 = crate::haar_unitary::<f64>(40, 2).unwrap();
        let s = OutputPattern::first_n(15);
        assert!(matches!(
            lossy_likelihood(&u30, &s, 30),
            Err(Error::SizeLimit(_))
        ));
    }
}
