//! Rejection sampling with a uniform proposal over the CFS and an envelope
//! bound μ ≈ max_S |Per(A_S)|² estimated by random-restart hill climbing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::OutputPattern;
use crate::samplers::{bs_weight, random_subset, SampleSet, SamplerId, SamplerStats};
use crate::scalar::Real;
use crate::Interferometer;

/// Result of the envelope search.
#[derive(Clone, Debug)]
pub struct MuEstimate<T> {
    /// Largest weight found.
    pub mu: T,
    /// Where it was found.
    pub argmax: OutputPattern,
    /// Permanent evaluations spent (n(m−n) per pass plus one per restart).
    pub complex_perms: u64,
}

/// Random-restart hill climbing for μ = max_S |Per(A_S)|².
///
/// From a uniform random pattern, each pass greedily tries swapping every
/// selected row for every unselected row of A, keeping strict improvements;
/// passes repeat until none improves, then the search restarts. The paper's
/// validated restart budget is 4m.
pub fn estimate_mu<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<MuEstimate<T>> {
    let m = u.m();
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_w = T::neg_infinity();
    let mut best: Option<OutputPattern> = None;
    let mut perms = 0u64;

    let mut selected = vec![false; m];
    for _ in 0..restarts {
        let mut modes = random_subset(&mut rng, m, n);
        selected.iter_mut().for_each(|s| *s = false);
        for &i in &modes {
            selected[i] = true;
        }
        let mut w = bs_weight(u, &OutputPattern::new(modes.clone())?)?;
        perms += 1;
        loop {
            let mut improved = false;
            for pos in 0..n {
                // Candidates are the rows outside the pattern as this
                // position starts; exactly m−n trials, n(m−n) per pass.
                let candidates: Vec<usize> =
                    (0..m).filter(|&r| !selected[r]).collect();
                for cand in candidates {
                    let old = modes[pos];
                    modes[pos] = cand;
                    modes.sort_unstable();
                    let w_new = bs_weight(u, &OutputPattern::new(modes.clone())?)?;
                    perms += 1;
                    if w_new > w {
                        w = w_new;
                        selected[old] = false;
                        selected[cand] = true;
                        improved = true;
                    } else {
                        // Revert: remove cand, reinstate old, restore order.
                        let idx = modes.iter().position(|&x| x == cand).expect("present");
                        modes.remove(idx);
                        let ins = modes.partition_point(|&x| x < old);
                        modes.insert(ins, old);
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if w > best_w {
            best_w = w;
            best = Some(OutputPattern::new(modes)?);
        }
    }
    Ok(MuEstimate {
        mu: best_w,
        argmax: best.expect("at least one restart"),
        complex_perms: perms,
    })
}

/// Uniform-proposal rejection sampler. Proposals are accepted with
/// probability w/μ; proposals with w > μ are treated as rejections, i.e. the
/// sampler draws from the distribution truncated at the envelope.
pub fn sample_rejection<T: Real>(
    u: &Interferometer<T>,
    n: usize,
    count: usize,
    mu: T,
    seed: u64,
) -> Result<SampleSet> {
    let m = u.m();
    if n == 0 || n > m {
        return Err(Error::InvalidDimension(format!(
            "need 1 ≤ n ≤ m, got n = {n}, m = {m}"
        )));
    }
    if !(mu > T::zero()) {
        return Err(Error::InvalidConfig("mu must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SamplerStats::default();
    let mut patterns = Vec::with_capacity(count);
    while patterns.len() < count {
        let modes = random_subset(&mut rng, m, n);
        let pattern = OutputPattern::new(modes)?;
        let w = bs_weight(u, &pattern)?;
        stats.proposals += 1;
        stats.complex_perms += 1;
        if w <= mu && T::unit_uniform(&mut rng) * mu < w {
            stats.accepted += 1;
            patterns.push(pattern);
        }
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
        inputs: None,
        sampler_id: SamplerId::Rejection,
        seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: None,
        acceptance_rate,
        k_detected: None,
        stats,
    })
}
