//! Metropolised independence sampling with the distinguishable-particle
//! proposal.
//!
//! The chain state is a collision-free pattern x with cached target weight
//! f(x) = |Per(A_S)|² and proposal weight g(x) = Per(|A_S|²). A proposed x′
//! (one fresh distinguishable draw) is accepted with probability
//! min(1, [f(x′)/f(x)]·[g(x)/g(x′)]); normalizations cancel in the ratio.
//! Each step costs one complex and one real n×n permanent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{InputSubset, OutputPattern};
use crate::samplers::{
    bs_weight_cols, dist_weight_cols, ChainConfig, ColumnCdfs, SampleSet, SamplerId, SamplerStats,
};
use crate::scalar::Real;
use crate::{split_seed, Interferometer};

/// A chain state with its cached target and proposal weights.
#[derive(Clone, Debug)]
pub struct MisState<T> {
    pub pattern: OutputPattern,
    /// f(x) = |Per(A_S)|².
    pub target: T,
    /// g(x) = Per(|A_S|²).
    pub proposal: T,
}

/// One Markov chain over the CFS patterns of `u` restricted to the given
/// input columns (0..n for standard boson sampling).
pub struct MisChain<'a, T: Real> {
    u: &'a Interferometer<T>,
    cols: InputSubset,
    cdfs: ColumnCdfs<T>,
    rng: ChaCha8Rng,
    state: MisState<T>,
    pub stats: SamplerStats,
}

impl<'a, T: Real> MisChain<'a, T> {
    /// Starts a chain at a draw from the proposal distribution.
    pub fn new(u: &'a Interferometer<T>, cols: InputSubset, seed: u64) -> Result<Self> {
        if cols.is_empty() || cols.len() > u.m() {
            return Err(Error::InvalidDimension(format!(
                "need 1 ≤ photons ≤ m, got {} photons, m = {}",
                cols.len(),
                u.m()
            )));
        }
        cols.validate_for(u.m())?;
        let cdfs = ColumnCdfs::new(u, cols.columns())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (pattern, _) = cdfs.draw_pattern(&mut rng);
        let target = bs_weight_cols(u, &pattern, &cols)?;
        let proposal = dist_weight_cols(u, &pattern, &cols)?;
        let stats = SamplerStats {
            complex_perms: 1,
            real_perms: 1,
            ..SamplerStats::default()
        };
        Ok(Self {
            u,
            cols,
            cdfs,
            rng,
            state: MisState {
                pattern,
                target,
                proposal,
            },
            stats,
        })
    }

    /// Standard boson sampling: photons in the first n input modes.
    pub fn standard(u: &'a Interferometer<T>, n: usize, seed: u64) -> Result<Self> {
        Self::new(u, InputSubset::first_k(n), seed)
    }

    pub fn state(&self) -> &MisState<T> {
        &self.state
    }

    /// One proposal/accept-reject transition. Returns whether the proposal
    /// was accepted; on rejection the state is unchanged.
    pub fn step(&mut self) -> Result<bool> {
        let (candidate, _) = self.cdfs.draw_pattern(&mut self.rng);
        let f_new = bs_weight_cols(self.u, &candidate, &self.cols)?;
        let g_new = dist_weight_cols(self.u, &candidate, &self.cols)?;
        self.stats.complex_perms += 1;
        self.stats.real_perms += 1;
        self.stats.proposals += 1;

        let accept = mis_accept(
            self.state.target,
            self.state.proposal,
            f_new,
            g_new,
            &mut self.rng,
        );
        if accept {
            self.stats.accepted += 1;
            self.state = MisState {
                pattern: candidate,
                target: f_new,
                proposal: g_new,
            };
        }
        Ok(accept)
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.stats.proposals == 0 {
            0.0
        } else {
            self.stats.accepted as f64 / self.stats.proposals as f64
        }
    }
}

/// The acceptance rule of Metropolised independence sampling:
/// min(1, [f(x′)/f(x)]·[g(x)/g(x′)]). A current state with f(x) = 0 (only
/// reachable at contrived unitaries) accepts any proposal with f(x′) > 0,
/// the limit of the ratio.
pub fn mis_accept<T: Real, R: Rng + ?Sized>(
    f_cur: T,
    g_cur: T,
    f_new: T,
    g_new: T,
    rng: &mut R,
) -> bool {
    if !(f_cur > T::zero()) {
        return f_new > T::zero();
    }
    // g values are strictly positive for states reachable by the proposal.
    let ratio = (f_new / f_cur) * (g_cur / g_new);
    if ratio >= T::one() {
        true
    } else {
        T::unit_uniform(rng) < ratio
    }
}

/// Samples `count` patterns by MIS: each chain starts at a proposal draw,
/// discards τ_burn states, then emits every τ_thin-th state. Chains use
/// seeds split from the master seed and their outputs interleave round-robin,
/// so the result is deterministic for a given (seed, chains, count).
pub fn sample_mis<T: Real>(
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
    let chains = config.chains.min(count.max(1));
    let quota = |c: usize| (count + chains - 1 - c) / chains;

    let run_chain = |c: usize| -> Result<(Vec<OutputPattern>, SamplerStats)> {
        let mut chain = MisChain::standard(u, n, split_seed(config.seed, c as u64))?;
        chain.advance(config.tau_burn)?;
        let mut emitted = Vec::with_capacity(quota(c));
        for _ in 0..quota(c) {
            chain.advance(config.tau_thin)?;
            emitted.push(chain.state().pattern.clone());
        }
        Ok((emitted, chain.stats))
    };

    let workers = crate::thread_count().min(chains);
    let per_chain: Vec<(Vec<OutputPattern>, SamplerStats)> = if workers <= 1 || chains == 1 {
        (0..chains).map(run_chain).collect::<Result<_>>()?
    } else {
        let run_chain = &run_chain;
        let mut results: Vec<Option<Result<_>>> = (0..chains).map(|_| None).collect();
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(chains);
            for c in 0..chains {
                handles.push(scope.spawn(move || run_chain(c)));
            }
            for (c, h) in handles.into_iter().enumerate() {
                results[c] = Some(h.join().expect("MIS chain panicked"));
            }
        });
        results
            .into_iter()
            .map(|r| r.expect("chain result"))
            .collect::<Result<_>>()?
    };

    let mut stats = SamplerStats::default();
    for (_, s) in &per_chain {
        stats.absorb(s);
    }
    let mut patterns = Vec::with_capacity(count);
    let mut cursors = vec![0usize; chains];
    for i in 0..count {
        let c = i % chains;
        patterns.push(per_chain[c].0[cursors[c]].clone());
        cursors[c] += 1;
    }
    debug_assert!(per_chain
        .iter()
        .enumerate()
        .all(|(c, (emitted, _))| cursors[c] == emitted.len()));

    let acceptance_rate = if stats.proposals > 0 {
        Some(stats.accepted as f64 / stats.proposals as f64)
    } else {
        None
    };
    Ok(SampleSet {
        n,
        m: u.m(),
        patterns,
        inputs: None,
        sampler_id: SamplerId::Mis,
        seed: config.seed,
        matrix_fingerprint: u.fingerprint().to_string(),
        config: Some(*config),
        acceptance_rate,
        k_detected: None,
        stats,
    })
}
