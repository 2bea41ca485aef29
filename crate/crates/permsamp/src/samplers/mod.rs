//! Classical samplers over the collision-free boson-sampling distribution:
//! brute-force inverse-CDF, rejection with a hill-climbed envelope,
//! Metropolised independence sampling (MIS) with the distinguishable-particle
//! proposal, the distinguishable-particle sampler itself, and the lossy and
//! scattershot MIS variants.

mod brute;
mod distinguishable;
mod lossy;
mod mis;
mod rejection;

pub use brute::{cfs_distribution, cfs_weights, sample_brute_force, DEFAULT_MAX_PATTERNS};
pub use distinguishable::{
    collision_free_fraction, lossy_collision_free_fraction, sample_distinguishable, ColumnCdfs,
};
pub use lossy::{
    lossy_dist_likelihood, lossy_likelihood, sample_mis_lossy, sample_mis_scattershot,
    scattershot_joint_distribution, temperament_distribution, LOSSY_LIKELIHOOD_MAX_TERMS,
};
pub use mis::{sample_mis, MisChain, MisState};
pub use rejection::{estimate_mu, sample_rejection, MuEstimate};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{InputSubset, OutputPattern};
use crate::permanent::per_ryser;
use crate::scalar::{Real, Scalar};
use crate::Interferometer;

/// |Per(A_S)|², the unnormalized collision-free boson-sampling weight of
/// pattern `s` with photons in the first n input modes.
pub fn bs_weight<T: Real>(u: &Interferometer<T>, s: &OutputPattern) -> Result<T> {
    bs_weight_cols(u, s, &InputSubset::first_k(s.len()))
}

/// As [`bs_weight`] with an explicit input-column subset (lossy/scattershot).
pub fn bs_weight_cols<T: Real>(
    u: &Interferometer<T>,
    s: &OutputPattern,
    cols: &InputSubset,
) -> Result<T> {
    s.validate_for(s.len(), u.m())?;
    cols.validate_for(u.m())?;
    let a_s = u.matrix().submatrix(s, cols)?;
    Ok(per_ryser(&a_s)?.modulus_sqr())
}

/// Per(|A_S|²), the distinguishable-particle weight of pattern `s`
/// (collision-free, so the occupation factorials are all 1).
pub fn dist_weight<T: Real>(u: &Interferometer<T>, s: &OutputPattern) -> Result<T> {
    dist_weight_cols(u, s, &InputSubset::first_k(s.len()))
}

/// As [`dist_weight`] with an explicit input-column subset.
pub fn dist_weight_cols<T: Real>(
    u: &Interferometer<T>,
    s: &OutputPattern,
    cols: &InputSubset,
) -> Result<T> {
    s.validate_for(s.len(), u.m())?;
    cols.validate_for(u.m())?;
    let a_s = u.matrix().submatrix(s, cols)?;
    per_ryser(&a_s.modulus_sqr())
}

/// Which sampling procedure produced a [`SampleSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerId {
    Brute,
    Rejection,
    Mis,
    Distinguishable,
    MisLossy,
    MisScattershot,
}

impl std::fmt::Display for SamplerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SamplerId::Brute => "brute",
            SamplerId::Rejection => "rejection",
            SamplerId::Mis => "mis",
            SamplerId::Distinguishable => "distinguishable",
            SamplerId::MisLossy => "mis_lossy",
            SamplerId::MisScattershot => "mis_scattershot",
        })
    }
}

impl std::str::FromStr for SamplerId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(SamplerId::Brute),
            "rejection" => Ok(SamplerId::Rejection),
            "mis" => Ok(SamplerId::Mis),
            "distinguishable" => Ok(SamplerId::Distinguishable),
            "mis_lossy" => Ok(SamplerId::MisLossy),
            "mis_scattershot" => Ok(SamplerId::MisScattershot),
            other => Err(Error::Parse(format!("unknown sampler id {other:?}"))),
        }
    }
}

/// MIS chain parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainConfig {
    pub tau_burn: usize,
    pub tau_thin: usize,
    pub chains: usize,
    pub seed: u64,
}

impl ChainConfig {
    /// Paper-validated defaults: τ_burn = τ_thin = 100, one chain.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            tau_burn: 100,
            tau_thin: 100,
            chains: 1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_thin < 1 {
            return Err(Error::InvalidConfig("tau_thin must be ≥ 1".into()));
        }
        if self.chains < 1 {
            return Err(Error::InvalidConfig("chains must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// Lossy boson sampling: n photons prepared, k survive to the circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LossConfig {
    pub n_prepared: usize,
    pub k_detected: usize,
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_detected < 1 || self.k_detected > self.n_prepared {
            return Err(Error::InvalidConfig(format!(
                "need 1 ≤ k ≤ n, got k = {}, n = {}",
                self.k_detected, self.n_prepared
            )));
        }
        Ok(())
    }
}

/// Instrumented work counters; the MIS permanent budget per emitted pattern
/// is asserted against these in tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SamplerStats {
    pub complex_perms: u64,
    pub real_perms: u64,
    pub proposals: u64,
    pub accepted: u64,
}

impl SamplerStats {
    pub fn absorb(&mut self, other: &SamplerStats) {
        self.complex_perms += other.complex_perms;
        self.real_perms += other.real_perms;
        self.proposals += other.proposals;
        self.accepted += other.accepted;
    }
}

/// An ordered collection of detection patterns with provenance.
#[derive(Clone, Debug)]
pub struct SampleSet {
    /// Photons prepared at the input.
    pub n: usize,
    /// Interferometer modes.
    pub m: usize,
    pub patterns: Vec<OutputPattern>,
    /// Per-pattern input columns (lossy/scattershot only).
    pub inputs: Option<Vec<InputSubset>>,
    pub sampler_id: SamplerId,
    pub seed: u64,
    pub matrix_fingerprint: String,
    pub config: Option<ChainConfig>,
    pub acceptance_rate: Option<f64>,
    /// Detected photons per pattern when fewer than `n` (lossy only).
    pub k_detected: Option<usize>,
    pub stats: SamplerStats,
}

impl SampleSet {
    /// Photons per pattern (n, or k for lossy sets).
    pub fn pattern_size(&self) -> usize {
        self.k_detected.unwrap_or(self.n)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.pattern_size();
        for p in &self.patterns {
            p.validate_for(size, self.m)?;
        }
        if let Some(inputs) = &self.inputs {
            if inputs.len() != self.patterns.len() {
                return Err(Error::InvalidConfig(
                    "per-pattern inputs must match pattern count".into(),
                ));
            }
            let bound = match self.sampler_id {
                SamplerId::MisScattershot => self.m,
                _ => self.n,
            };
            for t in inputs {
                if t.len() != size {
                    return Err(Error::InvalidPattern(format!(
                        "input subset of {} columns where {size} expected",
                        t.len()
                    )));
                }
                t.validate_for(bound)?;
            }
        }
        if let Some(r) = self.acceptance_rate {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::InvalidConfig(format!(
                    "acceptance rate {r} outside [0,1]"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform k-subset of [0, bound) by Floyd's algorithm, sorted ascending.
pub(crate) fn random_subset<R: Rng + ?Sized>(rng: &mut R, bound: usize, k: usize) -> Vec<usize> {
    debug_assert!(k <= bound);
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for j in (bound - k)..bound {
        let t = rng.random_range(0..=j);
        if chosen.contains(&t) {
            chosen.push(j);
        } else {
            chosen.push(t);
        }
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;

    #[test]
    fn bs_weight_identity_routing() {
        let u = identity_interferometer(6);
        let s = OutputPattern::first_n(3);
        assert!((bs_weight(&u, &s).unwrap() - 1.0).abs() < 1e-12);
        // Any mode ≥ n hits a zero row of A_S.
        let s = OutputPattern::new(vec![0, 1, 4]).unwrap();
        assert_eq!(bs_weight(&u, &s).unwrap(), 0.0);
    }

    #[test]
    fn dist_weight_identity_and_single_photon() {
        let u = identity_interferometer(5);
        assert!((dist_weight(&u, &OutputPattern::first_n(2)).unwrap() - 1.0).abs() < 1e-12);

        let u = crate::haar_unitary::<f64>(4, 3).unwrap();
        for mode in 0..4 {
            let s = OutputPattern::new(vec![mode]).unwrap();
            let expected = u.matrix().get(mode, 0).norm_sqr();
            assert!((dist_weight(&u, &s).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn cfs_mass_complements_bunched_terms() {
        // Full Fock space check at n=2, m=4: Σ over all multisets S of
        // |Per(A_S)|²/∏ s_i! is 1; the CFS weights account for the rest.
        let u = crate::haar_unitary::<f64>(4, 9).unwrap();
        let a = u.matrix();
        let mut cfs_sum = 0.0;
        let mut p: Vec<usize> = vec![0, 1];
        loop {
            let s = OutputPattern::new(p.clone()).unwrap();
            cfs_sum += bs_weight(&u, &s).unwrap();
            if !crate::linalg::advance_pattern_colex(&mut p, 4) {
                break;
            }
        }
        assert!(cfs_sum < 1.0);

        let mut bunched_sum = 0.0;
        for mode in 0..4 {
            // S with s_mode = 2: two copies of the same row, 2! normalization.
            let rows = vec![mode, mode];
            let sub = a.select(&rows, &[0, 1]).unwrap();
            let per = crate::permanent::per_ryser(&sub).unwrap();
            bunched_sum += per.norm_sqr() / 2.0;
        }
        assert!(
            (cfs_sum + bunched_sum - 1.0).abs() < 1e-10,
            "cfs {cfs_sum} + bunched {bunched_sum} ≠ 1"
        );
    }

    #[test]
    fn chain_config_validation() {
        let mut c = ChainConfig::with_seed(1);
        assert!(c.validate().is_ok());
        c.tau_thin = 0;
        assert!(c.validate().is_err());
        c.tau_thin = 1;
        c.chains = 0;
        assert!(c.validate().is_err());
        assert!(LossConfig { n_prepared: 4, k_detected: 0 }.validate().is_err());
        assert!(LossConfig { n_prepared: 4, k_detected: 5 }.validate().is_err());
        assert!(LossConfig { n_prepared: 4, k_detected: 3 }.validate().is_ok());
    }

    #[test]
    fn random_subset_is_uniform_enough() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut counts = std::collections::HashMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            let s = random_subset(&mut rng, 5, 2);
            *counts.entry(s).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 10);
        let expected = draws as f64 / 10.0;
        for (_, c) in counts {
            // 5σ multinomial band.
            let sigma = (expected * (1.0 - 0.1)).sqrt();
            assert!((c as f64 - expected).abs() < 5.0 * sigma);
        }
    }
}

