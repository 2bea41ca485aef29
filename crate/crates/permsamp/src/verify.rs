//! Statistical certification of sample sets: the −log(|Per(A_S)|²) summary
//! statistic, bootstrap two-sample Kolmogorov–Smirnov tests, the
//! boson-vs-distinguishable likelihood-ratio curve, and autocorrelation
//! diagnostics for thinned chains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::samplers::{
    bs_weight, bs_weight_cols, cfs_weights, collision_free_fraction, dist_weight,
    dist_weight_cols, lossy_collision_free_fraction, lossy_dist_likelihood, lossy_likelihood,
    SampleSet,
};
use crate::scalar::Real;
use crate::Interferometer;

/// Clamp applied to a single log likelihood-ratio event whose probability
/// vanished under one hypothesis; keeps the cumulative sum finite.
const LOG_RATIO_CLAMP: f64 = 700.0;

/// −ln of each pattern's target weight: |Per(A_S)|² for standard samples,
/// |Per(A_{S,T})|² with the recorded input for scattershot, and the
/// Λ-averaged lossy likelihood for lossy samples (guarded).
pub fn log_weight_series<T: Real>(u: &Interferometer<T>, sample: &SampleSet) -> Result<Vec<T>> {
    sample.validate()?;
    let mut out = Vec::with_capacity(sample.len());
    for (idx, p) in sample.patterns.iter().enumerate() {
        let w = event_target_weight(u, sample, idx, p)?;
        out.push(-w.ln());
    }
    Ok(out)
}

fn event_target_weight<T: Real>(
    u: &Interferometer<T>,
    sample: &SampleSet,
    idx: usize,
    p: &crate::OutputPattern,
) -> Result<T> {
    match (&sample.inputs, sample.k_detected) {
        // Lossy: the surviving subset is unknown to a verifier, so the
        // likelihood marginalizes over it even when the sampler recorded it.
        (_, Some(_)) => lossy_likelihood(u, p, sample.n),
        (Some(inputs), None) => bs_weight_cols(u, p, &inputs[idx]),
        (None, None) => bs_weight(u, p),
    }
}

fn event_alt_weight<T: Real>(
    u: &Interferometer<T>,
    sample: &SampleSet,
    idx: usize,
    p: &crate::OutputPattern,
) -> Result<T> {
    match (&sample.inputs, sample.k_detected) {
        (_, Some(_)) => lossy_dist_likelihood(u, p, sample.n),
        (Some(inputs), None) => dist_weight_cols(u, p, &inputs[idx]),
        (None, None) => dist_weight(u, p),
    }
}

/// Two-sample KS result.
#[derive(Clone, Debug)]
pub struct KsResult<T> {
    /// sup |F_a − F_b| ∈ [0, 1].
    pub statistic: T,
    /// Bootstrap p-value: fraction of pooled resamples at least as extreme.
    pub p_value: T,
    pub bootstrap_reps: usize,
}

/// Two-sample KS statistic by a sorted merge walk.
pub fn ks_statistic<T: Real>(a: &[T], b: &[T]) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("KS needs two nonempty samples".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite values"));
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite values"));
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = 0.0f64;
    while i < xs.len() || j < ys.len() {
        // Advance past ties together so the CDF difference is evaluated
        // between distinct support points.
        let next = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => {
                if x < y {
                    x
                } else {
                    y
                }
            }
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] == next {
            i += 1;
        }
        while j < ys.len() && ys[j] == next {
            j += 1;
        }
        let diff = (i as f64 / na - j as f64 / nb).abs();
        best = best.max(diff);
    }
    Ok(T::from_f64_exact(best))
}

/// Bootstrap two-sample KS test: the p-value is the fraction of `reps`
/// resamples from the pooled data whose statistic is ≥ the observed one.
pub fn ks_bootstrap<T: Real>(a: &[T], b: &[T], reps: usize, seed: u64) -> Result<KsResult<T>> {
    if reps < 100 {
        return Err(Error::InvalidConfig("bootstrap reps must be ≥ 100".into()));
    }
    let observed = ks_statistic(a, b)?;

    let mut pool: Vec<T> = a.iter().chain(b.iter()).copied().collect();
    pool.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite values"));
    // Group exactly equal values so resampled CDFs step together on ties.
    let mut values: Vec<T> = Vec::with_capacity(pool.len());
    let mut multiplicity: Vec<usize> = Vec::new();
    for &v in &pool {
        match values.last() {
            Some(&last) if last == v => *multiplicity.last_mut().expect("entry") += 1,
            _ => {
                values.push(v);
                multiplicity.push(1);
            }
        }
    }
    // Cumulative counts let a uniform index map to its value group.
    let mut group_end: Vec<usize> = Vec::with_capacity(multiplicity.len());
    let mut acc = 0usize;
    for &m in &multiplicity {
        acc += m;
        group_end.push(acc);
    }

    let (na, nb) = (a.len(), b.len());
    let total = na + nb;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts_a = vec![0u32; values.len()];
    let mut counts_b = vec![0u32; values.len()];
    let observed_f = observed.to_f64().expect("statistic fits f64");
    let mut at_least = 0usize;
    for _ in 0..reps {
        counts_a.iter_mut().for_each(|c| *c = 0);
        counts_b.iter_mut().for_each(|c| *c = 0);
        for _ in 0..na {
            let idx = rng.random_range(0..total);
            let g = group_end.partition_point(|&e| e <= idx);
            counts_a[g] += 1;
        }
        for _ in 0..nb {
            let idx = rng.random_range(0..total);
            let g = group_end.partition_point(|&e| e <= idx);
            counts_b[g] += 1;
        }
        let mut ca = 0u32;
        let mut cb = 0u32;
        let mut stat = 0.0f64;
        for g in 0..values.len() {
            ca += counts_a[g];
            cb += counts_b[g];
            let diff = (ca as f64 / na as f64 - cb as f64 / nb as f64).abs();
            if diff > stat {
                stat = diff;
            }
        }
        if stat >= observed_f {
            at_least += 1;
        }
    }
    Ok(KsResult {
        statistic: observed,
        p_value: T::from_f64_exact(at_least as f64 / reps as f64),
        bootstrap_reps: reps,
    })
}

/// Alternative hypothesis of the likelihood-ratio test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AltHypothesis {
    Distinguishable,
}

/// Normalization of the per-event likelihoods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Normalization {
    /// q_x scaled by the Haar-averaged collision-free probability
    /// C(m,n)/C(m+n−1,n); r_x by an empirical collision-free fraction of
    /// distinguishable routing draws. The paper's method.
    HaarAverage {
        /// Routing draws behind the r_x normalization.
        zr_draws: usize,
    },
    /// Instance-exact sums over the full CFS (tiny instances only).
    Exact { max_patterns: u64 },
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization::HaarAverage { zr_draws: 1_000_000 }
    }
}

/// Cumulative probability of the boson hypothesis after each event.
#[derive(Clone, Debug)]
pub struct LrtCurve<T> {
    /// p_ind[e] is P(boson | first e events); p_ind[0] = 1/2 (equal priors).
    pub p_ind: Vec<T>,
    /// Events whose log ratio was clamped at ±700 (a vanished likelihood).
    pub clamped_events: usize,
    /// Normalization used for q_x.
    pub z_q: T,
    /// Normalization used for r_x.
    pub z_r: T,
}

/// Likelihood-ratio curve of the boson hypothesis against the
/// distinguishable-particle hypothesis, computed in log space.
pub fn likelihood_ratio_curve<T: Real>(
    u: &Interferometer<T>,
    sample: &SampleSet,
    _alt: AltHypothesis,
    normalization: Normalization,
    seed: u64,
) -> Result<LrtCurve<T>> {
    sample.validate()?;
    let k = sample.pattern_size();
    let m = sample.m;

    let (z_q, z_r) = match normalization {
        Normalization::HaarAverage { zr_draws } => {
            let z_q = p_cfs::<T>(k, m);
            let z_r = match sample.k_detected {
                Some(kd) => lossy_collision_free_fraction(u, sample.n, kd, zr_draws, seed)?,
                None => collision_free_fraction(u, k, zr_draws, seed)?,
            };
            (z_q, z_r)
        }
        Normalization::Exact { max_patterns } => exact_normalizations(u, sample, max_patterns)?,
    };
    if !(z_r > T::zero()) {
        return Err(Error::DegenerateInput(
            "estimated collision-free fraction is zero".into(),
        ));
    }

    let ln_zq = z_q.ln().to_f64().expect("finite");
    let ln_zr = z_r.ln().to_f64().expect("finite");
    let mut p_ind = Vec::with_capacity(sample.len() + 1);
    p_ind.push(T::from_f64_exact(0.5));
    let mut log_ratio = 0.0f64;
    let mut clamped = 0usize;
    for (idx, p) in sample.patterns.iter().enumerate() {
        let q = event_target_weight(u, sample, idx, p)?.to_f64().expect("finite");
        let r = event_alt_weight(u, sample, idx, p)?.to_f64().expect("finite");
        let mut term = (q.ln() - ln_zq) - (r.ln() - ln_zr);
        if !term.is_finite() || term.abs() > LOG_RATIO_CLAMP {
            clamped += 1;
            term = if term.is_nan() {
                0.0
            } else {
                LOG_RATIO_CLAMP.copysign(term)
            };
        }
        log_ratio += term;
        p_ind.push(T::from_f64_exact(logistic(log_ratio)));
    }
    Ok(LrtCurve {
        p_ind,
        clamped_events: clamped,
        z_q,
        z_r,
    })
}

fn exact_normalizations<T: Real>(
    u: &Interferometer<T>,
    sample: &SampleSet,
    max_patterns: u64,
) -> Result<(T, T)> {
    let k = sample.pattern_size();
    let m = sample.m;
    if sample.k_detected.is_some() {
        // Lossy: sum the Λ-averaged likelihoods over all C(m,k) patterns.
        let mut zq = T::zero();
        let mut zr = T::zero();
        let total = crate::linalg::binomial(m, k)
            .filter(|&t| t <= max_patterns as u128)
            .ok_or_else(|| Error::SizeLimit(format!("C({m},{k}) exceeds {max_patterns}")))?;
        let _ = total;
        let mut modes: Vec<usize> = (0..k).collect();
        loop {
            let p = crate::OutputPattern::new(modes.clone())?;
            zq = zq + lossy_likelihood(u, &p, sample.n)?;
            zr = zr + lossy_dist_likelihood(u, &p, sample.n)?;
            if !crate::linalg::advance_pattern_colex(&mut modes, m) {
                break;
            }
        }
        Ok((zq, zr))
    } else {
        let zq = cfs_weights(u, k, max_patterns)?
            .into_iter()
            .fold(T::zero(), |a, b| a + b);
        let mut zr = T::zero();
        let mut modes: Vec<usize> = (0..k).collect();
        loop {
            let p = crate::OutputPattern::new(modes.clone())?;
            zr = zr + dist_weight(u, &p)?;
            if !crate::linalg::advance_pattern_colex(&mut modes, m) {
                break;
            }
        }
        Ok((zq, zr))
    }
}

/// Numerically stable 1/(1 + e^{−x}); the log-sum-exp of the two-hypothesis
/// posterior, so the curve survives 10⁵-event log ratios without overflow.
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Haar-averaged probability that n photons in m modes land collision-free:
/// C(m,n)/C(m+n−1,n), evaluated as a stable product.
pub fn p_cfs<T: Real>(n: usize, m: usize) -> T {
    let mut acc = 1.0f64;
    for i in 0..n {
        acc *= (m - i) as f64 / (m + n - 1 - i) as f64;
    }
    T::from_f64_exact(acc)
}

/// Normalized sample autocorrelation at lags 1..max_lag with its white-noise
/// 95% band.
#[derive(Clone, Debug)]
pub struct Autocorrelation<T> {
    /// acf[k−1] is the lag-k autocorrelation.
    pub acf: Vec<T>,
    /// ±1.96/√N.
    pub band: T,
}

impl<T: Real> Autocorrelation<T> {
    /// Fraction of lags inside the band.
    pub fn inside_fraction(&self) -> f64 {
        if self.acf.is_empty() {
            return 1.0;
        }
        let inside = self
            .acf
            .iter()
            .filter(|r| r.abs() <= self.band)
            .count();
        inside as f64 / self.acf.len() as f64
    }
}

pub fn autocorrelation<T: Real>(series: &[T], max_lag: usize) -> Result<Autocorrelation<T>> {
    let n = series.len();
    if n == 0 {
        return Err(Error::EmptyInput("autocorrelation of empty series".into()));
    }
    if max_lag == 0 || max_lag >= n {
        return Err(Error::InvalidConfig(format!(
            "max_lag must be in 1..{n}, got {max_lag}"
        )));
    }
    let nf = T::from_f64_exact(n as f64);
    let mean = series.iter().copied().fold(T::zero(), |a, b| a + b) / nf;
    let denom = series
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .fold(T::zero(), |a, b| a + b);
    if !(denom > T::zero()) {
        return Err(Error::DegenerateInput(
            "series has zero variance; autocorrelation undefined".into(),
        ));
    }
    let mut acf = Vec::with_capacity(max_lag);
    for lag in 1..=max_lag {
        let mut num = T::zero();
        for t in 0..n - lag {
            num = num + (series[t] - mean) * (series[t + lag] - mean);
        }
        acf.push(num / denom);
    }
    Ok(Autocorrelation {
        acf,
        band: T::from_f64_exact(1.96 / (n as f64).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{sample_brute_force, sample_distinguishable, ChainConfig};
    use crate::test_support::identity_interferometer;
    use crate::OutputPattern;

    #[test]
    fn log_weight_identity_routing_is_zero() {
        let u = identity_interferometer(5);
        let sample = sample_distinguishable(&u, 3, 4, 1).unwrap();
        let series = log_weight_series(&u, &sample).unwrap();
        for v in series {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn log_weights_finite_and_positive_on_haar() {
        let u = crate::haar_unitary::<f64>(9, 7).unwrap();
        let sample = sample_brute_force(&u, 3, 200, 3, 1_000_000).unwrap();
        for v in log_weight_series(&u, &sample).unwrap() {
            assert!(v.is_finite() && v > 0.0, "got {v}");
        }
    }

    #[test]
    fn ks_identical_lists() {
        let a: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let r = ks_bootstrap(&a, &a, 200, 1).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn ks_statistic_bounds_and_separation() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..100).map(|i| i as f64 + 1000.0).collect();
        let d = ks_statistic(&a, &b).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        let r = ks_bootstrap(&a, &b, 200, 2).unwrap();
        assert_eq!(r.p_value, 0.0);
        assert!(ks_statistic(&a, &[]).is_err());
        assert!(ks_bootstrap(&a, &b, 99, 1).is_err());
    }

    #[test]
    fn ks_null_p_values_are_roughly_uniform() {
        // Same-distribution pairs: the rejection fraction at 0.05 should be
        // 0.05 ± 0.03 over 200 repetitions.
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut below = 0usize;
        let reps = 200;
        for t in 0..reps {
            let a: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
            let b: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
            let r = ks_bootstrap(&a, &b, 200, 1000 + t).unwrap();
            if r.p_value < 0.05 {
                below += 1;
            }
        }
        let frac = below as f64 / reps as f64;
        assert!((frac - 0.05).abs() <= 0.03, "rejection fraction {frac}");
    }

    #[test]
    fn p_cfs_values() {
        assert!((p_cfs::<f64>(1, 7) - 1.0).abs() < 1e-15);
        assert!((p_cfs::<f64>(3, 9) - 84.0 / 165.0).abs() < 1e-15);
        // m = n²: approaches 1/e for large n, within 5% by n = 30.
        let p = p_cfs::<f64>(30, 900);
        let inv_e = (-1.0f64).exp();
        assert!((p - inv_e).abs() / inv_e < 0.05, "p = {p}");
        // Decreasing in n at fixed m.
        let mut prev = 1.0f64 + 1e-9;
        for n in 1..=9 {
            let v = p_cfs::<f64>(n, 9);
            assert!(v > 0.0 && v <= 1.0);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn autocorrelation_degenerate_and_whitenoise() {
        let constant = vec![2.5f64; 100];
        assert!(matches!(
            autocorrelation(&constant, 10),
            Err(Error::DegenerateInput(_))
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let series: Vec<f64> = (0..10_000).map(|_| f64::standard_normal(&mut rng)).collect();
        let ac = autocorrelation(&series, 100).unwrap();
        assert!(
            ac.inside_fraction() >= 0.93,
            "inside fraction {}",
            ac.inside_fraction()
        );

        assert!(autocorrelation(&series, 0).is_err());
        assert!(autocorrelation(&series[..5], 10).is_err());
    }

    #[test]
    fn lrt_zero_events_is_half() {
        let u = crate::haar_unitary::<f64>(4, 3).unwrap();
        let mut sample = sample_brute_force(&u, 2, 0, 1, 1000).unwrap();
        sample.patterns.clear();
        let curve = likelihood_ratio_curve(
            &u,
            &sample,
            AltHypothesis::Distinguishable,
            Normalization::default(),
            9,
        )
        .unwrap();
        assert_eq!(curve.p_ind.len(), 1);
        assert_eq!(curve.p_ind[0], 0.5);
    }

    #[test]
    fn lrt_separates_hypotheses_on_tiny_instance() {
        let u = crate::haar_unitary::<f64>(9, 31).unwrap();
        let events = 400;
        let bs = sample_brute_force(&u, 2, events, 5, 1000).unwrap();
        let dist = sample_distinguishable(&u, 2, events, 6).unwrap();
        for norm in [
            Normalization::HaarAverage { zr_draws: 200_000 },
            Normalization::Exact { max_patterns: 1000 },
        ] {
            let up = likelihood_ratio_curve(&u, &bs, AltHypothesis::Distinguishable, norm, 7)
                .unwrap();
            let down = likelihood_ratio_curve(&u, &dist, AltHypothesis::Distinguishable, norm, 8)
                .unwrap();
            assert!(
                *up.p_ind.last().unwrap() > 0.95,
                "{norm:?}: boson sample ended at {}",
                up.p_ind.last().unwrap()
            );
            assert!(
                *down.p_ind.last().unwrap() < 0.05,
                "{norm:?}: distinguishable sample ended at {}",
                down.p_ind.last().unwrap()
            );
        }
    }

    #[test]
    fn lrt_log_space_survives_extreme_ratios() {
        // The balanced beam splitter suppresses the coincidence outcome
        // (Hong–Ou–Mandel): |Per(H)|² = 0 while Per(|H|²) = 1/2. 10⁵ such
        // events each clamp at −700 and the curve must stay finite.
        let h = 0.5f64.sqrt();
        let matrix = crate::linalg::Matrix::from_vec(
            2,
            2,
            vec![
                crate::Cplx::new(h, 0.0),
                crate::Cplx::new(h, 0.0),
                crate::Cplx::new(h, 0.0),
                crate::Cplx::new(-h, 0.0),
            ],
        )
        .unwrap();
        let u = crate::Interferometer::new(matrix).unwrap();
        let pattern = OutputPattern::new(vec![0, 1]).unwrap();
        let sample = SampleSet {
            n: 2,
            m: 2,
            patterns: vec![pattern; 100_000],
            inputs: None,
            sampler_id: crate::samplers::SamplerId::Distinguishable,
            seed: 0,
            matrix_fingerprint: u.fingerprint().to_string(),
            config: Some(ChainConfig::with_seed(0)),
            acceptance_rate: None,
            k_detected: None,
            stats: Default::default(),
        };
        let curve = likelihood_ratio_curve(
            &u,
            &sample,
            AltHypothesis::Distinguishable,
            Normalization::HaarAverage { zr_draws: 1000 },
            3,
        )
        .unwrap();
        assert_eq!(curve.clamped_events, 100_000);
        for p in &curve.p_ind {
            assert!(p.is_finite() && *p >= 0.0 && *p <= 1.0);
        }
        assert!(*curve.p_ind.last().unwrap() < 1e-12);
    }

    #[test]
    fn lrt_monotone_confidence_growth_in_expectation() {
        // Averaged over independent boson-side samples the curve approaches 1.
        let u = crate::haar_unitary::<f64>(9, 37).unwrap();
        let samples = 20;
        let events = 60;
        let mut avg = vec![0.0f64; events + 1];
        for s in 0..samples {
            let bs = sample_brute_force(&u, 3, events, 100 + s, 1_000_000).unwrap();
            let curve = likelihood_ratio_curve(
                &u,
                &bs,
                AltHypothesis::Distinguishable,
                Normalization::HaarAverage { zr_draws: 100_000 },
                7,
            )
            .unwrap();
            for (i, p) in curve.p_ind.iter().enumerate() {
                avg[i] += p / samples as f64;
            }
        }
        assert!((avg[0] - 0.5).abs() < 1e-12);
        assert!(avg[events] > avg[events / 4]);
        assert!(avg[events] > 0.9, "final averaged P_ind {}", avg[events]);
    }
}
