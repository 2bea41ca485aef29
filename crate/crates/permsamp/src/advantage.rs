//! Closed-form runtime models: classical MIS sampling time, experimental
//! sampling time under loss, the quantum-advantage metric QA, the two
//! supremacy criteria, and calibration of the local permanent-time constant.
//!
//! Times are seconds in f64 throughout.

use crate::error::{Error, Result};
use crate::permanent::{BenchRow, PermKind};
use crate::verify::p_cfs;

pub const WEEK_SECONDS: f64 = 604_800.0;
/// 100 Julian years.
pub const CENTURY_SECONDS: f64 = 100.0 * 365.25 * 86_400.0;

/// Time to compute one real plus one complex n×n permanent, as a·n·2ⁿ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeScaling {
    /// a is a constant (e.g. 7.3e-10 s for a laptop).
    Constant(f64),
    /// a grows linearly in n (e.g. 3n×10⁻¹⁵ s for Tianhe-2).
    PerPhoton(f64),
}

impl TimeScaling {
    pub fn at(&self, n: usize) -> f64 {
        match *self {
            TimeScaling::Constant(a) => a,
            TimeScaling::PerPhoton(c) => c * n as f64,
        }
    }

    /// The supercomputer constant the paper quotes: a = 3n×10⁻¹⁵ s.
    pub fn tianhe2() -> Self {
        TimeScaling::PerPhoton(3e-15)
    }
}

/// n-photon generation rate in Hz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RepetitionRate {
    Constant(f64),
    /// R(n) = r/n (e.g. 76/n MHz for the quantum-dot source).
    PerPhoton(f64),
}

impl RepetitionRate {
    pub fn at(&self, n: usize) -> f64 {
        match *self {
            RepetitionRate::Constant(r) => r,
            RepetitionRate::PerPhoton(r) => r / n as f64,
        }
    }
}

/// How the mode count scales with the photon number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeLaw {
    /// m = 4n.
    Linear4N,
    /// m = n².
    QuadraticN2,
}

impl ModeLaw {
    pub fn modes(&self, n: usize) -> usize {
        match self {
            ModeLaw::Linear4N => 4 * n,
            ModeLaw::QuadraticN2 => n * n,
        }
    }
}

/// Optical circuit depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthLaw {
    /// d = 4n.
    Linear4N,
    /// d = m under the active mode law.
    QuadraticM,
}

impl DepthLaw {
    pub fn depth(&self, n: usize, mode_law: ModeLaw) -> usize {
        match self {
            DepthLaw::Linear4N => 4 * n,
            DepthLaw::QuadraticM => mode_law.modes(n),
        }
    }
}

/// Constants of the runtime comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuntimeParams {
    /// Classical permanent-pair time scaling.
    pub a: TimeScaling,
    /// Experimental repetition rate.
    pub rate: RepetitionRate,
    /// Fixed transmission (generation, coupling, detection).
    pub eta_f: f64,
    /// Transmission per unit circuit depth.
    pub eta_0: f64,
    pub depth_law: DepthLaw,
    pub mode_law: ModeLaw,
    /// Permanent pairs per emitted MIS sample (τ, default 100).
    pub tau: f64,
    /// Replace the exact P_CFS with the main-text 1/e approximation
    /// (meaningful only under the quadratic mode law).
    pub cfs_e_approx: bool,
}

impl RuntimeParams {
    pub fn validate(&self) -> Result<()> {
        let eta_ok = |x: f64| x > 0.0 && x <= 1.0;
        if !eta_ok(self.eta_f) || !eta_ok(self.eta_0) {
            return Err(Error::InvalidConfig(
                "transmissions must lie in (0, 1]".into(),
            ));
        }
        if self.rate.at(1) <= 0.0 {
            return Err(Error::InvalidConfig("rate must be positive".into()));
        }
        if self.a.at(1) <= 0.0 {
            return Err(Error::InvalidConfig("time scaling must be positive".into()));
        }
        Ok(())
    }

    fn p_cfs_at(&self, k: usize, n: usize) -> f64 {
        if self.cfs_e_approx && self.mode_law == ModeLaw::QuadraticN2 {
            (-1.0f64).exp()
        } else {
            p_cfs::<f64>(k, self.mode_law.modes(n))
        }
    }
}

/// c_t = a(n)·τ·n·2ⁿ, the MIS sampling time on the classical machine.
pub fn classical_time(n: usize, a: &TimeScaling, tau: f64) -> f64 {
    a.at(n) * tau * n as f64 * 2f64.powi(n as i32)
}

/// Overall per-photon transmission η = η_f·η_0^d.
pub fn transmission(n: usize, params: &RuntimeParams) -> f64 {
    params.eta_f * params.eta_0.powi(params.depth_law.depth(n, params.mode_law) as i32)
}

/// q_t = (R(n)·P_CFS·ηⁿ)⁻¹ with η from the loss model.
pub fn quantum_time(n: usize, params: &RuntimeParams) -> f64 {
    quantum_time_at_eta(n, transmission(n, params), params)
}

/// q_t at an explicitly given per-photon transmission (the map axis).
pub fn quantum_time_at_eta(n: usize, eta: f64, params: &RuntimeParams) -> f64 {
    let denom = params.rate.at(n) * params.p_cfs_at(n, n) * eta.powi(n as i32);
    if denom > 0.0 {
        1.0 / denom
    } else {
        f64::INFINITY
    }
}

/// Lossy variant: time to detect exactly k of n photons, with the surviving
/// subset binomially distributed: rate = R(n)·P_CFS(k,m)·C(n,k)·η^k(1−η)^{n−k}.
pub fn lossy_quantum_time_at_eta(n: usize, k: usize, eta: f64, params: &RuntimeParams) -> f64 {
    let survive = crate::linalg::binomial_f64(n, k)
        * eta.powi(k as i32)
        * (1.0 - eta).powi((n - k) as i32);
    let denom = params.rate.at(n) * params.p_cfs_at(k, n) * survive;
    if denom > 0.0 {
        1.0 / denom
    } else {
        f64::INFINITY
    }
}

/// The paper's two supremacy notions over the advantage metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupremacyVerdict {
    /// max(0, log₁₀(c_t/q_t)), in orders of magnitude.
    pub qa: f64,
    /// QA > 10.
    pub qs1: bool,
    /// q_t < 1 week and c_t > 100 years.
    pub qs2: bool,
}

fn verdict(c_t: f64, q_t: f64) -> SupremacyVerdict {
    let qa = if q_t.is_finite() && q_t > 0.0 && c_t > 0.0 {
        (c_t / q_t).log10().max(0.0)
    } else {
        0.0
    };
    SupremacyVerdict {
        qa,
        qs1: qa > 10.0,
        qs2: q_t < WEEK_SECONDS && c_t > CENTURY_SECONDS,
    }
}

/// QA and both supremacy flags with η derived from the loss model.
pub fn quantum_advantage(n: usize, params: &RuntimeParams) -> SupremacyVerdict {
    verdict(
        classical_time(n, &params.a, params.tau),
        quantum_time(n, params),
    )
}

/// QA and both supremacy flags at an explicit η.
pub fn quantum_advantage_at_eta(n: usize, eta: f64, params: &RuntimeParams) -> SupremacyVerdict {
    verdict(
        classical_time(n, &params.a, params.tau),
        quantum_time_at_eta(n, eta, params),
    )
}

/// One advantage-map grid cell.
#[derive(Clone, Copy, Debug)]
pub struct MapCell {
    pub n: usize,
    pub eta: f64,
    pub qa: f64,
    pub qs1: bool,
    pub qs2: bool,
    /// Photons kept by the loss optimizer (k = n when no loss is allowed).
    pub k_opt: usize,
}

/// Dense QA grid over photon numbers and transmissions. With `max_lost` > 0
/// each cell optimizes over k ∈ [n−max_lost, n] surviving photons, classical
/// time scaled to k-photon permanents and quantum time to the k-detection
/// rate; k = n is always included so the lossy map dominates the plain one.
pub fn advantage_map(
    ns: &[usize],
    etas: &[f64],
    params: &RuntimeParams,
    max_lost: usize,
) -> Result<Vec<MapCell>> {
    params.validate()?;
    if ns.is_empty() || etas.is_empty() {
        return Err(Error::EmptyInput("advantage map needs a nonempty grid".into()));
    }
    let mut cells = Vec::with_capacity(ns.len() * etas.len());
    for &n in ns {
        if n == 0 {
            return Err(Error::InvalidConfig("photon number must be ≥ 1".into()));
        }
        for &eta in etas {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Error::InvalidConfig(format!("eta {eta} outside (0, 1]")));
            }
            let k_min = n.saturating_sub(max_lost).max(1);
            let mut best: Option<(SupremacyVerdict, usize)> = None;
            for k in k_min..=n {
                let c_t = classical_time(k, &params.a, params.tau);
                let q_t = lossy_quantum_time_at_eta(n, k, eta, params);
                let v = verdict(c_t, q_t);
                let better = match &best {
                    None => true,
                    Some((cur, _)) => v.qa > cur.qa,
                };
                if better {
                    best = Some((v, k));
                }
            }
            let (v, k_opt) = best.expect("k = n always evaluated");
            cells.push(MapCell {
                n,
                eta,
                qa: v.qa,
                qs1: v.qs1,
                qs2: v.qs2,
                k_opt,
            });
        }
    }
    Ok(cells)
}

/// Least-squares fit of c in t(n) = c·n·2ⁿ.
#[derive(Clone, Copy, Debug)]
pub struct PermFit {
    pub kind: PermKind,
    pub c: f64,
    pub r_squared: f64,
    /// Rows actually fitted (the largest-n half of the table).
    pub points_used: usize,
}

/// Fits the timing constant per entry kind on the largest-n half of the
/// table; small-n rows are excluded since fixed overheads dominate them.
pub fn fit_perm_constant(rows: &[BenchRow]) -> Result<Vec<PermFit>> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("no benchmark rows to fit".into()));
    }
    let mut fits = Vec::new();
    for kind in [PermKind::Complex, PermKind::Real] {
        let mut selected: Vec<&BenchRow> = rows.iter().filter(|r| r.kind == kind).collect();
        if selected.is_empty() {
            continue;
        }
        selected.sort_by_key(|r| r.n);
        let half = selected.len().div_ceil(2);
        let fitted = &selected[selected.len() - half..];

        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for r in fitted {
            let x = r.n as f64 * 2f64.powi(r.n as i32);
            sxx += x * x;
            sxy += x * r.mean_seconds;
        }
        if sxx == 0.0 {
            return Err(Error::DegenerateInput("all predictors vanish".into()));
        }
        let c = sxy / sxx;

        let mean_t = fitted.iter().map(|r| r.mean_seconds).sum::<f64>() / fitted.len() as f64;
        let mut ss_res = 0.0;
        let mut ss_tot = 0.0;
        for r in fitted {
            let x = r.n as f64 * 2f64.powi(r.n as i32);
            ss_res += (r.mean_seconds - c * x).powi(2);
            ss_tot += (r.mean_seconds - mean_t).powi(2);
        }
        let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
        fits.push(PermFit {
            kind,
            c,
            r_squared,
            points_used: fitted.len(),
        });
    }
    Ok(fits)
}

/// The Wang-et-al. near-future parameterization the paper compares against:
/// η_f = 0.74·0.845·0.95, η_0 = 0.99^{1/9}, R = 76/n MHz.
pub fn wang_near_future(mode_law: ModeLaw) -> RuntimeParams {
    RuntimeParams {
        a: TimeScaling::tianhe2(),
        rate: RepetitionRate::PerPhoton(76e6),
        eta_f: 0.74 * 0.845 * 0.95,
        eta_0: 0.99f64.powf(1.0 / 9.0),
        depth_law: DepthLaw::QuadraticM,
        mode_law,
        tau: 100.0,
        cfs_e_approx: false,
    }
}
