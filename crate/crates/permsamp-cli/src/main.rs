//! Command-line front end for the boson-sampling toolkit.
//!
//! Subcommands: `haar`, `sample`, `sample-lossy`, `sample-scattershot`,
//! `verify ks|lrt|autocorr`, `bench permanent`, `fit`, `advantage map|point`.
//! All randomness flows from `--seed`; every output file embeds the tool
//! version, the full command line, the seed, and input fingerprints.
//! Exit codes: 0 success, 2 usage error, 1 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use permsamp::advantage::{
    self, DepthLaw, ModeLaw, RepetitionRate, RuntimeParams, TimeScaling,
};
use permsamp::io::{self, FileMeta, Report};
use permsamp::samplers::{
    estimate_mu, sample_brute_force, sample_distinguishable, sample_mis, sample_mis_lossy,
    sample_mis_scattershot, sample_rejection, ChainConfig, LossConfig, SampleSet,
};
use permsamp::verify::{
    autocorrelation, ks_bootstrap, likelihood_ratio_curve, log_weight_series, AltHypothesis,
    Normalization,
};
use permsamp::{haar_unitary, Unitary};

#[derive(Parser)]
#[command(
    name = "permsamp",
    version,
    about = "Classical boson sampling: samplers, verification, runtime models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Haar-random interferometer and store it as JSON.
    Haar {
        /// Mode count m.
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        seed: u64,
        /// Output unitary JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a sample of detection patterns.
    Sample(SampleArgs),
    /// Lossy variant: n photons prepared, k survive to the circuit.
    SampleLossy(SampleLossyArgs),
    /// Scattershot variant: uniformly random input modes per pattern.
    SampleScattershot(SampleScattershotArgs),
    /// Statistical certification of sample files.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Performance measurements.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Fit the permanent-time constant c of t(n) = c·n·2ⁿ.
    Fit {
        /// Benchmark CSV produced by `bench permanent`.
        #[arg(long)]
        bench: PathBuf,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Quantum-vs-classical runtime models.
    #[command(subcommand)]
    Advantage(AdvantageCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Rejection,
    Mis,
    Distinguishable,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Photon count n.
    #[arg(long)]
    photons: usize,
    /// Expected mode count (validated against the unitary file).
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    count: usize,
    /// MIS burn-in τ_burn.
    #[arg(long, default_value_t = 100)]
    burn: usize,
    /// MIS thinning interval τ_thin.
    #[arg(long, default_value_t = 100)]
    thin: usize,
    /// Independent MIS chains.
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long)]
    seed: u64,
    /// Unitary JSON path.
    #[arg(long)]
    unitary: PathBuf,
    /// Output sample CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Hill-climbing restarts for the rejection envelope (default 4m).
    #[arg(long)]
    restarts: Option<usize>,
    /// Brute-force guard on C(m,n).
    #[arg(long, default_value_t = permsamp::samplers::DEFAULT_MAX_PATTERNS)]
    max_patterns: u64,
}

#[derive(Args)]
struct SampleLossyArgs {
    /// Photons prepared at the input.
    #[arg(long)]
    photons: usize,
    /// Photons surviving to the circuit.
    #[arg(long)]
    detected: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 100)]
    burn: usize,
    /// Worker parallelism (per-pattern chains are fresh either way).
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    unitary: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleScattershotArgs {
    #[arg(long)]
    photons: usize,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 100)]
    burn: usize,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    unitary: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Bootstrap two-sample KS test on −log(|Per(A_S)|²).
    Ks {
        /// First sample CSV.
        #[arg(long)]
        sample: PathBuf,
        /// Second sample CSV.
        #[arg(long)]
        sample_b: PathBuf,
        #[arg(long)]
        unitary: PathBuf,
        /// Bootstrap resamples.
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Likelihood-ratio curve: boson vs distinguishable hypothesis.
    Lrt {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        unitary: PathBuf,
        /// Curve CSV path (`events,p_ind`).
        #[arg(long)]
        out: PathBuf,
        /// Optional report JSON path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Use instance-exact normalizations (tiny instances only).
        #[arg(long)]
        exact_normalization: bool,
        /// Distinguishable routing draws behind the approximate r_x
        /// normalization.
        #[arg(long, default_value_t = 1_000_000)]
        zr_draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Autocorrelation of −log(|Per(A_S)|²) along the sample order.
    Autocorr {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_lag: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Time the permanent kernel on fresh random matrices.
    Permanent {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeLawArg {
    /// m = 4n.
    Linear,
    /// m = n².
    Quadratic,
}

impl From<ModeLawArg> for ModeLaw {
    fn from(v: ModeLawArg) -> Self {
        match v {
            ModeLawArg::Linear => ModeLaw::Linear4N,
            ModeLawArg::Quadratic => ModeLaw::QuadraticN2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DepthLawArg {
    /// d = 4n.
    Linear,
    /// d = m.
    Modes,
}

impl From<DepthLawArg> for DepthLaw {
    fn from(v: DepthLawArg) -> Self {
        match v {
            DepthLawArg::Linear => DepthLaw::Linear4N,
            DepthLawArg::Modes => DepthLaw::QuadraticM,
        }
    }
}

#[derive(Args)]
struct RuntimeArgs {
    /// Constant classical time scaling a in seconds.
    #[arg(long, conflicts_with = "a_per_photon")]
    a_const: Option<f64>,
    /// Per-photon classical time scaling: a(n) = c·n (default 3e-15,
    /// the supercomputer constant).
    #[arg(long)]
    a_per_photon: Option<f64>,
    /// Constant repetition rate in Hz.
    #[arg(long, conflicts_with = "rate_per_photon_hz")]
    rate_hz: Option<f64>,
    /// Per-photon rate: R(n) = r/n in Hz (e.g. 76e6).
    #[arg(long)]
    rate_per_photon_hz: Option<f64>,
    /// Fixed transmission η_f.
    #[arg(long, default_value_t = 1.0)]
    eta_f: f64,
    /// Per-depth-unit transmission η_0.
    #[arg(long, default_value_t = 1.0)]
    eta_0: f64,
    #[arg(long, value_enum, default_value = "quadratic")]
    mode_law: ModeLawArg,
    #[arg(long, value_enum, default_value = "modes")]
    depth_law: DepthLawArg,
    /// Permanent pairs per emitted MIS sample.
    #[arg(long, default_value_t = 100.0)]
    tau: f64,
    /// Use the main-text 1/e collision-free approximation instead of the
    /// exact C(m,n)/C(m+n−1,n) (quadratic mode law only).
    #[arg(long)]
    e_approx: bool,
}

impl RuntimeArgs {
    fn params(&self) -> RuntimeParams {
        let a = match (self.a_const, self.a_per_photon) {
            (Some(c), _) => TimeScaling::Constant(c),
            (None, Some(c)) => TimeScaling::PerPhoton(c),
            (None, None) => TimeScaling::tianhe2(),
        };
        let rate = match (self.rate_hz, self.rate_per_photon_hz) {
            (Some(r), _) => RepetitionRate::Constant(r),
            (None, Some(r)) => RepetitionRate::PerPhoton(r),
            (None, None) => RepetitionRate::Constant(10e9),
        };
        RuntimeParams {
            a,
            rate,
            eta_f: self.eta_f,
            eta_0: self.eta_0,
            depth_law: self.depth_law.into(),
            mode_law: self.mode_law.into(),
            tau: self.tau,
            cfs_e_approx: self.e_approx,
        }
    }

    fn sidecar(&self) -> serde_json::Value {
        let p = self.params();
        serde_json::json!({
            "a": match p.a {
                TimeScaling::Constant(c) => serde_json::json!({"constant_seconds": c}),
                TimeScaling::PerPhoton(c) => serde_json::json!({"per_photon_seconds": c}),
            },
            "rate": match p.rate {
                RepetitionRate::Constant(r) => serde_json::json!({"constant_hz": r}),
                RepetitionRate::PerPhoton(r) => serde_json::json!({"per_photon_hz": r}),
            },
            "eta_f": p.eta_f,
            "eta_0": p.eta_0,
            "mode_law": match p.mode_law { ModeLaw::Linear4N => "m=4n", ModeLaw::QuadraticN2 => "m=n^2" },
            "depth_law": match p.depth_law { DepthLaw::Linear4N => "d=4n", DepthLaw::QuadraticM => "d=m" },
            "tau": p.tau,
            "cfs_e_approx": p.cfs_e_approx,
        })
    }
}

#[derive(Subcommand)]
enum AdvantageCommand {
    /// Dense QA grid over photon number and transmission.
    Map {
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[arg(long, default_value_t = 5)]
        n_step: usize,
        #[arg(long, default_value_t = 0.05)]
        eta_min: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 0.05)]
        eta_step: f64,
        /// Allow up to this many lost photons, optimized to maximize QA.
        #[arg(long, default_value_t = 0)]
        lost: usize,
        #[command(flatten)]
        runtime: RuntimeArgs,
        /// Output CSV path; a parameter sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// QA and the supremacy flags at a single (n, η).
    Point {
        #[arg(long)]
        photons: usize,
        /// Per-photon transmission; derived from η_f·η_0^d when omitted.
        #[arg(long)]
        eta: Option<f64>,
        #[command(flatten)]
        runtime: RuntimeArgs,
        /// Optional report JSON path (defaults to stdout only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn command_line() -> String {
    let args: Vec<String> = std::env::args().collect();
    args.join(" ")
}

fn meta() -> FileMeta {
    FileMeta::tool(command_line())
}

fn load_unitary(path: &PathBuf, expected_modes: Option<usize>) -> Result<Unitary, permsamp::Error> {
    let (u, _) = io::read_unitary(path)?;
    if let Some(m) = expected_modes {
        if m != u.m() {
            return Err(permsamp::Error::InvalidDimension(format!(
                "unitary file has m = {}, command line says {m}",
                u.m()
            )));
        }
    }
    Ok(u)
}

fn run(cli: Cli) -> Result<(), permsamp::Error> {
    match cli.command {
        Command::Haar { modes, seed, out } => {
            let u = haar_unitary::<f64>(modes, seed)?;
            io::write_unitary(&out, &u, Some(seed))?;
            eprintln!(
                "wrote {}x{} unitary (seed {seed}, fingerprint {}) to {}",
                modes,
                modes,
                u.fingerprint(),
                out.display()
            );
        }
        Command::Sample(args) => {
            let u = load_unitary(&args.unitary, args.modes)?;
            let sample = run_sampler(&u, &args)?;
            io::write_sample_csv(&args.out, &sample, &meta())?;
            if let Some(rate) = sample.acceptance_rate {
                eprintln!("acceptance rate {rate:.4}");
            }
            eprintln!("wrote {} patterns to {}", sample.len(), args.out.display());
        }
        Command::SampleLossy(args) => {
            let u = load_unitary(&args.unitary, None)?;
            let loss = LossConfig {
                n_prepared: args.photons,
                k_detected: args.detected,
            };
            let config = ChainConfig {
                tau_burn: args.burn,
                tau_thin: 1,
                chains: args.chains,
                seed: args.seed,
            };
            let sample = sample_mis_lossy(&u, &loss, args.count, &config)?;
            io::write_sample_csv(&args.out, &sample, &meta())?;
            eprintln!("wrote {} patterns to {}", sample.len(), args.out.display());
        }
        Command::SampleScattershot(args) => {
            let u = load_unitary(&args.unitary, None)?;
            let config = ChainConfig {
                tau_burn: args.burn,
                tau_thin: 1,
                chains: args.chains,
                seed: args.seed,
            };
            let sample = sample_mis_scattershot(&u, args.photons, args.count, &config)?;
            io::write_sample_csv(&args.out, &sample, &meta())?;
            eprintln!("wrote {} patterns to {}", sample.len(), args.out.display());
        }
        Command::Verify(cmd) => run_verify(cmd)?,
        Command::Bench(BenchCommand::Permanent {
            n_min,
            n_max,
            repeats,
            seed,
            out,
        }) => {
            let rows = permsamp::permanent::bench_permanent(n_min, n_max, repeats, seed)?;
            io::write_bench_csv(&out, &rows, &meta())?;
            eprintln!("wrote {} timing rows to {}", rows.len(), out.display());
        }
        Command::Fit { bench, out } => {
            let rows = io::read_bench_csv(&bench)?;
            let fits = advantage::fit_perm_constant(&rows)?;
            let fits_json: Vec<serde_json::Value> = fits
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "kind": f.kind.to_string(),
                        "c": io::round_sig12(f.c),
                        "r_squared": io::round_sig12(f.r_squared),
                        "points_used": f.points_used,
                    })
                })
                .collect();
            let report = Report {
                test: "fit_perm_constant".into(),
                inputs: serde_json::json!({"bench": bench.display().to_string()}),
                statistic: None,
                p_value: None,
                p_ind_curve: None,
                seed: 0,
                reps: None,
                details: Some(serde_json::json!({"fits": fits_json})),
                version: Some(permsamp::VERSION.into()),
                command: Some(command_line()),
            };
            io::write_report(&out, &report)?;
            for f in &fits {
                eprintln!("{}: c = {:.4e}, R² = {:.6}", f.kind, f.c, f.r_squared);
            }
        }
        Command::Advantage(cmd) => run_advantage(cmd)?,
    }
    Ok(())
}

fn run_sampler(u: &Unitary, args: &SampleArgs) -> Result<SampleSet, permsamp::Error> {
    match args.method {
        Method::Brute => {
            sample_brute_force(u, args.photons, args.count, args.seed, args.max_patterns)
        }
        Method::Distinguishable => sample_distinguishable(u, args.photons, args.count, args.seed),
        Method::Rejection => {
            let restarts = args.restarts.unwrap_or(4 * u.m());
            let est = estimate_mu(u, args.photons, restarts, args.seed)?;
            eprintln!(
                "envelope μ = {:.6e} from {} permanent evaluations",
                est.mu, est.complex_perms
            );
            sample_rejection(u, args.photons, args.count, est.mu, args.seed)
        }
        Method::Mis => {
            let config = ChainConfig {
                tau_burn: args.burn,
                tau_thin: args.thin,
                chains: args.chains,
                seed: args.seed,
            };
            sample_mis(u, args.photons, args.count, &config)
        }
    }
}

fn run_verify(cmd: VerifyCommand) -> Result<(), permsamp::Error> {
    match cmd {
        VerifyCommand::Ks {
            sample,
            sample_b,
            unitary,
            reps,
            seed,
            out,
        } => {
            let u = load_unitary(&unitary, None)?;
            let sa = io::read_sample_csv(&sample)?;
            let sb = io::read_sample_csv(&sample_b)?;
            let la = log_weight_series(&u, &sa)?;
            let lb = log_weight_series(&u, &sb)?;
            let ks = ks_bootstrap(&la, &lb, reps, seed)?;
            let report = Report {
                test: "ks_bootstrap".into(),
                inputs: serde_json::json!({
                    "sample_a": sample.display().to_string(),
                    "sample_b": sample_b.display().to_string(),
                    "unitary_fingerprint": u.fingerprint(),
                }),
                statistic: Some(io::round_sig12(ks.statistic)),
                p_value: Some(io::round_sig12(ks.p_value)),
                p_ind_curve: None,
                seed,
                reps: Some(ks.bootstrap_reps),
                details: None,
                version: Some(permsamp::VERSION.into()),
                command: Some(command_line()),
            };
            io::write_report(&out, &report)?;
            eprintln!("KS statistic {:.6}, p = {}", ks.statistic, ks.p_value);
        }
        VerifyCommand::Lrt {
            sample,
            unitary,
            out,
            report,
            exact_normalization,
            zr_draws,
            seed,
        } => {
            let u = load_unitary(&unitary, None)?;
            let s = io::read_sample_csv(&sample)?;
            let normalization = if exact_normalization {
                Normalization::Exact {
                    max_patterns: permsamp::samplers::DEFAULT_MAX_PATTERNS,
                }
            } else {
                Normalization::HaarAverage { zr_draws }
            };
            let curve =
                likelihood_ratio_curve(&u, &s, AltHypothesis::Distinguishable, normalization, seed)?;
            io::write_lrt_csv(&out, &curve.p_ind, &meta())?;
            if let Some(report_path) = report {
                let rounded: Vec<f64> = curve.p_ind.iter().map(|&p| io::round_sig12(p)).collect();
                let rep = Report {
                    test: "likelihood_ratio".into(),
                    inputs: serde_json::json!({
                        "sample": sample.display().to_string(),
                        "unitary_fingerprint": u.fingerprint(),
                        "normalization": if exact_normalization { "exact" } else { "haar_average" },
                    }),
                    statistic: curve.p_ind.last().map(|&p| io::round_sig12(p)),
                    p_value: None,
                    p_ind_curve: Some(rounded),
                    seed,
                    reps: None,
                    details: Some(serde_json::json!({
                        "clamped_events": curve.clamped_events,
                        "z_q": curve.z_q,
                        "z_r": curve.z_r,
                    })),
                    version: Some(permsamp::VERSION.into()),
                    command: Some(command_line()),
                };
                io::write_report(&report_path, &rep)?;
            }
            eprintln!(
                "P_ind after {} events: {}",
                curve.p_ind.len() - 1,
                curve.p_ind.last().unwrap()
            );
        }
        VerifyCommand::Autocorr {
            sample,
            unitary,
            max_lag,
            out,
        } => {
            let u = load_unitary(&unitary, None)?;
            let s = io::read_sample_csv(&sample)?;
            let series = log_weight_series(&u, &s)?;
            let ac = autocorrelation(&series, max_lag)?;
            let max_abs = ac.acf.iter().fold(0.0f64, |a, r| a.max(r.abs()));
            let report = Report {
                test: "autocorrelation".into(),
                inputs: serde_json::json!({
                    "sample": sample.display().to_string(),
                    "unitary_fingerprint": u.fingerprint(),
                    "max_lag": max_lag,
                }),
                statistic: Some(io::round_sig12(max_abs)),
                p_value: None,
                p_ind_curve: None,
                seed: s.seed,
                reps: None,
                details: Some(serde_json::json!({
                    "band": io::round_sig12(ac.band),
                    "inside_fraction": ac.inside_fraction(),
                    "acf": ac.acf.iter().map(|&r| io::round_sig12(r)).collect::<Vec<_>>(),
                })),
                version: Some(permsamp::VERSION.into()),
                command: Some(command_line()),
            };
            io::write_report(&out, &report)?;
            eprintln!(
                "max |acf| over lags 1..{max_lag}: {max_abs:.4} (band ±{:.4}, {:.1}% inside)",
                ac.band,
                100.0 * ac.inside_fraction()
            );
        }
    }
    Ok(())
}

fn run_advantage(cmd: AdvantageCommand) -> Result<(), permsamp::Error> {
    match cmd {
        AdvantageCommand::Map {
            n_min,
            n_max,
            n_step,
            eta_min,
            eta_max,
            eta_step,
            lost,
            runtime,
            out,
        } => {
            if n_step == 0 || eta_step <= 0.0 {
                return Err(permsamp::Error::InvalidConfig(
                    "grid steps must be positive".into(),
                ));
            }
            let params = runtime.params();
            let ns: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
            let mut etas = Vec::new();
            let mut eta = eta_min;
            while eta <= eta_max + 1e-12 {
                etas.push(eta.min(1.0));
                eta += eta_step;
            }
            let cells = advantage::advantage_map(&ns, &etas, &params, lost)?;
            io::write_advantage_csv(&out, &cells, &meta())?;
            let sidecar_path = out.with_extension("params.json");
            let mut sidecar = runtime.sidecar();
            sidecar["lost"] = serde_json::json!(lost);
            sidecar["command"] = serde_json::json!(command_line());
            sidecar["version"] = serde_json::json!(permsamp::VERSION);
            std::fs::write(&sidecar_path, format!("{:#}\n", sidecar))?;
            eprintln!(
                "wrote {} grid cells to {} (params in {})",
                cells.len(),
                out.display(),
                sidecar_path.display()
            );
        }
        AdvantageCommand::Point {
            photons,
            eta,
            runtime,
            out,
        } => {
            let params = runtime.params();
            params.validate()?;
            let (verdict, eta_used) = match eta {
                Some(e) => (advantage::quantum_advantage_at_eta(photons, e, &params), e),
                None => (
                    advantage::quantum_advantage(photons, &params),
                    advantage::transmission(photons, &params),
                ),
            };
            let c_t = advantage::classical_time(photons, &params.a, params.tau);
            let q_t = advantage::quantum_time_at_eta(photons, eta_used, &params);
            println!(
                "n={photons} eta={} c_t={} q_t={} qa={} qs1={} qs2={}",
                io::round_sig12(eta_used),
                io::round_sig12(c_t),
                io::round_sig12(q_t),
                io::round_sig12(verdict.qa),
                verdict.qs1,
                verdict.qs2
            );
            if let Some(path) = out {
                let report = Report {
                    test: "quantum_advantage".into(),
                    inputs: runtime.sidecar(),
                    statistic: Some(io::round_sig12(verdict.qa)),
                    p_value: None,
                    p_ind_curve: None,
                    seed: 0,
                    reps: None,
                    details: Some(serde_json::json!({
                        "n": photons,
                        "eta": io::round_sig12(eta_used),
                        "c_t_seconds": io::round_sig12(c_t),
                        "q_t_seconds": io::round_sig12(q_t),
                        "qs1": verdict.qs1,
                        "qs2": verdict.qs2,
                    })),
                    version: Some(permsamp::VERSION.into()),
                    command: Some(command_line()),
                };
                io::write_report(&path, &report)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
