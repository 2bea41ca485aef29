//! File formats: unitary JSON, sample-set CSV, benchmark CSV, verification
//! reports, and the advantage-map CSV with its parameter sidecar.
//!
//! The unitary format writes every amplitude with 17 significant decimal
//! digits so read-back is bit-exact. All other numeric output is rounded to
//! 12 significant digits, which neutralizes summation-order jitter between
//! thread counts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::advantage::MapCell;
use crate::error::{Error, Result};
use crate::linalg::{InputSubset, Matrix, OutputPattern};
use crate::permanent::{BenchRow, PermKind};
use crate::samplers::{ChainConfig, SampleSet, SamplerId, SamplerStats};
use crate::scalar::Real;
use crate::Interferometer;

/// Rounds to 12 significant digits (the precision written to CSV files).
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// Fingerprint of raw file bytes.
pub fn fingerprint_bytes(bytes: &[u8]) -> String {
    sha256_hex(bytes)
}

/// 17-significant-digit decimal form; parses back to the identical float.
fn fmt_f64_exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical unitary JSON: `{"m": …, "seed": …, "entries": [[re, im], …]}`
/// row-major, amplitudes at 17 significant digits.
pub fn unitary_json<T: Real>(u: &Matrix<Complex<T>>, seed: Option<u64>) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = write!(s, "  \"m\": {},\n", u.rows());
    if let Some(seed) = seed {
        let _ = write!(s, "  \"seed\": {seed},\n");
    }
    s.push_str("  \"entries\": [\n");
    let total = u.rows() * u.cols();
    for (idx, e) in u.entries().iter().enumerate() {
        let re = e.re.to_f64().unwrap_or(f64::NAN);
        let im = e.im.to_f64().unwrap_or(f64::NAN);
        let _ = write!(
            s,
            "    [{}, {}]{}\n",
            fmt_f64_exact(re),
            fmt_f64_exact(im),
            if idx + 1 < total { "," } else { "" }
        );
    }
    s.push_str("  ]\n}\n");
    s
}

/// Fingerprint of the canonical serialization of a matrix.
pub fn matrix_fingerprint<T: Real>(u: &Matrix<Complex<T>>, seed: Option<u64>) -> String {
    sha256_hex(unitary_json(u, seed).as_bytes())
}

#[derive(Serialize, Deserialize)]
struct UnitaryFile {
    m: usize,
    #[serde(default)]
    seed: Option<u64>,
    entries: Vec<[f64; 2]>,
}

/// Writes the canonical unitary JSON to `path`.
pub fn write_unitary(path: &Path, u: &Interferometer<f64>, seed: Option<u64>) -> Result<()> {
    fs::write(path, unitary_json(u.matrix(), seed))?;
    Ok(())
}

/// Reads a unitary JSON file; the returned interferometer carries the hash
/// of the file bytes as its fingerprint.
pub fn read_unitary(path: &Path) -> Result<(Interferometer<f64>, Option<u64>)> {
    let bytes = fs::read(path)?;
    let parsed: UnitaryFile = serde_json::from_slice(&bytes)?;
    if parsed.entries.len() != parsed.m * parsed.m {
        return Err(Error::Parse(format!(
            "{} entries for m = {}",
            parsed.entries.len(),
            parsed.m
        )));
    }
    let data: Vec<Complex<f64>> = parsed
        .entries
        .iter()
        .map(|[re, im]| Complex::new(*re, *im))
        .collect();
    let matrix = Matrix::from_vec(parsed.m, parsed.m, data)?;
    let u = Interferometer::with_fingerprint(matrix, fingerprint_bytes(&bytes))?;
    Ok((u, parsed.seed))
}

/// Extra provenance lines every CLI-written file embeds.
#[derive(Clone, Debug, Default)]
pub struct FileMeta {
    pub version: Option<String>,
    pub command: Option<String>,
}

impl FileMeta {
    pub fn tool(command: String) -> Self {
        Self {
            version: Some(crate::VERSION.to_string()),
            command: Some(command),
        }
    }

    fn comment_lines(&self) -> String {
        let mut s = String::new();
        if let Some(v) = &self.version {
            let _ = writeln!(s, "# version={v}");
        }
        if let Some(c) = &self.command {
            let _ = writeln!(s, "# command={c}");
        }
        s
    }
}

/// Sample-set CSV. First line is the spec'd header
/// `# n=.. m=.. sampler=.. seed=.. fingerprint=.. tau_burn=.. tau_thin=..`
/// (lossy sets append ` k=..`), optionally followed by further `#` provenance
/// lines, then one line of comma-separated mode indices per pattern;
/// lossy/scattershot lines append ` | input=..`.
pub fn sample_csv(sample: &SampleSet, meta: &FileMeta) -> String {
    let (burn, thin) = match &sample.config {
        Some(c) => (c.tau_burn, c.tau_thin),
        None => (0, 0),
    };
    let mut s = String::new();
    let _ = write!(
        s,
        "# n={} m={} sampler={} seed={} fingerprint={} tau_burn={} tau_thin={}",
        sample.n, sample.m, sample.sampler_id, sample.seed, sample.matrix_fingerprint, burn, thin
    );
    if let Some(k) = sample.k_detected {
        let _ = write!(s, " k={k}");
    }
    s.push('\n');
    s.push_str(&meta.comment_lines());
    for (idx, p) in sample.patterns.iter().enumerate() {
        let modes: Vec<String> = p.modes().iter().map(|m| m.to_string()).collect();
        s.push_str(&modes.join(","));
        if let Some(inputs) = &sample.inputs {
            let cols: Vec<String> = inputs[idx].columns().iter().map(|c| c.to_string()).collect();
            let _ = write!(s, " | input={}", cols.join(","));
        }
        s.push('\n');
    }
    s
}

pub fn write_sample_csv(path: &Path, sample: &SampleSet, meta: &FileMeta) -> Result<()> {
    fs::write(path, sample_csv(sample, meta))?;
    Ok(())
}

fn header_field(fields: &[(&str, &str)], key: &str) -> Result<String> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.to_string())
        .ok_or_else(|| Error::Parse(format!("sample header missing {key}=")))
}

/// Parses a sample-set CSV produced by [`sample_csv`].
pub fn parse_sample_csv(text: &str) -> Result<SampleSet> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty sample file".into()))?;
    let header = header
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("sample header must start with '#'".into()))?;
    let fields: Vec<(&str, &str)> = header
        .split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .collect();
    let n: usize = header_field(&fields, "n")?
        .parse()
        .map_err(|_| Error::Parse("bad n".into()))?;
    let m: usize = header_field(&fields, "m")?
        .parse()
        .map_err(|_| Error::Parse("bad m".into()))?;
    let sampler_id: SamplerId = header_field(&fields, "sampler")?.parse()?;
    let seed: u64 = header_field(&fields, "seed")?
        .parse()
        .map_err(|_| Error::Parse("bad seed".into()))?;
    let fingerprint = header_field(&fields, "fingerprint")?;
    let tau_burn: usize = header_field(&fields, "tau_burn")?
        .parse()
        .map_err(|_| Error::Parse("bad tau_burn".into()))?;
    let tau_thin: usize = header_field(&fields, "tau_thin")?
        .parse()
        .map_err(|_| Error::Parse("bad tau_thin".into()))?;
    let k_detected: Option<usize> = match fields.iter().find(|(k, _)| *k == "k") {
        Some((_, v)) => Some(v.parse().map_err(|_| Error::Parse("bad k".into()))?),
        None => None,
    };

    let mut patterns = Vec::new();
    let mut inputs: Vec<InputSubset> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (modes_part, input_part) = match line.split_once('|') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (line, None),
        };
        let modes: Vec<usize> = modes_part
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad mode in {line:?}"))))
            .collect::<Result<_>>()?;
        patterns.push(OutputPattern::new(modes)?);
        if let Some(inp) = input_part {
            let inp = inp
                .strip_prefix("input=")
                .ok_or_else(|| Error::Parse(format!("bad input clause in {line:?}")))?;
            let cols: Vec<usize> = inp
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad input col in {line:?}"))))
                .collect::<Result<_>>()?;
            inputs.push(InputSubset::new(cols)?);
        }
    }
    if !inputs.is_empty() && inputs.len() != patterns.len() {
        return Err(Error::Parse("input clause on only some pattern lines".into()));
    }

    let config = if tau_burn == 0 && tau_thin == 0 {
        None
    } else {
        Some(ChainConfig {
            tau_burn,
            tau_thin,
            chains: 1,
            seed,
        })
    };
    let sample = SampleSet {
        n,
        m,
        patterns,
        inputs: if inputs.is_empty() { None } else { Some(inputs) },
        sampler_id,
        seed,
        matrix_fingerprint: fingerprint,
        config,
        acceptance_rate: None,
        k_detected,
        stats: SamplerStats::default(),
    };
    sample.validate()?;
    Ok(sample)
}

pub fn read_sample_csv(path: &Path) -> Result<SampleSet> {
    parse_sample_csv(&fs::read_to_string(path)?)
}

/// Benchmark CSV: `n,mean_seconds,stderr_seconds,repeats,kind`.
pub fn bench_csv(rows: &[BenchRow], meta: &FileMeta) -> String {
    let mut s = meta.comment_lines();
    s.push_str("n,mean_seconds,stderr_seconds,repeats,kind\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            round_sig12(r.mean_seconds),
            round_sig12(r.stderr_seconds),
            r.repeats,
            r.kind
        );
    }
    s
}

pub fn write_bench_csv(path: &Path, rows: &[BenchRow], meta: &FileMeta) -> Result<()> {
    fs::write(path, bench_csv(rows, meta))?;
    Ok(())
}

pub fn parse_bench_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("n,") {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("bad bench row {line:?}")));
        }
        rows.push(BenchRow {
            n: parts[0].parse().map_err(|_| Error::Parse("bad n".into()))?,
            mean_seconds: parts[1].parse().map_err(|_| Error::Parse("bad mean".into()))?,
            stderr_seconds: parts[2].parse().map_err(|_| Error::Parse("bad stderr".into()))?,
            repeats: parts[3].parse().map_err(|_| Error::Parse("bad repeats".into()))?,
            kind: parts[4].parse::<PermKind>()?,
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("no benchmark rows".into()));
    }
    Ok(rows)
}

pub fn read_bench_csv(path: &Path) -> Result<Vec<BenchRow>> {
    parse_bench_csv(&fs::read_to_string(path)?)
}

/// Likelihood-ratio curve CSV: `events,p_ind`, one row per prefix starting
/// at zero events (where p_ind = 1/2 by the equal priors).
pub fn lrt_csv(p_ind: &[f64], meta: &FileMeta) -> String {
    let mut s = meta.comment_lines();
    s.push_str("events,p_ind\n");
    for (e, p) in p_ind.iter().enumerate() {
        let _ = writeln!(s, "{e},{}", round_sig12(*p));
    }
    s
}

pub fn write_lrt_csv(path: &Path, p_ind: &[f64], meta: &FileMeta) -> Result<()> {
    fs::write(path, lrt_csv(p_ind, meta))?;
    Ok(())
}

/// Advantage map CSV: `n,eta,qa,qs1,qs2,k_opt`.
pub fn advantage_csv(cells: &[MapCell], meta: &FileMeta) -> String {
    let mut s = meta.comment_lines();
    s.push_str("n,eta,qa,qs1,qs2,k_opt\n");
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            c.n,
            round_sig12(c.eta),
            round_sig12(c.qa),
            c.qs1,
            c.qs2,
            c.k_opt
        );
    }
    s
}

pub fn write_advantage_csv(path: &Path, cells: &[MapCell], meta: &FileMeta) -> Result<()> {
    fs::write(path, advantage_csv(cells, meta))?;
    Ok(())
}

/// Verification report JSON.
#[derive(Serialize, Deserialize, Debug)]
pub struct Report {
    pub test: String,
    pub inputs: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_ind_curve: Option<Vec<f64>>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use proptest::prelude::*;

    #[test]
    fn unitary_roundtrip_exact() {
        let dir = std::env::temp_dir().join(format!("permsamp-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("u.json");
        let u = haar_unitary::<f64>(9, 1).unwrap();
        write_unitary(&path, &u, Some(1)).unwrap();
        let (back, seed) = read_unitary(&path).unwrap();
        assert_eq!(seed, Some(1));
        assert_eq!(back.matrix(), u.matrix());
        // File bytes are the canonical serialization, so fingerprints agree.
        assert_eq!(back.fingerprint(), u.fingerprint());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn round_sig12_examples() {
        assert_eq!(round_sig12(0.0), 0.0);
        assert_eq!(round_sig12(1.0), 1.0);
        let x = 0.123456789012345678;
        assert_eq!(round_sig12(x), 0.123456789012);
        assert!(round_sig12(f64::INFINITY).is_infinite());
    }

    proptest! {
        #[test]
        fn prop_exact_format_roundtrips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_f64_exact(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
