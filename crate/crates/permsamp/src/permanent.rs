//! Exact matrix permanents.
//!
//! Three independent routes: direct permutation enumeration (factorial-time
//! oracle), Gray-code Ryser (the production O(n·2ⁿ) kernel, block-parallel),
//! and Balasubramanian–Bax/Franklin–Glynn as a second witness for numerical
//! stability. All are generic over real and complex entries.

use std::time::Instant;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Real, Scalar};

/// Cap for the factorial-time oracle.
pub const NAIVE_MAX: usize = 10;
/// Subset bitmask width cap for Ryser/Glynn.
pub const RYSER_MAX: usize = 64;

/// Subset counters per summation window. Row sums are re-derived from
/// scratch at every window boundary and windows reduce pairwise in index
/// order, so the result is bit-identical for every thread count (threads
/// claim whole windows).
const WINDOW: u64 = 4096;

fn check_square<S: Scalar>(a: &Matrix<S>) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Err(Error::InvalidDimension("empty matrix has no permanent here".into()));
    }
    Ok(a.rows())
}

/// Σ_σ Π_i a[i][σ(i)] by direct enumeration (Heap's algorithm); n ≤ 10.
pub fn per_naive<S: Scalar>(a: &Matrix<S>) -> Result<S> {
    let n = check_square(a)?;
    if n > NAIVE_MAX {
        return Err(Error::SizeLimit(format!(
            "per_naive limited to n ≤ {NAIVE_MAX}, got {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let product = |p: &[usize]| -> S {
        let mut acc = S::one();
        for (i, &j) in p.iter().enumerate() {
            acc = acc * a.get(i, j);
        }
        acc
    };
    let mut sum = product(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sum += product(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(sum)
}

/// Ryser's formula with Gray-code subset ordering, O(n·2ⁿ).
///
/// The 2ⁿ−1 subset counters are cut into fixed windows of [`WINDOW`]; each
/// window re-derives its starting row sums in O(n²) and threads claim whole
/// windows, so every arithmetic operation is independent of the thread
/// count: results are bit-identical however the work is split.
pub fn per_ryser<S: Scalar>(a: &Matrix<S>) -> Result<S> {
    per_ryser_threads(a, crate::thread_count())
}

/// [`per_ryser`] with an explicit thread count.
pub fn per_ryser_threads<S: Scalar>(a: &Matrix<S>, threads: usize) -> Result<S> {
    let n = check_square(a)?;
    if n > RYSER_MAX {
        return Err(Error::SizeLimit(format!(
            "per_ryser limited to n ≤ {RYSER_MAX}, got {n}"
        )));
    }
    let last: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let windows = last.div_ceil(WINDOW);

    let window_sum = |w: u64| -> S {
        let start = 1 + w * WINDOW;
        let end = last.min((w + 1) * WINDOW);
        ryser_window(a, start, end)
    };

    let threads = threads.max(1).min(usize::try_from(windows).unwrap_or(usize::MAX));
    let mut partials: Vec<S> = if threads == 1 || windows == 1 {
        (0..windows).map(window_sum).collect()
    } else {
        let mut partials = vec![S::zero(); windows as usize];
        let window_sum = &window_sum;
        let chunk = (windows as usize).div_ceil(threads);
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(threads);
            for (idx, slot) in partials.chunks_mut(chunk).enumerate() {
                handles.push(scope.spawn(move || {
                    for (off, s) in slot.iter_mut().enumerate() {
                        *s = window_sum((idx * chunk + off) as u64);
                    }
                }));
            }
            for h in handles {
                h.join().expect("ryser worker panicked");
            }
        });
        partials
    };

    // Pairwise reduction in window order: deterministic and low round-off.
    while partials.len() > 1 {
        let half = partials.len().div_ceil(2);
        for i in 0..partials.len() / 2 {
            partials[i] = partials[2 * i] + partials[2 * i + 1];
        }
        if partials.len() % 2 == 1 {
            partials[half - 1] = partials[partials.len() - 1];
        }
        partials.truncate(half);
    }
    let sum = partials[0];

    // (−1)ⁿ prefactor of the inclusion–exclusion.
    Ok(if n % 2 == 0 { sum } else { -sum })
}

/// Ryser partial sum over subset counters t ∈ [start, end] (inclusive),
/// where subset(t) = t ^ (t >> 1). Terms carry their (−1)^|subset| sign.
fn ryser_window<S: Scalar>(a: &Matrix<S>, start: u64, end: u64) -> S {
    let n = a.rows();
    let mut rowsum = vec![S::zero(); n];
    let g0 = (start - 1) ^ ((start - 1) >> 1);
    for j in 0..n {
        if g0 >> j & 1 == 1 {
            for (i, rs) in rowsum.iter_mut().enumerate() {
                *rs += a.get(i, j);
            }
        }
    }
    let mut odd = g0.count_ones() % 2 == 1;

    let mut acc = S::zero();
    let mut gray = g0;
    let mut t = start;
    loop {
        let j = t.trailing_zeros() as usize;
        let bit = 1u64 << j;
        gray ^= bit;
        if gray & bit != 0 {
            for (i, rs) in rowsum.iter_mut().enumerate() {
                *rs += a.get(i, j);
            }
        } else {
            for (i, rs) in rowsum.iter_mut().enumerate() {
                *rs -= a.get(i, j);
            }
        }
        odd = !odd;

        let mut prod = S::one();
        for rs in &rowsum {
            prod = prod * *rs;
        }
        if odd {
            acc -= prod;
        } else {
            acc += prod;
        }

        if t == end {
            break;
        }
        t += 1;
    }
    acc
}

/// Balasubramanian–Bax/Franklin–Glynn permanent, O(n·2ⁿ⁻¹); an independent
/// ±1-vector formula used to cross-check Ryser.
pub fn per_glynn<S: Scalar>(a: &Matrix<S>) -> Result<S> {
    let n = check_square(a)?;
    if n > RYSER_MAX {
        return Err(Error::SizeLimit(format!(
            "per_glynn limited to n ≤ {RYSER_MAX}, got {n}"
        )));
    }
    // δ over {±1}ⁿ with δ_0 fixed at +1; Gray code over the remaining n−1.
    let mut colsum: Vec<S> = (0..n)
        .map(|j| {
            let mut s = S::zero();
            for i in 0..n {
                s += a.get(i, j);
            }
            s
        })
        .collect();

    let prod = |cs: &[S]| -> S {
        let mut p = S::one();
        for c in cs {
            p = p * *c;
        }
        p
    };

    let mut total = prod(&colsum);
    if n > 1 {
        let steps: u64 = 1u64 << (n - 1);
        let mut gray: u64 = 0;
        let mut odd = false;
        let mut local = S::zero();
        let mut since_fold = 0u64;
        for t in 1..steps {
            let k = t.trailing_zeros() as usize;
            let bit = 1u64 << k;
            gray ^= bit;
            let row = k + 1;
            // δ_row flips: column sums move by ∓2·a[row][j].
            if gray & bit != 0 {
                for (j, cs) in colsum.iter_mut().enumerate() {
                    let d = a.get(row, j);
                    *cs -= d + d;
                }
            } else {
                for (j, cs) in colsum.iter_mut().enumerate() {
                    let d = a.get(row, j);
                    *cs += d + d;
                }
            }
            odd = !odd;
            let p = prod(&colsum);
            if odd {
                local -= p;
            } else {
                local += p;
            }
            since_fold += 1;
            if since_fold == WINDOW {
                total += local;
                local = S::zero();
                since_fold = 0;
            }
        }
        total += local;
    }
    let scale = <S::Real as Real>::from_f64_exact(0.5f64.powi(n as i32 - 1));
    Ok(total.scale(scale))
}

/// Which entry field a benchmark row timed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermKind {
    Complex,
    Real,
}

impl std::fmt::Display for PermKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PermKind::Complex => "complex",
            PermKind::Real => "real",
        })
    }
}

impl std::str::FromStr for PermKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(PermKind::Complex),
            "real" => Ok(PermKind::Real),
            other => Err(Error::Parse(format!("unknown permanent kind {other:?}"))),
        }
    }
}

/// One row of a permanent timing table.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub mean_seconds: f64,
    pub stderr_seconds: f64,
    pub repeats: usize,
    pub kind: PermKind,
}

/// Wall-clock permanent timings over fresh random matrices, per size and
/// entry kind, feeding the t(n) = c·n·2ⁿ calibration fit.
pub fn bench_permanent(
    n_min: usize,
    n_max: usize,
    repeats: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if n_min < 2 || n_min > n_max || n_max > 30 {
        return Err(Error::InvalidConfig(format!(
            "bench range must satisfy 2 ≤ n_min ≤ n_max ≤ 30, got {n_min}..={n_max}"
        )));
    }
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        for kind in [PermKind::Complex, PermKind::Real] {
            let mut times = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                match kind {
                    PermKind::Complex => {
                        let a = Matrix::from_fn(n, n, |_, _| {
                            Complex::new(f64::standard_normal(&mut rng), f64::standard_normal(&mut rng))
                        });
                        let t0 = Instant::now();
                        std::hint::black_box(per_ryser(&a)?);
                        times.push(t0.elapsed().as_secs_f64());
                    }
                    PermKind::Real => {
                        let a =
                            Matrix::from_fn(n, n, |_, _| f64::standard_normal(&mut rng));
                        let t0 = Instant::now();
                        std::hint::black_box(per_ryser(&a)?);
                        times.push(t0.elapsed().as_secs_f64());
                    }
                }
            }
            let mean = times.iter().sum::<f64>() / repeats as f64;
            let stderr = if repeats > 1 {
                let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>()
                    / (repeats - 1) as f64;
                (var / repeats as f64).sqrt()
            } else {
                0.0
            };
            rows.push(BenchRow {
                n,
                mean_seconds: mean,
                stderr_seconds: stderr,
                repeats,
                kind,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use crate::{CMatrix, Cplx, RMatrix};
    use rand::Rng;

    fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        Matrix::from_fn(n, n, |_, _| {
            Cplx::new(f64::standard_normal(rng), f64::standard_normal(rng))
        })
    }

    fn rel_err(a: Cplx, b: Cplx) -> f64 {
        let scale = a.norm().max(b.norm()).max(1e-300);
        (a - b).norm() / scale
    }

    #[test]
    fn naive_trivials() {
        let id: CMatrix = Matrix::identity(3);
        assert_eq!(per_naive(&id).unwrap(), Cplx::new(1.0, 0.0));

        let ones: CMatrix = Matrix::from_fn(4, 4, |_, _| Cplx::new(1.0, 0.0));
        assert_eq!(per_naive(&ones).unwrap(), Cplx::new(24.0, 0.0));

        let m: RMatrix = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(per_naive(&m).unwrap(), 10.0);
    }

    #[test]
    fn naive_size_limit() {
        let big: RMatrix = Matrix::zeros(11, 11);
        assert!(matches!(per_naive(&big), Err(Error::SizeLimit(_))));
        let rect: RMatrix = Matrix::zeros(2, 3);
        assert!(matches!(per_naive(&rect), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn ryser_identity_and_ones() {
        for n in 1..=8 {
            let id: CMatrix = Matrix::identity(n);
            assert!(rel_err(per_ryser(&id).unwrap(), Cplx::new(1.0, 0.0)) < 1e-12);
        }
        // Per(J_n) = n!. The all-ones matrix is the worst case for Ryser's
        // alternating sum (terms up to n^n against a result of n!): the
        // f64 term rounding floors its accuracy near 1e-7 by n = 20, which
        // is why Glynn is kept as the stability witness. See the Glynn test
        // for the tight factorial check.
        let mut factorial = 1.0f64;
        for n in 1..=20usize {
            factorial *= n as f64;
            let ones: CMatrix = Matrix::from_fn(n, n, |_, _| Cplx::new(1.0, 0.0));
            let p = per_ryser(&ones).unwrap();
            let tol = if n <= 12 { 1e-10 } else { 1e-6 };
            assert!(
                rel_err(p, Cplx::new(factorial, 0.0)) < tol,
                "n={n}: {p} vs {factorial}"
            );
        }
    }

    #[test]
    fn glynn_factorials_to_twenty() {
        let mut factorial = 1.0f64;
        for n in 1..=20usize {
            factorial *= n as f64;
            let ones: CMatrix = Matrix::from_fn(n, n, |_, _| Cplx::new(1.0, 0.0));
            let p = per_glynn(&ones).unwrap();
            assert!(
                rel_err(p, Cplx::new(factorial, 0.0)) < 1e-10,
                "n={n}: {p} vs {factorial}"
            );
        }
    }

    #[test]
    fn ryser_matches_naive_on_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 2..=7 {
            for _ in 0..20 {
                let a = random_complex(n, &mut rng);
                let expected = per_naive(&a).unwrap();
                let got = per_ryser(&a).unwrap();
                assert!(rel_err(expected, got) < 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn ryser_real_matches_naive_on_complexified() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a: RMatrix = Matrix::from_fn(7, 7, |_, _| rng.random::<f64>());
        let complexified: CMatrix =
            Matrix::from_fn(7, 7, |i, j| Cplx::new(a.get(i, j), 0.0));
        let expected = per_naive(&complexified).unwrap();
        let got = per_ryser(&a).unwrap();
        assert!((expected.re - got).abs() / expected.re.abs() < 1e-10);
        assert!(expected.im.abs() < 1e-12);
    }

    #[test]
    fn ryser_real_closed_forms() {
        let id2: RMatrix = Matrix::identity(2);
        assert_eq!(per_ryser(&id2).unwrap(), 1.0);
        let q: RMatrix = Matrix::from_fn(2, 2, |_, _| 0.25);
        assert!((per_ryser(&q).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn glynn_trivials_and_cross_check() {
        let id: CMatrix = Matrix::identity(4);
        assert!(rel_err(per_glynn(&id).unwrap(), Cplx::new(1.0, 0.0)) < 1e-12);

        let swap: CMatrix =
            Matrix::from_vec(2, 2, vec![
                Cplx::new(0.0, 0.0),
                Cplx::new(1.0, 0.0),
                Cplx::new(1.0, 0.0),
                Cplx::new(0.0, 0.0),
            ])
            .unwrap();
        assert!(rel_err(per_glynn(&swap).unwrap(), Cplx::new(1.0, 0.0)) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let a = random_complex(12, &mut rng);
            let r = per_ryser(&a).unwrap();
            let g = per_glynn(&a).unwrap();
            assert!(rel_err(r, g) < 1e-8, "{r} vs {g}");
        }
    }

    #[test]
    fn permutation_invariance() {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let a = random_complex(6, &mut rng);
        let reference = per_ryser(&a).unwrap();
        for _ in 0..5 {
            let mut rows: Vec<usize> = (0..6).collect();
            let mut cols: Vec<usize> = (0..6).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let shuffled = a.select(&rows, &cols).unwrap();
            assert!(rel_err(per_ryser(&shuffled).unwrap(), reference) < 1e-10);
        }
    }

    #[test]
    fn scalar_factor_scales_by_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for n in 2..=8 {
            let a = random_complex(n, &mut rng);
            let doubled = Matrix::from_fn(n, n, |i, j| a.get(i, j).scale(2.0));
            let expected = per_ryser(&a).unwrap() * Cplx::new(2f64.powi(n as i32), 0.0);
            assert!(rel_err(per_ryser(&doubled).unwrap(), expected) < 1e-10);
        }
    }

    #[test]
    fn zero_row_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let mut a = random_complex(6, &mut rng);
        for j in 0..6 {
            a.set(3, j, Cplx::new(0.0, 0.0));
        }
        let p = per_ryser(&a).unwrap();
        assert!(p.norm() < 1e-10, "got {p}");
        assert_eq!(per_naive(&a).unwrap().norm(), 0.0);
    }

    #[test]
    fn thread_split_is_bit_identical() {
        // Windows are fixed and reduce in index order, so the split cannot
        // change the arithmetic at all (far inside the 1e-12 budget).
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let a = random_complex(16, &mut rng);
        let single = per_ryser_threads(&a, 1).unwrap();
        for threads in [2, 3, 4, 7] {
            let multi = per_ryser_threads(&a, threads).unwrap();
            assert_eq!(single, multi, "threads={threads}");
        }
    }

    #[test]
    fn haar_submatrix_permanent_consistency() {
        // Cross-check all three routes on a submatrix of an actual unitary.
        let u = haar_unitary::<f64>(12, 4).unwrap();
        let rows = crate::OutputPattern::new(vec![1, 4, 6, 9, 11]).unwrap();
        let cols = crate::InputSubset::first_k(5);
        let sub = u.matrix().submatrix(&rows, &cols).unwrap();
        let n = per_naive(&sub).unwrap();
        let r = per_ryser(&sub).unwrap();
        let g = per_glynn(&sub).unwrap();
        assert!(rel_err(n, r) < 1e-10);
        assert!(rel_err(r, g) < 1e-10);
    }

    #[test]
    fn ryser_size_guard() {
        let a: RMatrix = Matrix::zeros(65, 65);
        assert!(matches!(per_ryser(&a), Err(Error::SizeLimit(_))));
        assert!(matches!(per_glynn(&a), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn bench_rows_shape() {
        let rows = bench_permanent(2, 4, 3, 1).unwrap();
        assert_eq!(rows.len(), 6); // 3 sizes × 2 kinds
        for r in &rows {
            assert!(r.mean_seconds > 0.0);
            assert_eq!(r.repeats, 3);
        }
        assert!(bench_permanent(1, 4, 3, 1).is_err());
        assert!(bench_permanent(2, 31, 3, 1).is_err());
    }
}
