//! Dense matrices, transfer-matrix generation and validation, and the
//! combinadic indexing of collision-free detection patterns.

use num_complex::Complex;
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Dense row-major matrix over a [`Scalar`] entry type.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    /// Builds from row-major data; every entry must be finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|e| e.is_finite()) {
            return Err(Error::InvalidDimension("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    /// Square submatrix with entry (i, j) = self[rows[i]][cols[j]].
    pub fn submatrix(&self, rows: &OutputPattern, cols: &InputSubset) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::NonSquare {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        self.select(rows.modes(), cols.columns())
    }

    /// General row/column selection; indices may repeat (used for bunched
    /// Fock-space checks where a row appears `s_i` times).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange(format!("row {i} of {}", self.rows)));
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange(format!("col {j} of {}", self.cols)));
            }
        }
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            let r = self.row(i);
            for &j in cols {
                out.push(r[j]);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols: cols.len(),
            data: out,
        })
    }

    /// In-place variant of [`Matrix::select`] for hot loops; `out` must be
    /// pre-shaped to rows.len() × cols.len().
    pub(crate) fn select_into(&self, rows: &[usize], cols: &[usize], out: &mut Matrix<S>) {
        debug_assert_eq!(out.rows, rows.len());
        debug_assert_eq!(out.cols, cols.len());
        let mut k = 0;
        for &i in rows {
            let r = self.row(i);
            for &j in cols {
                out.data[k] = r[j];
                k += 1;
            }
        }
    }

    /// Elementwise squared modulus, |A|² in the distinguishable-particle sense.
    pub fn modulus_sqr(&self) -> Matrix<S::Real> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.modulus_sqr()).collect(),
        }
    }

    /// max_ij |entry| (modulus).
    pub fn max_modulus(&self) -> S::Real {
        self.data
            .iter()
            .map(|e| e.modulus_sqr())
            .fold(<S::Real as num_traits::Zero>::zero(), |a, b| a.max(b))
            .sqrt()
    }
}

/// A collision-free detection event: strictly increasing output-mode indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputPattern {
    modes: Vec<usize>,
}

impl OutputPattern {
    pub fn new(modes: Vec<usize>) -> Result<Self> {
        if !modes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidPattern(format!(
                "modes not strictly increasing: {modes:?}"
            )));
        }
        Ok(Self { modes })
    }

    /// The lowest pattern (0, 1, …, n−1).
    pub fn first_n(n: usize) -> Self {
        Self {
            modes: (0..n).collect(),
        }
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Valid as an n-photon event in m modes?
    pub fn validate_for(&self, n: usize, m: usize) -> Result<()> {
        if self.modes.len() != n {
            return Err(Error::InvalidPattern(format!(
                "{} modes where {n} expected",
                self.modes.len()
            )));
        }
        if let Some(&last) = self.modes.last() {
            if last >= m {
                return Err(Error::InvalidPattern(format!("mode {last} ≥ m = {m}")));
            }
        }
        Ok(())
    }
}

/// A strictly increasing subset of input columns (the tuple T of a lossy or
/// scattershot input configuration).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputSubset {
    columns: Vec<usize>,
}

impl InputSubset {
    pub fn new(columns: Vec<usize>) -> Result<Self> {
        if !columns.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidPattern(format!(
                "columns not strictly increasing: {columns:?}"
            )));
        }
        Ok(Self { columns })
    }

    /// Columns 0..k, the lossless input configuration.
    pub fn first_k(k: usize) -> Self {
        Self {
            columns: (0..k).collect(),
        }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn validate_for(&self, bound: usize) -> Result<()> {
        if let Some(&last) = self.columns.last() {
            if last >= bound {
                return Err(Error::InvalidPattern(format!("column {last} ≥ {bound}")));
            }
        }
        Ok(())
    }
}

/// An m-mode interferometer: a unitary transfer matrix plus provenance.
#[derive(Clone, Debug)]
pub struct Interferometer<T: Real> {
    m: usize,
    u: Matrix<Complex<T>>,
    fingerprint: String,
}

impl<T: Real> Interferometer<T> {
    /// Validates unitarity (max-norm of U†U − I within [`Real::UNITARY_TOL`]).
    pub fn new(u: Matrix<Complex<T>>) -> Result<Self> {
        let fingerprint = crate::io::matrix_fingerprint(&u, None);
        Self::with_fingerprint(u, fingerprint)
    }

    pub(crate) fn with_fingerprint(u: Matrix<Complex<T>>, fingerprint: String) -> Result<Self> {
        if !u.is_square() || u.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "transfer matrix must be square and nonempty, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let defect = unitarity_defect(&u);
        if defect > T::UNITARY_TOL {
            return Err(Error::NotUnitary {
                defect: defect.to_f64().unwrap_or(f64::NAN),
                tol: T::UNITARY_TOL.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            m: u.rows(),
            u,
            fingerprint,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.u
    }

    /// Hash identifying the matrix (file bytes when read from disk, canonical
    /// serialization otherwise).
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

/// max_ij |(U†U − I)_ij|.
pub fn unitarity_defect<T: Real>(u: &Matrix<Complex<T>>) -> T {
    let m = u.rows();
    let mut worst = T::zero();
    for i in 0..m {
        for j in 0..m {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..m {
                acc += u.get(k, i).conj() * u.get(k, j);
            }
            if i == j {
                acc -= Complex::new(T::one(), T::zero());
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

/// Haar-random interferometer: complex Ginibre matrix, Householder QR, then
/// Q's columns multiplied by the phases of R's diagonal (a plain QR is not
/// Haar-distributed). Deterministic for a given seed.
pub fn haar_unitary<T: Real>(m: usize, seed: u64) -> Result<Interferometer<T>> {
    if m == 0 {
        return Err(Error::InvalidDimension("mode count must be ≥ 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Entry scale cancels in QR, so the raw standard normals suffice.
    let mut a = Matrix::from_fn(m, m, |_, _| {
        Complex::new(T::standard_normal(&mut rng), T::standard_normal(&mut rng))
    });
    let q = haar_q(&mut a);
    let fingerprint = crate::io::matrix_fingerprint(&q, Some(seed));
    Interferometer::with_fingerprint(q, fingerprint)
}

/// Householder QR of `a` (destroyed), returning Q with each column rotated by
/// the phase of the corresponding R diagonal entry.
fn haar_q<T: Real>(a: &mut Matrix<Complex<T>>) -> Matrix<Complex<T>> {
    let m = a.rows();
    let mut reflectors: Vec<Vec<Complex<T>>> = Vec::with_capacity(m);
    for k in 0..m {
        // Reflector annihilating a[k+1.., k].
        let mut norm_sqr = T::zero();
        for i in k..m {
            norm_sqr = norm_sqr + a.get(i, k).norm_sqr();
        }
        let norm = norm_sqr.sqrt();
        let x0 = a.get(k, k);
        let phase = if x0.norm() > T::zero() {
            x0 / Complex::new(x0.norm(), T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        let alpha = -phase * Complex::new(norm, T::zero());

        let mut v: Vec<Complex<T>> = (k..m).map(|i| a.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).fold(T::zero(), |s, t| s + t).sqrt();
        if vnorm > T::zero() {
            for c in v.iter_mut() {
                *c = c.scale(T::one() / vnorm);
            }
            // a[k.., j] -= 2 (v† a[k.., j]) v
            for j in k..m {
                let mut dot = Complex::new(T::zero(), T::zero());
                for (off, vi) in v.iter().enumerate() {
                    dot += vi.conj() * a.get(k + off, j);
                }
                let two_dot = dot + dot;
                for (off, vi) in v.iter().enumerate() {
                    let cur = a.get(k + off, j);
                    a.set(k + off, j, cur - two_dot * *vi);
                }
            }
        }
        reflectors.push(v);
    }

    // Q = H_0 H_1 … H_{m−1} applied to the identity, highest k first.
    let mut q: Matrix<Complex<T>> = Matrix::identity(m);
    for k in (0..m).rev() {
        let v = &reflectors[k];
        let vnorm_ok = v.iter().any(|c| c.norm_sqr() > T::zero());
        if !vnorm_ok {
            continue;
        }
        for j in 0..m {
            let mut dot = Complex::new(T::zero(), T::zero());
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * q.get(k + off, j);
            }
            let two_dot = dot + dot;
            for (off, vi) in v.iter().enumerate() {
                let cur = q.get(k + off, j);
                q.set(k + off, j, cur - two_dot * *vi);
            }
        }
    }

    // Column phases from R's diagonal (now stored in the reduced `a`).
    for k in 0..m {
        let r = a.get(k, k);
        let rn = r.norm();
        let phase = if rn > T::zero() {
            r / Complex::new(rn, T::zero())
        } else {
            Complex::new(T::one(), T::zero())
        };
        for i in 0..m {
            let cur = q.get(i, k);
            q.set(i, k, cur * phase);
        }
    }
    q
}

/// C(n, k) exactly, or None on u128 overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as u128)?;
        acc /= i as u128;
    }
    Some(acc)
}

/// C(n, k) in floating point, as the stable product of ratios.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 1..=k {
        acc *= (n - k + i) as f64 / i as f64;
    }
    acc
}

/// Combinadic (colexicographic) rank of a pattern among the C(m, n) subsets.
pub fn pattern_rank(p: &OutputPattern, m: usize) -> Result<u128> {
    p.validate_for(p.len(), m)?;
    let mut rank: u128 = 0;
    for (i, &mode) in p.modes().iter().enumerate() {
        let term = binomial(mode, i + 1).ok_or_else(|| {
            Error::SizeLimit(format!("C({mode},{}) exceeds u128", i + 1))
        })?;
        rank = rank.checked_add(term).ok_or_else(|| {
            Error::SizeLimit("pattern rank exceeds u128".into())
        })?;
    }
    Ok(rank)
}

/// Inverse of [`pattern_rank`].
pub fn pattern_unrank(rank: u128, n: usize, m: usize) -> Result<OutputPattern> {
    if n > m {
        return Err(Error::InvalidDimension(format!("n = {n} > m = {m}")));
    }
    let total = binomial(m, n).ok_or_else(|| Error::SizeLimit(format!("C({m},{n}) exceeds u128")))?;
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, n, m });
    }
    let mut r = rank;
    let mut modes = vec![0usize; n];
    let mut hi = m;
    for i in (0..n).rev() {
        // Largest c with C(c, i+1) ≤ r.
        let mut c = hi - 1;
        loop {
            let b = binomial(c, i + 1).expect("bounded by C(m,n)");
            if b <= r {
                r -= b;
                break;
            }
            c -= 1;
        }
        modes[i] = c;
        hi = c;
    }
    OutputPattern::new(modes)
}

/// Advances `p` to the colex successor among n-subsets of [0, m).
/// Returns false (leaving `p` untouched) at the last pattern.
pub fn advance_pattern_colex(p: &mut [usize], m: usize) -> bool {
    let n = p.len();
    for i in 0..n {
        let cap = if i + 1 < n { p[i + 1] } else { m };
        if p[i] + 1 < cap {
            p[i] += 1;
            for (j, slot) in p.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}
