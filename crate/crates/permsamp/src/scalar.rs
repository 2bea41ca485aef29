//! Scalar abstractions: the real float type the toolkit is generic over and
//! the matrix entry types (real or complex) built on it.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating-point scalar. Implemented for `f32` and `f64`; everything in the
/// sampling core is generic over it.
pub trait Real:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum<Self>
    + Scalar<Real = Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Accepted max-norm of U†U − I when validating a transfer matrix.
    const UNITARY_TOL: Self;

    /// One standard-normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One uniform draw from [0, 1).
    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn from_f64_exact(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Real for f64 {
    const UNITARY_TOL: Self = 1e-10;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

impl Real for f32 {
    // Single precision cannot reach the double-precision bound; this is the
    // analogous headroom above f32 round-off.
    const UNITARY_TOL: Self = 1e-4;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random()
    }
}

/// Matrix entry: a [`Real`] or its complexification. The permanent kernels
/// are generic over this, which is what lets one Ryser implementation serve
/// both |Per(A_S)|² and Per(|A_S|²).
pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + Sum<Self>
    + Send
    + Sync
    + 'static
{
    type Real: Real;

    /// Squared modulus (for reals, the square).
    fn modulus_sqr(self) -> Self::Real;

    fn from_real(r: Self::Real) -> Self;

    /// Multiply by a real scalar.
    fn scale(self, r: Self::Real) -> Self;

    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    type Real = f64;

    fn modulus_sqr(self) -> f64 {
        self * self
    }

    fn from_real(r: f64) -> Self {
        r
    }

    fn scale(self, r: f64) -> Self {
        self * r
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for f32 {
    type Real = f32;

    fn modulus_sqr(self) -> f32 {
        self * self
    }

    fn from_real(r: f32) -> Self {
        r
    }

    fn scale(self, r: f32) -> Self {
        self * r
    }

    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
}

impl<T: Real> Scalar for Complex<T> {
    type Real = T;

    fn modulus_sqr(self) -> T {
        self.norm_sqr()
    }

    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }

    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }

    fn is_finite(self) -> bool {
        Float::is_finite(self.re) && Float::is_finite(self.im)
    }
}
