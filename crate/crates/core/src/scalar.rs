//! Field abstraction shared by the real (A = 0) and complex (magnetic) code paths.

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;

/// Scalars the sparse assembly and the eigensolvers are generic over.
///
/// Method names avoid clashing with `faer::traits::ComplexField`, which is a
/// supertrait so the same values can be handed to the sparse Cholesky.
pub trait Scalar:
    faer::traits::ComplexField
    + Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + From<f64>
    + 'static
{
    const IS_COMPLEX: bool;

    fn from_f64(x: f64) -> Self;
    fn from_re_im(re: f64, im: f64) -> Self;
    fn conjugate(self) -> Self;
    fn re_part(self) -> f64;
    fn im_part(self) -> f64;
    fn modulus(self) -> f64;
    fn modulus_sqr(self) -> f64;
    fn scale(self, r: f64) -> Self;
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re_part(), self.im_part())
    }
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_re_im(re: f64, _im: f64) -> Self {
        re
    }
    #[inline]
    fn conjugate(self) -> Self {
        self
    }
    #[inline]
    fn re_part(self) -> f64 {
        self
    }
    #[inline]
    fn im_part(self) -> f64 {
        0.0
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>() - 0.5
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn from_re_im(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    #[inline]
    fn conjugate(self) -> Self {
        self.conj()
    }
    #[inline]
    fn re_part(self) -> f64 {
        self.re
    }
    #[inline]
    fn im_part(self) -> f64 {
        self.im
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }
}

/// Hermitian inner product `x^* y`.
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(a, b)| a.conjugate() * *b).sum()
}

pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|a| a.modulus_sqr()).sum::<f64>().sqrt()
}

/// `y += a * x`
pub fn axpy<T: Scalar>(a: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * *xi;
    }
}
