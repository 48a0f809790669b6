//! Scalar traits shared by the algebraic layers.
//!
//! The matrix and jet code is written against [`Ring`] so the same routines
//! run on plain complex numbers, on truncated power series (used to re-expand
//! endpoint data) and on exact polynomial types in tests.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, One, Zero};

/// Real floating point type: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Lossless-enough conversion of small constants.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Commutative ring with unit, enough structure for truncated-jet algebra.
pub trait Ring:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn scale_int(&self, n: i64) -> Self {
        self.clone() * Self::from_i64(n)
    }
}

/// A ring that contains the complex numbers over `Self::Real`.
pub trait ComplexScalar: Ring {
    type Real: Real;

    fn from_complex(c: Complex<Self::Real>) -> Self;

    fn from_real(x: Self::Real) -> Self {
        Self::from_complex(Complex::new(x, Self::Real::zero()))
    }

    fn i() -> Self {
        Self::from_complex(Complex::i())
    }

    /// Multiplication by a complex constant.
    fn scale(&self, c: Complex<Self::Real>) -> Self {
        self.clone() * Self::from_complex(c)
    }
}

macro_rules! impl_real_ring {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }
        }
    )*};
}

impl_real_ring!(f32, f64);

impl Ring for i64 {
    fn from_i64(n: i64) -> Self {
        n
    }
}

impl<F: Real> Ring for Complex<F> {
    fn from_i64(n: i64) -> Self {
        Complex::new(F::from_i64(n).expect("integer representable"), F::zero())
    }
}

impl<F: Real> ComplexScalar for Complex<F> {
    type Real = F;

    fn from_complex(c: Complex<F>) -> Self {
        c
    }
}

/// `n!` as a float; exact for `n <= 22` in `f64`.
pub fn factorial<F: Real>(n: usize) -> F {
    (1..=n).fold(F::one(), |acc, j| acc * F::lit(j as f64))
}

/// Binomial coefficient `C(n, j)` as an integer.
pub fn binomial(n: usize, j: usize) -> i64 {
    if j > n {
        return 0;
    }
    let j = j.min(n - j);
    let mut acc: i64 = 1;
    for i in 0..j {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_row() {
        let row: Vec<i64> = (0..=6).map(|j| binomial(6, j)).collect();
        assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn factorials_are_exact() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(12), 479_001_600.0);
        assert_eq!(factorial::<f32>(5), 120.0);
    }

    #[test]
    fn complex_scalar_constants() {
        let i = <Complex<f64> as ComplexScalar>::i();
        assert_eq!(i * i, Complex::new(-1.0, 0.0));
        assert_eq!(
            <Complex<f32> as Ring>::from_i64(3),
            Complex::new(3.0f32, 0.0)
        );
    }
}
