//! 2×2 matrices over a ring, with the Pauli matrices and the phase matrix
//! `K(τ)` that drives the transfer-matrix evolution.
//!
//! Error norms throughout the crate use [`Mat2::norm_max`], the largest
//! entry modulus.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, Real, Ring};

/// Default tolerance on `|det − 1|` accepted by [`Mat2::inverse_unimodular`].
pub const UNIMODULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

impl<T> Mat2<T> {
    pub const fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Mat2<U> {
        Mat2::new(f(self.a11), f(self.a12), f(self.a21), f(self.a22))
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [&T; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }
}

impl<T: Ring> Mat2<T> {
    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Self::new(d1, T::zero(), T::zero(), d2)
    }

    pub fn det(&self) -> T {
        self.a11.clone() * self.a22.clone() - self.a12.clone() * self.a21.clone()
    }

    pub fn trace(&self) -> T {
        self.a11.clone() + self.a22.clone()
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.a11.clone(),
            self.a21.clone(),
            self.a12.clone(),
            self.a22.clone(),
        )
    }

    /// `[[a22, −a12], [−a21, a11]]`; the inverse when `det = 1`.
    pub fn adjugate(&self) -> Self {
        Self::new(
            self.a22.clone(),
            -self.a12.clone(),
            -self.a21.clone(),
            self.a11.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        self.clone().map(|x| x * s.clone())
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.clone() * other.clone() - other.clone() * self.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }
}

impl<T: ComplexScalar> Mat2<T> {
    /// Standard Pauli matrix `σ_index`, `index ∈ {1, 2, 3}`.
    pub fn pauli(index: usize) -> Result<Self> {
        let (o, z, i) = (T::one(), T::zero(), T::i());
        match index {
            1 => Ok(Self::new(z.clone(), o.clone(), o, z)),
            2 => Ok(Self::new(z.clone(), -i.clone(), i, z)),
            3 => Ok(Self::new(o.clone(), z.clone(), z, -o)),
            n => Err(Error::PauliIndex(n)),
        }
    }

    pub fn sigma1() -> Self {
        Self::pauli(1).unwrap()
    }

    pub fn sigma2() -> Self {
        Self::pauli(2).unwrap()
    }

    pub fn sigma3() -> Self {
        Self::pauli(3).unwrap()
    }

    /// `K(0) = σ₃ + iσ₂ = [[1, 1], [−1, −1]]`.
    pub fn k0() -> Self {
        let o = T::one();
        Self::new(o.clone(), o.clone(), -o.clone(), -o)
    }

    pub fn scale_c(&self, c: Complex<T::Real>) -> Self {
        self.clone().map(|x| x.scale(c))
    }
}

impl<F: Real> Mat2<Complex<F>> {
    /// `K(τ) = [[1, e^{−2iτ}], [−e^{2iτ}, −1]]`.
    pub fn k_matrix(tau: F) -> Self {
        let two = F::lit(2.0);
        let e_minus = Complex::from_polar(F::one(), -two * tau);
        let e_plus = Complex::from_polar(F::one(), two * tau);
        Self::new(Complex::one(), e_minus, -e_plus, -Complex::<F>::one())
    }

    /// `dK/dτ = [[0, −2i e^{−2iτ}], [−2i e^{2iτ}, 0]]`.
    pub fn k_matrix_dot(tau: F) -> Self {
        let two = F::lit(2.0);
        let m2i = Complex::new(F::zero(), -two);
        Self::new(
            Complex::zero(),
            m2i * Complex::from_polar(F::one(), -two * tau),
            m2i * Complex::from_polar(F::one(), two * tau),
            Complex::zero(),
        )
    }

    /// `d²K/dτ² = [[0, −4e^{−2iτ}], [4e^{2iτ}, 0]]`.
    pub fn k_matrix_ddot(tau: F) -> Self {
        let two = F::lit(2.0);
        let four = F::lit(4.0);
        Self::new(
            Complex::zero(),
            Complex::from_polar(four, -two * tau) * (-F::one()),
            Complex::from_polar(four, two * tau),
            Complex::zero(),
        )
    }

    /// `e^{iθσ₃} = diag(e^{iθ}, e^{−iθ})`.
    pub fn exp_i_sigma3(theta: F) -> Self {
        Self::diag(
            Complex::from_polar(F::one(), theta),
            Complex::from_polar(F::one(), -theta),
        )
    }

    pub fn conj_transpose(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> F {
        self.entries()
            .iter()
            .map(|z| z.norm())
            .fold(F::zero(), F::max)
    }

    pub fn dist(&self, other: &Self) -> F {
        (*self - *other).norm_max()
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Adjugate inverse, valid for `|det − 1| <= tol`.
    pub fn inverse_unimodular(&self, tol: F) -> Result<Self> {
        let det = self.det();
        if (det - Complex::one()).norm() > tol {
            return Err(Error::NotUnimodular {
                det: Complex::new(
                    det.re.to_f64().unwrap_or(f64::NAN),
                    det.im.to_f64().unwrap_or(f64::NAN),
                ),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.adjugate())
    }
}

impl<T: Ring> Mul for Mat2<T> {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.a11.clone() * b.a11.clone() + a.a12.clone() * b.a21.clone(),
            a.a11 * b.a12.clone() + a.a12 * b.a22.clone(),
            a.a21.clone() * b.a11 + a.a22.clone() * b.a21,
            a.a21 * b.a12 + a.a22 * b.a22,
        )
    }
}

impl<T: Ring> Add for Mat2<T> {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        Self::new(
            self.a11 + b.a11,
            self.a12 + b.a12,
            self.a21 + b.a21,
            self.a22 + b.a22,
        )
    }
}

impl<T: Ring> Sub for Mat2<T> {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        Self::new(
            self.a11 - b.a11,
            self.a12 - b.a12,
            self.a21 - b.a21,
            self.a22 - b.a22,
        )
    }
}

impl<T: Ring> Neg for Mat2<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;
    use std::f64::consts::PI;

    type M = Mat2<C64>;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &M, b: &M, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    fn tau_grid() -> impl Iterator<Item = f64> {
        (0..41).map(|j| -3.0 + 0.15 * j as f64)
    }

    #[test]
    fn k_matrix_values() {
        let k0 = M::new(c(1., 0.), c(1., 0.), c(-1., 0.), c(-1., 0.));
        assert!(close(&M::k_matrix(0.0), &k0, 1e-15));
        assert!(close(&M::k_matrix(PI), &k0, 1e-14));
        let quarter = M::new(c(1., 0.), c(0., -1.), c(0., -1.), c(-1., 0.));
        assert!(close(&M::k_matrix(PI / 4.0), &quarter, 1e-15));
        assert!(close(
            &M::k0(),
            &(M::sigma3() + M::sigma2().scale(&C64::i())),
            0.0
        ));
    }

    #[test]
    fn k_matrix_is_conjugated_k0() {
        for t in tau_grid() {
            let rotated = M::exp_i_sigma3(-t) * M::k0() * M::exp_i_sigma3(t);
            assert!(close(&M::k_matrix(t), &rotated, 1e-14));
        }
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(
            M::pauli(3).unwrap(),
            M::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
        );
        assert_eq!(
            M::pauli(1).unwrap(),
            M::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
        );
        assert_eq!(
            M::pauli(2).unwrap(),
            M::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
        );
        assert_eq!(M::pauli(0), Err(Error::PauliIndex(0)));
        assert_eq!(M::pauli(4), Err(Error::PauliIndex(4)));
    }

    #[test]
    fn inverse_and_det() {
        assert_eq!(
            M::identity().inverse_unimodular(1e-8).unwrap(),
            M::identity()
        );
        let a = M::new(c(2., 0.), c(1., 0.), c(1., 0.), c(1., 0.));
        let inv = M::new(c(1., 0.), c(-1., 0.), c(-1., 0.), c(2., 0.));
        assert_eq!(a.inverse_unimodular(1e-8).unwrap(), inv);
        assert!(close(&(a * inv), &M::identity(), 0.0));
        for t in tau_grid() {
            assert!(M::k_matrix(t).det().norm() < 1e-15);
        }
    }

    #[test]
    fn non_unimodular_inverse_reports_det() {
        let a = M::new(c(2., 0.), c(0., 0.), c(0., 0.), c(1., 0.));
        match a.inverse_unimodular(1e-8) {
            Err(Error::NotUnimodular { det, .. }) => assert_eq!(det, c(2., 0.)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for t in tau_grid() {
            let fd = (M::k_matrix(t + h) - M::k_matrix(t - h)).scale(&c(0.5 / h, 0.));
            assert!(close(&fd, &M::k_matrix_dot(t), 1e-9));
            let fd2 = (M::k_matrix_dot(t + h) - M::k_matrix_dot(t - h)).scale(&c(0.5 / h, 0.));
            assert!(close(&fd2, &M::k_matrix_ddot(t), 1e-8));
        }
    }

    #[test]
    fn single_precision_k_algebra() {
        let k = Mat2::<Complex<f32>>::k_matrix(0.7);
        assert!((k * k).norm_max() < 1e-6);
    }
}
