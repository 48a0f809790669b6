//! Truncated jets: the derivative values `[g(x₀), g′(x₀), …, g⁽ᴺ⁾(x₀)]` of a
//! function at a point.
//!
//! Entries are derivative values, not Taylor coefficients; the factorials are
//! applied where jets are re-expanded or summed.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use num_traits::Float;

use crate::scalar::{binomial, factorial, ComplexScalar, Ring};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Jet<T> {
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet carries at least its value");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![T::zero(); order + 1])
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self::new(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// The `n`-th derivative value.
    pub fn deriv(&self, n: usize) -> Result<&T> {
        self.coeffs.get(n).ok_or(Error::JetOrder {
            needed: n,
            available: self.order(),
        })
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Keeps derivatives up to `order`.
    pub fn truncated(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::JetOrder {
                needed: order,
                available: self.order(),
            });
        }
        Ok(Self::new(self.coeffs[..=order].to_vec()))
    }

    /// Pads with zero derivatives up to `order` (no-op if already deeper).
    pub fn zero_extended(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < order + 1 {
            coeffs.resize(order + 1, T::zero());
        }
        Self::new(coeffs)
    }

    /// Jet of `g′`; one order shallower.
    pub fn differentiate(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::JetOrder {
                needed: 1,
                available: 0,
            });
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        )
    }

    /// Leibniz product, truncated at the shallower order.
    pub fn product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n).fold(T::zero(), |acc, j| {
                    acc + (self.coeffs[j].clone() * other.coeffs[n - j].clone())
                        .scale_int(binomial(n, j))
                })
            })
            .collect();
        Self::new(coeffs)
    }
}

impl<T: ComplexScalar> Jet<T> {
    /// Re-expands the jet at `x₀ + h` from its truncated Taylor series:
    /// `g⁽ʲ⁾(x₀+h) ≈ Σ_{m ≤ N−j} g⁽ʲ⁺ᵐ⁾(x₀) hᵐ/m!`. Entry `j` is accurate to
    /// `O(h^{N−j+1})`, so the top entries carry the least information.
    pub fn shift(&self, h: &T) -> Self {
        let n = self.order();
        let mut powers = vec![T::one()];
        for m in 1..=n {
            let next = powers[m - 1].clone() * h.clone();
            powers.push(next);
        }
        let coeffs = (0..=n)
            .map(|j| {
                (0..=n - j).fold(T::zero(), |acc, m| {
                    let inv_fact = T::from_real(factorial::<T::Real>(m).recip());
                    acc + self.coeffs[j + m].clone() * powers[m].clone() * inv_fact
                })
            })
            .collect();
        Self::new(coeffs)
    }
}

impl<T: Ring> Add for Jet<T> {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        self.zip_with(&other, |a, b| a + b)
    }
}

impl<T: Ring> Sub for Jet<T> {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        self.zip_with(&other, |a, b| a - b)
    }
}

impl<T: Ring> Mul for Jet<T> {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        self.product(&other)
    }
}

impl<T: Ring> Neg for Jet<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn cj(v: &[f64]) -> Jet<C64> {
        Jet::new(v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[test]
    fn product_rule() {
        let j = cj(&[1.0, 1.0]);
        assert_eq!(j.clone() * j, cj(&[1.0, 2.0]));
        // (x²)(x) at x = 1: value 1, derivatives of x³: 3, 6, 6
        let x2 = cj(&[1.0, 2.0, 2.0, 0.0]);
        let x1 = cj(&[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(x2 * x1, cj(&[1.0, 3.0, 6.0, 6.0]));
    }

    #[test]
    fn product_truncates_at_shallower_order() {
        let a = cj(&[1.0, 2.0, 3.0]);
        let b = cj(&[1.0, 1.0]);
        assert_eq!((a * b).order(), 1);
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let j = Jet::new(vec![
            C64::new(1.0, 2.0),
            C64::new(-0.5, 0.1),
            C64::new(3.0, 0.0),
        ]);
        assert_eq!(j.shift(&C64::new(0.0, 0.0)), j);
    }

    #[test]
    fn shift_of_cubic_is_exact() {
        // g(x) = x³ at 0: [0, 0, 0, 6]; at 2: [8, 12, 12, 6]
        let g = cj(&[0.0, 0.0, 0.0, 6.0]);
        let shifted = g.shift(&C64::new(2.0, 0.0));
        for (a, b) in shifted.coeffs().iter().zip([8.0, 12.0, 12.0, 6.0]) {
            assert!((a - C64::new(b, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn exponential_jet_shift_back() {
        // g(τ) = e^{iaτ}: jet at ε shifted by −ε approximates the jet at 0.
        let a = 0.8;
        let eps = 0.05;
        let at = |t: f64| {
            Jet::new(
                (0..=3)
                    .map(|n| C64::new(0.0, a).powu(n) * C64::new(0.0, a * t).exp())
                    .collect(),
            )
        };
        let back = at(eps).shift(&C64::new(-eps, 0.0));
        let exact = at(0.0);
        for j in 0..=3 {
            let err = (back.coeffs()[j] - exact.coeffs()[j]).norm();
            let bound = 2.0 * a.powi(4) * eps.powi(4 - j as i32);
            assert!(err < bound, "entry {j}: {err} vs {bound}");
        }
    }

    #[test]
    fn differentiate_and_underflow() {
        let j = cj(&[1.0, 2.0, 3.0]);
        assert_eq!(j.differentiate().unwrap(), cj(&[2.0, 3.0]));
        assert!(matches!(
            cj(&[1.0]).differentiate(),
            Err(Error::JetOrder {
                needed: 1,
                available: 0
            })
        ));
        assert!(j.deriv(3).is_err());
        assert!(j.truncated(5).is_err());
        assert_eq!(j.truncated(1).unwrap(), cj(&[1.0, 2.0]));
    }

    #[test]
    fn integer_jets() {
        let a = Jet::new(vec![2i64, 3, 1]);
        let b = Jet::new(vec![1i64, -1, 4]);
        assert_eq!((a * b).coeffs(), &[2, 1, 3]);
    }
}
