//! Truncated power series in one variable with complex coefficients.
//!
//! Used as the scalar of jets when endpoint data has to be re-expanded in the
//! overlap parameter itself.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{ComplexScalar, Real, Ring};

/// `Σ_p c_p x^p`, with every product truncated above degree `cap`.
/// Constants carry no cap; the cap of a result is the smaller of its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<F> {
    coeffs: Vec<Complex<F>>,
    cap: Option<usize>,
}

impl<F: Real> PowerSeries<F> {
    pub fn constant(c: Complex<F>) -> Self {
        Self {
            coeffs: vec![c],
            cap: None,
        }
    }

    /// The series variable `x`, truncated above degree `cap`.
    pub fn variable(cap: usize) -> Self {
        let mut s = Self {
            coeffs: vec![Complex::zero(), Complex::one()],
            cap: Some(cap),
        };
        s.trim();
        s
    }

    pub fn from_coeffs(coeffs: Vec<Complex<F>>, cap: Option<usize>) -> Self {
        let mut s = Self { coeffs, cap };
        s.trim();
        s
    }

    /// Coefficient of `x^p` (zero beyond the stored terms).
    pub fn coeff(&self, p: usize) -> Complex<F> {
        self.coeffs.get(p).copied().unwrap_or_else(Complex::zero)
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn eval(&self, x: Complex<F>) -> Complex<F> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::zero(), |acc, &c| acc * x + c)
    }

    fn trim(&mut self) {
        if let Some(cap) = self.cap {
            self.coeffs.truncate(cap + 1);
        }
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Complex::zero());
        }
    }

    fn joint_cap(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

impl<F: Real> Add for PowerSeries<F> {
    type Output = Self;

    fn add(self, b: Self) -> Self {
        let n = self.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n).map(|p| self.coeff(p) + b.coeff(p)).collect();
        Self::from_coeffs(coeffs, Self::joint_cap(self.cap, b.cap))
    }
}

impl<F: Real> Sub for PowerSeries<F> {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl<F: Real> Neg for PowerSeries<F> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            cap: self.cap,
        }
    }
}

impl<F: Real> Mul for PowerSeries<F> {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let cap = Self::joint_cap(self.cap, b.cap);
        let mut n = self.coeffs.len() + b.coeffs.len() - 1;
        if let Some(c) = cap {
            n = n.min(c + 1);
        }
        let mut coeffs = vec![Complex::zero(); n];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if i + j < n {
                    coeffs[i + j] = coeffs[i + j] + x * y;
                }
            }
        }
        Self::from_coeffs(coeffs, cap)
    }
}

impl<F: Real> Zero for PowerSeries<F> {
    fn zero() -> Self {
        Self::constant(Complex::zero())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<F: Real> One for PowerSeries<F> {
    fn one() -> Self {
        Self::constant(Complex::one())
    }
}

impl<F: Real> Ring for PowerSeries<F> {
    fn from_i64(n: i64) -> Self {
        Self::constant(Complex::new(F::lit(n as f64), F::zero()))
    }
}

impl<F: Real> ComplexScalar for PowerSeries<F> {
    type Real = F;

    fn from_complex(c: Complex<F>) -> Self {
        Self::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn product_truncates_at_cap() {
        let x = PowerSeries::<f64>::variable(3);
        let one_plus_x = PowerSeries::one() + x.clone();
        let p = one_plus_x.clone() * one_plus_x.clone() * one_plus_x.clone() * one_plus_x;
        // (1+x)^4 = 1 + 4x + 6x² + 4x³ + x⁴, cap 3 drops x⁴
        let got: Vec<_> = (0..5).map(|k| p.coeff(k)).collect();
        assert_eq!(got, vec![c(1.), c(4.), c(6.), c(4.), c(0.)]);
        assert_eq!(p.cap(), Some(3));
    }

    #[test]
    fn constants_have_no_cap() {
        let a = PowerSeries::<f64>::constant(c(2.0));
        let b = PowerSeries::<f64>::from_i64(3);
        assert_eq!((a * b).coeff(0), c(6.0));
        assert!(PowerSeries::<f64>::zero().is_zero());
    }

    #[test]
    fn eval_horner() {
        let s = PowerSeries::<f64>::from_coeffs(vec![c(1.), c(2.), c(3.)], None);
        assert_eq!(s.eval(c(2.0)), c(17.0));
    }
}
