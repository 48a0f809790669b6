//! Multivariate polynomials with integer coefficients.
//!
//! A [`Ring`] whose arithmetic is exact, so that recursions written against
//! `Ring` can be compared with closed-form expressions term by term.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Ring;

/// `Σ c_e xᵉ` keyed by exponent vectors; trailing zero exponents are dropped
/// so that monomials compare equal regardless of how many variables exist.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(BTreeMap<Vec<u16>, i64>);

impl IntPoly {
    /// The variable `x_index`.
    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Self(BTreeMap::from([(e, 1)]))
    }

    pub fn constant(c: i64) -> Self {
        Self(BTreeMap::from([(Vec::new(), c)])).clean()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u16], i64)> {
        self.0.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    fn clean(mut self) -> Self {
        self.0.retain(|_, c| *c != 0);
        self
    }
}

impl Add for IntPoly {
    type Output = Self;

    fn add(mut self, b: Self) -> Self {
        for (e, c) in b.0 {
            *self.0.entry(e).or_insert(0) += c;
        }
        self.clean()
    }
}

impl Sub for IntPoly {
    type Output = Self;

    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for IntPoly {
    type Output = Self;

    fn neg(self) -> Self {
        Self(self.0.into_iter().map(|(e, c)| (e, -c)).collect())
    }
}

impl Mul for IntPoly {
    type Output = Self;

    fn mul(self, b: Self) -> Self {
        let mut out = BTreeMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &b.0 {
                let n = ea.len().max(eb.len());
                let mut e: Vec<u16> = (0..n)
                    .map(|i| ea.get(i).copied().unwrap_or(0) + eb.get(i).copied().unwrap_or(0))
                    .collect();
                while e.last() == Some(&0) {
                    e.pop();
                }
                *out.entry(e).or_insert(0) += ca * cb;
            }
        }
        Self(out).clean()
    }
}

impl Zero for IntPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for IntPoly {
    fn one() -> Self {
        Self::constant(1)
    }
}

impl Ring for IntPoly {
    fn from_i64(n: i64) -> Self {
        Self::constant(n)
    }
}
