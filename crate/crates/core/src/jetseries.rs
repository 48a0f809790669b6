//! Taylor coefficients of the overlap correction from truncated jets.
//!
//! In the rotated frame `U(τ) = e^{iτσ₃} M(τ, 0)` the evolution reads
//! `i U̇ = (w K₀ − σ₃) U`. Writing `f = 2w − 1` and
//! `D = [[∂τ, f], [1, ∂τ]]`, the derivatives of `U` at `τ = 0` follow from
//! `dₙ± = [1 ±i] Dⁿ [0 1]ᵀ`, which fixes the coefficient matrices `Cₙ` of
//! `U(ε) = Σ εⁿ/n! Cₙ`. The correction is then
//! `S(ε) = U₂(ε)⁻¹ U(ε) U₁(ε)⁻¹ e^{iεσ₃}`.
//!
//! Everything here is generic over [`Ring`]/[`ComplexScalar`], so the same
//! code runs on numbers, on power series in `ε` (endpoint re-expansion) and
//! on exact polynomials in tests.

use std::ops::Mul;

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::mat2::Mat2;
use crate::scalar::{binomial, factorial, ComplexScalar, Real, Ring};
use crate::series::PowerSeries;
use crate::{Mat2C, C64};

/// Default truncation order of the matrix series.
pub const DEFAULT_N_MAX: usize = 8;

/// The auxiliary pair `(pₙ, qₙ)` as jets at `τ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPolyPair<T> {
    pub p: Jet<T>,
    pub q: Jet<T>,
}

impl<T: Ring> JetPolyPair<T> {
    /// `(pₙ₊₁, qₙ₊₁) = (ṗₙ + f qₙ, pₙ + q̇ₙ)`.
    pub fn step(&self, f: &Jet<T>) -> Result<Self> {
        let dp = self.p.differentiate()?;
        let dq = self.q.differentiate()?;
        let order = dp.order();
        let fq = f
            .product(&self.q)
            .truncated(order.min(f.order().min(self.q.order())))?;
        let p = truncate_to(&dp, order)? + truncate_to(&fq, order)?;
        let q = truncate_to(&self.p, order)? + dq;
        Ok(Self { p, q })
    }
}

fn truncate_to<T: Ring>(j: &Jet<T>, order: usize) -> Result<Jet<T>> {
    j.truncated(order.min(j.order()))
}

/// Real and imaginary parts `(Pₙ, Qₙ) = (pₙ₊₁(0), qₙ₊₁(0))` of `dₙ± = Pₙ ± iQₙ`
/// for `n = 0..=n_max`. Needs `f` to order `n_max − 1`.
pub fn pq_recursion<T: Ring>(f: &Jet<T>, n_max: usize) -> Result<Vec<(T, T)>> {
    if n_max >= 1 && f.order() + 1 < n_max {
        return Err(Error::JetOrder {
            needed: n_max - 1,
            available: f.order(),
        });
    }
    let mut pair = JetPolyPair {
        p: Jet::zero(n_max),
        q: Jet::constant(T::one(), n_max),
    };
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        out.push((pair.p.value().clone(), pair.q.value().clone()));
        if n < n_max {
            pair = pair.step(f)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DCoefficients<T> {
    pub plus: Vec<T>,
    pub minus: Vec<T>,
}

/// `d₀±, …, d±_{n_max}`.
pub fn d_recursion<T: ComplexScalar>(f: &Jet<T>, n_max: usize) -> Result<DCoefficients<T>> {
    let pq = pq_recursion(f, n_max)?;
    let i = T::i();
    let plus = pq
        .iter()
        .map(|(p, q)| p.clone() + i.clone() * q.clone())
        .collect();
    let minus = pq.into_iter().map(|(p, q)| p - i.clone() * q).collect();
    Ok(DCoefficients { plus, minus })
}

/// Truncated matrix series `Σ εⁿ/n! Aₙ`, stored as the `Aₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatSeries<T> {
    pub coeffs: Vec<Mat2<T>>,
}

impl<T: ComplexScalar> MatSeries<T> {
    pub fn identity(n_max: usize) -> Self {
        let mut coeffs = vec![Mat2::zero(); n_max + 1];
        coeffs[0] = Mat2::identity();
        Self { coeffs }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Series of `e^{iεσ₃}`: `Aₙ = diag(iⁿ, (−i)ⁿ)`.
    pub fn exp_i_sigma3(n_max: usize) -> Self {
        let i = T::i();
        let mut up = T::one();
        let mut down = T::one();
        let mut coeffs = Vec::with_capacity(n_max + 1);
        for _ in 0..=n_max {
            coeffs.push(Mat2::diag(up.clone(), down.clone()));
            up = up * i.clone();
            down = down * -i.clone();
        }
        Self { coeffs }
    }

    /// Coefficientwise `σ₂ Aₙᵀ σ₂`; for `U` this is the series of `U⁻¹`.
    pub fn sigma2_transpose(&self) -> Self {
        let s2 = Mat2::<T>::sigma2();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| s2.clone() * c.transpose() * s2.clone())
                .collect(),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<T: Ring> Mul for &MatSeries<T> {
    type Output = MatSeries<T>;

    /// `(AB)ₙ = Σⱼ C(n, j) Aⱼ Bₙ₋ⱼ`, truncated at the shorter series.
    fn mul(self, b: &MatSeries<T>) -> MatSeries<T> {
        let n_max = self.coeffs.len().min(b.coeffs.len()) - 1;
        let coeffs = (0..=n_max)
            .map(|n| {
                (0..=n).fold(Mat2::zero(), |acc, j| {
                    let term = self.coeffs[j].clone() * b.coeffs[n - j].clone();
                    acc + term.map(|x| x.scale_int(binomial(n, j)))
                })
            })
            .collect();
        MatSeries { coeffs }
    }
}

/// `C₀ = 1`, `Cₙ₊₁ = ½[[dₙ⁺ − i dₙ₊₁⁺, dₙ⁻ − i dₙ₊₁⁻], [dₙ⁺ + i dₙ₊₁⁺, dₙ⁻ + i dₙ₊₁⁻]]`.
pub fn c_matrices<T: ComplexScalar>(f: &Jet<T>, n_max: usize) -> Result<Vec<Mat2<T>>> {
    let d = d_recursion(f, n_max)?;
    let i = T::i();
    let half = T::from_real(T::Real::lit(0.5));
    let mut out = vec![Mat2::identity()];
    for n in 0..n_max {
        let (dp, dp1) = (d.plus[n].clone(), d.plus[n + 1].clone());
        let (dm, dm1) = (d.minus[n].clone(), d.minus[n + 1].clone());
        let m = Mat2::new(
            dp.clone() - i.clone() * dp1.clone(),
            dm.clone() - i.clone() * dm1.clone(),
            dp + i.clone() * dp1,
            dm + i.clone() * dm1,
        );
        out.push(m.scale(&half));
    }
    Ok(out)
}

/// Series of `U(ε)` for the potential whose `f = 2w − 1` jet at `0` is `f`.
pub fn u_series<T: ComplexScalar>(f: &Jet<T>, n_max: usize) -> Result<MatSeries<T>> {
    Ok(MatSeries {
        coeffs: c_matrices(f, n_max)?,
    })
}

/// Series of `U(ε)⁻¹`, coefficients `Čₙ = σ₂ Cₙᵀ σ₂`.
pub fn u_inverse_series<T: ComplexScalar>(u: &MatSeries<T>) -> MatSeries<T> {
    u.sigma2_transpose()
}

/// Smallest `f`-jet order that determines `S₀⁽ⁿ⁾` for all `n <= n_max`.
///
/// The coefficient of `εⁿ` in `S` involves `w`-derivatives only up to
/// `n − 3`; deeper entries cancel between the three `U` factors, so missing
/// derivatives may be padded with zeros without changing the result.
pub fn required_jet_order(n_max: usize) -> usize {
    n_max.saturating_sub(3)
}

/// `S₀⁽⁰⁾, …, S₀⁽ⁿ_max⁾` with `S(ε) = Σ εⁿ/n! S₀⁽ⁿ⁾`, from the `f`-jets of
/// the two potentials at `τ = 0` (`f = 2w − 1`). The combined potential has
/// `f = f₁ + f₂ + 1`.
pub fn s_series_from_jets<T: ComplexScalar>(
    f1: &Jet<T>,
    f2: &Jet<T>,
    n_max: usize,
) -> Result<Vec<Mat2<T>>> {
    let need = required_jet_order(n_max);
    for f in [f1, f2] {
        if f.order() < need {
            return Err(Error::JetOrder {
                needed: need,
                available: f.order(),
            });
        }
    }
    let depth = n_max.saturating_sub(1).max(f1.order()).max(f2.order());
    let f1 = f1.zero_extended(depth);
    let f2 = f2.zero_extended(depth);
    let f = f1.clone() + f2.clone() + Jet::constant(T::one(), depth);
    let u = u_series(&f, n_max)?;
    let u1_inv = u_inverse_series(&u_series(&f1, n_max)?);
    let u2_inv = u_inverse_series(&u_series(&f2, n_max)?);
    let s = &(&(&u2_inv * &u) * &u1_inv) * &MatSeries::exp_i_sigma3(n_max);
    Ok(s.coeffs)
}

/// Evaluates `Σ εⁿ/n! Aₙ`.
pub fn evaluate_series(coeffs: &[Mat2C], eps: f64) -> Mat2C {
    coeffs
        .iter()
        .enumerate()
        .fold(Mat2C::zero(), |acc, (n, a)| {
            acc + a.scale(&C64::new(eps.powi(n as i32) / factorial::<f64>(n), 0.0))
        })
}

/// Coefficients `Bₚ` of `S = Σ_p Bₚ ℓᵖ`, `p = 0..=n_max`, in terms of the
/// endpoint jets `v₁⁽ʲ⁾(ℓ)` and `v₂⁽ʲ⁾(0)` on an overlap `[0, ℓ]`.
///
/// `w₁`'s jet at `0` is obtained by re-expanding its jet at `ε = kℓ` in
/// powers of `ε`, which makes every `S₀⁽ⁿ⁾` a power series in `ε` itself.
/// With jets of order 3 the result is exact through `ℓ⁶`.
pub fn s_series_endpoint_form(
    v1_at_ell: &Jet<C64>,
    v2_at_0: &Jet<C64>,
    k: f64,
    n_max: usize,
) -> Result<Vec<Mat2C>> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber k = {k} must be positive"
        )));
    }
    let need = required_jet_order(n_max);
    for j in [v1_at_ell, v2_at_0] {
        if j.order() < need {
            return Err(Error::JetOrder {
                needed: need,
                available: j.order(),
            });
        }
    }
    type Ps = PowerSeries<f64>;
    // w⁽ʲ⁾ in the clock τ = kx is v⁽ʲ⁾ / 2k^{2+j}
    let w_jet = |v: &Jet<C64>| -> Jet<Ps> {
        Jet::new(
            v.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| Ps::constant(c / (2.0 * k.powi(2 + j as i32))))
                .collect(),
        )
    };
    let minus_eps = -Ps::variable(n_max);
    let w1_at_0 = w_jet(v1_at_ell).shift(&minus_eps);
    let w2_at_0 = w_jet(v2_at_0);
    let two = Ps::from_i64(2);
    let f_of = |w: Jet<Ps>| {
        let order = w.order();
        w.scale(&two) - Jet::constant(Ps::one(), order)
    };
    let s0 = s_series_from_jets(&f_of(w1_at_0), &f_of(w2_at_0), n_max)?;

    let mut by_eps = vec![Mat2C::zero(); n_max + 1];
    for (n, m) in s0.iter().enumerate() {
        let inv_fact = 1.0 / factorial::<f64>(n);
        for (p, slot) in by_eps.iter_mut().enumerate().skip(n) {
            let c = m.clone().map(|s| s.coeff(p - n) * inv_fact);
            *slot = *slot + c;
        }
    }
    Ok(by_eps
        .into_iter()
        .enumerate()
        .map(|(p, m)| m.scale(&C64::new(k.powi(p as i32), 0.0)))
        .collect())
}

/// `H = w K₀ − σ₃`, the generator in the rotated frame.
pub fn rotated_generator<F: Real>(w: Complex<F>) -> Mat2<Complex<F>> {
    Mat2::<Complex<F>>::k0().scale(&w) - Mat2::sigma3()
}

/// `f = 2w − 1` as a jet, from the jet of `w`.
pub fn f_jet<T: ComplexScalar>(w: &Jet<T>) -> Jet<T> {
    let order = w.order();
    w.scale(&T::from_i64(2)) - Jet::constant(T::one(), order)
}

/// Jet of `w(τ) = v(τ/k)/2k²` at the matching point, from the jet of `v`.
pub fn w_jet_from_v(v: &Jet<C64>, k: f64) -> Jet<C64> {
    Jet::new(
        v.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| c / (2.0 * k.powi(2 + j as i32)))
            .collect(),
    )
}
