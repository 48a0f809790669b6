//! Composition of transfer matrices.
//!
//! For supports that do not overlap the transfer matrix of `v₁ + v₂` is the
//! product `M₂ M₁`. When the supports share a segment of length `ℓ` the rule
//! becomes `M = M₂ S(ε) M₁` with `ε = kℓ`. The correction `S` is available
//! exactly, from three integrations over the overlap, and as a power series
//! in `ℓ` whose coefficients depend only on the endpoint jets `v₁⁽ʲ⁾(ℓ)` and
//! `v₂⁽ʲ⁾(0)`. The series starts at `ℓ³` when both potentials jump at the
//! overlap endpoints, at `ℓ⁴` when one of them is continuous there and at
//! `ℓ⁵` when both are.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mat2::UNIMODULAR_TOL;
use crate::potential::{Potential, Side, SupportRelation, MAX_JET_ORDER};
use crate::propagator::{full_transfer, transfer_matrix, PropagatorConfig};
use crate::scattering::translate_transfer;
use crate::{JetC, Mat2C, C64};

/// Highest power of `ℓ` with known series coefficients.
pub const MAX_SERIES_ORDER: usize = 6;

/// Errors below this are treated as round-off and left out of slope fits.
pub const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Relative threshold below which an endpoint value counts as zero.
pub const ZERO_ENDPOINT_REL: f64 = 1e-12;

/// Endpoint data of an overlapping pair normalized to the overlap `[0, ℓ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndpointData {
    /// Left-limit jet of `v₁` at `x = ℓ`.
    pub v1_jet: JetC,
    /// Right-limit jet of `v₂` at `x = 0`.
    pub v2_jet: JetC,
    pub k: f64,
    pub ell: f64,
}

impl EndpointData {
    /// Reads the jets off an overlapping (or touching) pair. Jet values do not
    /// depend on where the overlap sits, so no translation is needed here.
    pub fn from_pair(v1: &Potential, v2: &Potential, k: f64) -> Result<Self> {
        let (start, ell) = overlap(v1, v2)?;
        Ok(Self {
            v1_jet: v1.endpoint_jet(start + ell, Side::Left, MAX_JET_ORDER)?,
            v2_jet: v2.endpoint_jet(start, Side::Right, MAX_JET_ORDER)?,
            k,
            ell,
        })
    }

    pub fn eps(&self) -> f64 {
        self.k * self.ell
    }

    /// Note attached when `ε = kℓ > 1`, outside the small-ε regime.
    pub fn validity_warning(&self) -> Option<String> {
        (self.eps() > 1.0).then(|| {
            format!(
                "eps = k*ell = {:.4} exceeds 1; the overlap series is a small-eps expansion",
                self.eps()
            )
        })
    }
}

/// `(start, ℓ)` of the overlap; `ℓ = 0` for touching supports.
fn overlap(v1: &Potential, v2: &Potential) -> Result<(f64, f64)> {
    match v1.support_relation(v2)? {
        SupportRelation::WeaklyPrecedes { start, length } => Ok((start, length)),
        SupportRelation::StrictlyPrecedes => {
            let (_, b1) = v1.support().ok_or(Error::EmptySupport)?;
            let (a2, _) = v2.support().ok_or(Error::EmptySupport)?;
            if b1 == a2 {
                Ok((a2, 0.0))
            } else {
                Err(Error::Relation(format!(
                    "supports are separated by a gap of {}",
                    a2 - b1
                )))
            }
        }
        SupportRelation::Other => Err(Error::Relation(
            "v1 must start no later and end no later than v2".into(),
        )),
    }
}

/// Smoothness of the pair at the overlap endpoints, which fixes the leading
/// power of `S − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    DiscontinuousBoth,
    /// `v₁(ℓ) = 0`: `v₁` is continuous where it ends.
    V1Continuous,
    /// `v₂(0) = 0`: `v₂` is continuous where it starts.
    V2Continuous,
    ContinuousBoth,
}

impl Regime {
    /// Leading power of `ℓ` in `S − 1` for generic higher derivatives.
    pub fn leading_order(self) -> usize {
        match self {
            Regime::DiscontinuousBoth => 3,
            Regime::V1Continuous | Regime::V2Continuous => 4,
            Regime::ContinuousBoth => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::DiscontinuousBoth => "discontinuous_both",
            Regime::V1Continuous => "v1_continuous",
            Regime::V2Continuous => "v2_continuous",
            Regime::ContinuousBoth => "continuous_both",
        }
    }

    /// Classifies from the endpoint values; `scale` is a typical size of the
    /// potentials, and values below `ZERO_ENDPOINT_REL · scale` count as zero.
    pub fn classify(d: &EndpointData, scale: f64) -> Self {
        let cut = ZERO_ENDPOINT_REL * scale;
        let v1_zero = d.v1_jet.value().norm() <= cut;
        let v2_zero = d.v2_jet.value().norm() <= cut;
        match (v1_zero, v2_zero) {
            (false, false) => Regime::DiscontinuousBoth,
            (true, false) => Regime::V1Continuous,
            (false, true) => Regime::V2Continuous,
            (true, true) => Regime::ContinuousBoth,
        }
    }
}

/// Typical size of a pair: the largest sampled `|v|` over both supports.
pub fn pair_scale(v1: &Potential, v2: &Potential) -> f64 {
    [v1, v2]
        .iter()
        .filter_map(|p| p.support().map(|(a, b)| p.sampled_max_abs(a, b, 257)))
        .fold(0.0, f64::max)
}

/// `M₂ M₁`, valid when the support of `v₁` lies to the left of that of `v₂`.
pub fn compose_disjoint(m1: &Mat2C, m2: &Mat2C) -> Mat2C {
    *m2 * *m1
}

/// `M₊ M₀ M₋` for the pieces of `v` on `x < 0`, `[0, ℓ]` and `x > ℓ`.
pub fn split_compose(v: &Potential, k: f64, ell: f64, cfg: &PropagatorConfig) -> Result<Mat2C> {
    let (a, b) = v.support().ok_or(Error::EmptySupport)?;
    if !(ell >= 0.0 && a <= 0.0 && ell <= b) {
        return Err(Error::InvalidArgument(format!(
            "support [{a}, {b}] does not contain [0, {ell}]"
        )));
    }
    let minus = full_transfer(&v.truncate(f64::NEG_INFINITY, 0.0)?, k, cfg)?.matrix;
    let middle = full_transfer(&v.truncate(0.0, ell)?, k, cfg)?.matrix;
    let plus = full_transfer(&v.truncate(ell, f64::INFINITY)?, k, cfg)?.matrix;
    Ok(plus * middle * minus)
}

/// `S = M₂⁻¹ M M₁⁻¹` with every factor taken over the overlap, for the pair
/// translated so that the overlap is `[0, ℓ]`. Identity for touching supports.
pub fn exact_overlap_correction(
    v1: &Potential,
    v2: &Potential,
    k: f64,
    cfg: &PropagatorConfig,
) -> Result<Mat2C> {
    let (start, ell) = overlap(v1, v2)?;
    if ell == 0.0 {
        return Ok(Mat2C::identity());
    }
    let (v1, v2) = (v1.translate(-start), v2.translate(-start));
    let sum = v1.superpose(&v2);
    let m1 = transfer_matrix(&v1, k, 0.0, ell, cfg)?.matrix;
    let m2 = transfer_matrix(&v2, k, 0.0, ell, cfg)?.matrix;
    let m = transfer_matrix(&sum, k, 0.0, ell, cfg)?.matrix;
    Ok(m2.inverse_unimodular(UNIMODULAR_TOL)? * m * m1.inverse_unimodular(UNIMODULAR_TOL)?)
}

/// Coefficients `Bₚ` of `S = Σ_{p ≤ 6} Bₚ ℓᵖ` in terms of the endpoint jets.
/// Missing jet entries are read as zero; see [`series_overlap_correction`] for
/// the depth check.
pub fn series_coefficients(d: &EndpointData) -> [Mat2C; MAX_SERIES_ORDER + 1] {
    let jet = |j: &JetC| {
        let c = j.zero_extended(3).into_coeffs();
        [c[0], c[1], c[2], c[3]]
    };
    let [a0, a1, a2, a3] = jet(&d.v1_jet);
    let [b0, b1, b2, b3] = jet(&d.v2_jet);
    let k = d.k;
    let i = C64::i();
    let (k0, s1, s2) = (Mat2C::k0(), Mat2C::sigma1(), Mat2C::sigma2());
    let comb = |c1: C64, c2: C64, ck: C64| s1.scale(&c1) + s2.scale(&c2) + k0.scale(&(i * ck));

    let b3_term = comb(C64::new(0.0, 0.0), C64::new(0.0, 0.0), a0 * b0)
        .scale(&C64::new(-1.0 / (6.0 * k), 0.0));
    let b4_term = comb(4.0 * k * a0 * b0, C64::new(0.0, 0.0), a0 * b1 - a1 * b0)
        .scale(&C64::new(-1.0 / (24.0 * k), 0.0));
    let b5_term = comb(
        k * (6.0 * a0 * b1 - 4.0 * a1 * b0),
        8.0 * k * k * a0 * b0,
        -4.0 * k * k * a0 * b0 - a1 * b1 + a0 * b2 + a2 * b0 + 4.0 * (a0 * b0 * b0 + a0 * a0 * b0),
    )
    .scale(&C64::new(-1.0 / (120.0 * k), 0.0));
    let b6_term = comb(
        -32.0 * k.powi(3) * a0 * b0 - 6.0 * k * a1 * b1
            + 4.0 * k * (2.0 * a0 * b2 + a2 * b0)
            + 16.0 * k * a0 * b0 * (2.0 * a0 + b0),
        4.0 * k * k * (5.0 * a0 * b1 - 2.0 * a1 * b0),
        4.0 * k * k * (a1 * b0 - a0 * b1) + a2 * b1 - a1 * b2 + a0 * b3 - a3 * b0
            + 4.0 * (a0 * a0 * b1 - a1 * b0 * b0)
            - 14.0 * a0 * b0 * (a1 - b1),
    )
    .scale(&C64::new(-1.0 / (720.0 * k), 0.0));
    [
        Mat2C::identity(),
        Mat2C::zero(),
        Mat2C::zero(),
        b3_term,
        b4_term,
        b5_term,
        b6_term,
    ]
}

/// `S` through `ℓ^order` (`order <= 6`; orders below 3 give the identity).
pub fn series_overlap_correction(d: &EndpointData, order: usize) -> Result<Mat2C> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::InvalidArgument(format!(
            "series order {order} exceeds the available {MAX_SERIES_ORDER}"
        )));
    }
    if !(d.k > 0.0 && d.ell >= 0.0 && d.ell.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need k > 0 and ell >= 0, got k = {}, ell = {}",
            d.k, d.ell
        )));
    }
    let need = order.saturating_sub(3);
    for j in [&d.v1_jet, &d.v2_jet] {
        if j.order() < need {
            return Err(Error::JetOrder {
                needed: need,
                available: j.order(),
            });
        }
    }
    Ok(series_coefficients(d)[..=order]
        .iter()
        .enumerate()
        .fold(Mat2C::zero(), |acc, (p, b)| {
            acc + b.scale(&C64::new(d.ell.powi(p as i32), 0.0))
        }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Series(usize),
}

/// `M₂ S M₁` for a strictly or weakly preceding pair.
pub fn generalized_compose(
    v1: &Potential,
    v2: &Potential,
    k: f64,
    method: Method,
    cfg: &PropagatorConfig,
) -> Result<Mat2C> {
    let m1 = full_transfer(v1, k, cfg)?.matrix;
    let m2 = full_transfer(v2, k, cfg)?.matrix;
    let s = match v1.support_relation(v2)? {
        SupportRelation::StrictlyPrecedes => Mat2C::identity(),
        SupportRelation::WeaklyPrecedes { start, .. } => {
            let normalized = match method {
                Method::Exact => exact_overlap_correction(v1, v2, k, cfg)?,
                Method::Series(order) => {
                    series_overlap_correction(&EndpointData::from_pair(v1, v2, k)?, order)?
                }
            };
            translate_transfer(&normalized, k, start)
        }
        SupportRelation::Other => return Err(overlap(v1, v2).unwrap_err()),
    };
    Ok(m2 * s * m1)
}

/// One overlap length of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSample {
    pub ell: f64,
    pub eps: f64,
    pub s_exact: Mat2C,
    /// Series through `ℓⁿ` for `n = 2..=6` (`n = 2` is the identity).
    pub s_series: BTreeMap<usize, Mat2C>,
    /// `‖S_exact − S_series(n)‖`, max-entry norm.
    pub errors: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    pub k: f64,
    pub order: usize,
    pub regime: Regime,
    pub samples: Vec<OverlapSample>,
    /// Log-log slope of the error for the requested order.
    pub fitted_slope: f64,
    /// Slopes for every order `2..=6`; `None` where too few points clear the floor.
    pub slopes: BTreeMap<usize, Option<f64>>,
    pub warnings: Vec<String>,
}

impl OverlapReport {
    /// Slope the theory predicts for the requested order and regime.
    pub fn expected_slope(&self) -> f64 {
        expected_slope(self.order, self.regime)
    }
}

/// `max(order + 1, leading order of the regime)`.
pub fn expected_slope(order: usize, regime: Regime) -> f64 {
    (order + 1).max(regime.leading_order()) as f64
}

/// Ordinary least-squares slope of `ln err` against `ln ℓ`, skipping errors
/// below [`ERROR_FLOOR`]. Needs at least four usable points.
pub fn fit_loglog_slope(ells: &[f64], errors: &[f64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = ells
        .iter()
        .zip(errors)
        .filter(|(l, e)| **l > 0.0 && e.is_finite() && **e >= ERROR_FLOOR)
        .map(|(l, e)| (l.ln(), e.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::DegenerateSweep(format!(
            "{} of {} points lie above the round-off floor; need 4",
            pts.len(),
            ells.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateSweep(
            "all overlap lengths coincide".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// Places `v₁` so that its right end lies `ℓ` past the left end of `v₂`.
///
/// The endpoint jets of the pair are then the same for every `ℓ`, so the
/// sweep isolates the dependence on the overlap length.
pub fn pair_with_overlap(v1: &Potential, v2: &Potential, ell: f64) -> Result<Potential> {
    let (a1, b1) = v1.support().ok_or(Error::EmptySupport)?;
    let (a2, b2) = v2.support().ok_or(Error::EmptySupport)?;
    if !(ell >= 0.0 && ell <= b1 - a1 && ell <= b2 - a2) {
        return Err(Error::InvalidArgument(format!(
            "overlap {ell} exceeds a support length ({} or {})",
            b1 - a1,
            b2 - a2
        )));
    }
    Ok(v1.translate(a2 + ell - b1))
}

/// Exact against series corrections over a range of overlap lengths.
///
/// `v₁` is translated for every `ℓ` (see [`pair_with_overlap`]); `v₂` stays
/// fixed. Lengths must be positive, at least four, span a decade and keep
/// `kℓ < 1`.
pub fn convergence_sweep(
    v1: &Potential,
    v2: &Potential,
    k: f64,
    ell_values: &[f64],
    order: usize,
    cfg: &PropagatorConfig,
) -> Result<OverlapReport> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::InvalidArgument(format!(
            "series order {order} exceeds the available {MAX_SERIES_ORDER}"
        )));
    }
    if ell_values.len() < 4 {
        return Err(Error::DegenerateSweep(format!(
            "{} overlap lengths given; need at least 4",
            ell_values.len()
        )));
    }
    let lo = ell_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ell_values.iter().copied().fold(0.0, f64::max);
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::InvalidArgument(
            "overlap lengths must be positive and finite".into(),
        ));
    }
    if hi < 10.0 * lo {
        return Err(Error::DegenerateSweep(format!(
            "overlap lengths span [{lo}, {hi}], less than a decade"
        )));
    }
    if k * hi >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "k * ell = {} must stay below 1 throughout the sweep",
            k * hi
        )));
    }

    let samples = ell_values
        .par_iter()
        .map(|&ell| {
            let v1s = pair_with_overlap(v1, v2, ell)?;
            let d = EndpointData::from_pair(&v1s, v2, k)?;
            let s_exact = exact_overlap_correction(&v1s, v2, k, cfg)?;
            let mut s_series = BTreeMap::new();
            let mut errors = BTreeMap::new();
            for n in 2..=MAX_SERIES_ORDER {
                let s = series_overlap_correction(&d, n)?;
                errors.insert(n, s_exact.dist(&s));
                s_series.insert(n, s);
            }
            Ok(OverlapSample {
                ell,
                eps: k * ell,
                s_exact,
                s_series,
                errors,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let d0 = EndpointData::from_pair(&pair_with_overlap(v1, v2, lo)?, v2, k)?;
    let regime = Regime::classify(&d0, pair_scale(v1, v2));
    let ells: Vec<f64> = samples.iter().map(|s| s.ell).collect();
    let slope_of = |n: usize| {
        let errs: Vec<f64> = samples.iter().map(|s| s.errors[&n.max(2)]).collect();
        fit_loglog_slope(&ells, &errs)
    };
    let slopes = (2..=MAX_SERIES_ORDER)
        .map(|n| (n, slope_of(n).ok()))
        .collect();
    let fitted_slope = slope_of(order)?;
    Ok(OverlapReport {
        k,
        order,
        regime,
        samples,
        fitted_slope,
        slopes,
        warnings: Vec::new(),
    })
}
