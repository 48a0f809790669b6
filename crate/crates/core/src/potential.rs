//! Compactly supported, piecewise-analytic complex potentials.
//!
//! A [`Potential`] is an ordered list of half-open pieces `[a, b)`, each
//! carrying a closed-form primitive whose derivatives are available exactly.
//! Values at internal boundaries are right limits; [`Potential::endpoint_jet`]
//! exposes both one-sided limits.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Deepest derivative exposed by [`Potential::endpoint_jet`].
pub const MAX_JET_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind {
    Constant(C64),
    /// `Σ_j coeffs[j] (x − origin)^j`.
    Polynomial {
        origin: f64,
        coeffs: Vec<C64>,
    },
    /// `amplitude · e^{i wavevector x}`.
    Exponential {
        amplitude: C64,
        wavevector: f64,
    },
    /// `amplitude · exp(−(x − center)² / 2 width²)`.
    Gaussian {
        amplitude: C64,
        center: f64,
        width: f64,
    },
    /// Pointwise sum, produced where superposed potentials share an interval.
    Sum(Vec<PieceKind>),
}

impl PieceKind {
    pub fn value(&self, x: f64) -> C64 {
        match self {
            PieceKind::Constant(c) => *c,
            PieceKind::Polynomial { origin, coeffs } => {
                let t = x - origin;
                coeffs
                    .iter()
                    .rev()
                    .fold(C64::new(0.0, 0.0), |acc, &c| acc * t + c)
            }
            PieceKind::Exponential {
                amplitude,
                wavevector,
            } => amplitude * C64::new(0.0, wavevector * x).exp(),
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let u = (x - center) / width;
                amplitude * (-0.5 * u * u).exp()
            }
            PieceKind::Sum(terms) => terms.iter().map(|t| t.value(x)).sum(),
        }
    }

    /// `[g(x), g′(x), …, g⁽ᵒʳᵈᵉʳ⁾(x)]` in closed form.
    pub fn derivatives(&self, x: f64, order: usize) -> Vec<C64> {
        let zero = C64::new(0.0, 0.0);
        match self {
            PieceKind::Constant(c) => {
                let mut out = vec![zero; order + 1];
                out[0] = *c;
                out
            }
            PieceKind::Polynomial { origin, coeffs } => {
                let t = x - origin;
                let mut current = coeffs.clone();
                let mut out = Vec::with_capacity(order + 1);
                for _ in 0..=order {
                    out.push(current.iter().rev().fold(zero, |acc, &c| acc * t + c));
                    current = current
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, &c)| c * j as f64)
                        .collect();
                }
                out
            }
            PieceKind::Exponential {
                amplitude,
                wavevector,
            } => {
                let base = amplitude * C64::new(0.0, wavevector * x).exp();
                let ik = C64::new(0.0, *wavevector);
                (0..=order).map(|n| base * ik.powu(n as u32)).collect()
            }
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            } => {
                // d^n/dx^n e^{−u²/2} = (−1/s)^n He_n(u) e^{−u²/2}
                let u = (x - center) / width;
                let envelope = amplitude * (-0.5 * u * u).exp();
                let mut he = vec![1.0, u];
                for n in 1..order {
                    let next = u * he[n] - n as f64 * he[n - 1];
                    he.push(next);
                }
                (0..=order)
                    .map(|n| envelope * he[n] * (-1.0 / width).powi(n as i32))
                    .collect()
            }
            PieceKind::Sum(terms) => terms.iter().fold(vec![zero; order + 1], |mut acc, t| {
                for (a, d) in acc.iter_mut().zip(t.derivatives(x, order)) {
                    *a += d;
                }
                acc
            }),
        }
    }

    /// Kind of `x ↦ self(x − d)`.
    pub fn translated(&self, d: f64) -> Self {
        match self {
            PieceKind::Constant(c) => PieceKind::Constant(*c),
            PieceKind::Polynomial { origin, coeffs } => PieceKind::Polynomial {
                origin: origin + d,
                coeffs: coeffs.clone(),
            },
            PieceKind::Exponential {
                amplitude,
                wavevector,
            } => PieceKind::Exponential {
                amplitude: amplitude * C64::new(0.0, -wavevector * d).exp(),
                wavevector: *wavevector,
            },
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            } => PieceKind::Gaussian {
                amplitude: *amplitude,
                center: center + d,
                width: *width,
            },
            PieceKind::Sum(terms) => {
                PieceKind::Sum(terms.iter().map(|t| t.translated(d)).collect())
            }
        }
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        match self {
            PieceKind::Constant(c) => PieceKind::Constant(alpha * c),
            PieceKind::Polynomial { origin, coeffs } => PieceKind::Polynomial {
                origin: *origin,
                coeffs: coeffs.iter().map(|c| alpha * c).collect(),
            },
            PieceKind::Exponential {
                amplitude,
                wavevector,
            } => PieceKind::Exponential {
                amplitude: alpha * amplitude,
                wavevector: *wavevector,
            },
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            } => PieceKind::Gaussian {
                amplitude: alpha * amplitude,
                center: *center,
                width: *width,
            },
            PieceKind::Sum(terms) => {
                PieceKind::Sum(terms.iter().map(|t| t.scaled(alpha)).collect())
            }
        }
    }

    fn is_finite(&self) -> bool {
        let fin = |c: &C64| c.re.is_finite() && c.im.is_finite();
        match self {
            PieceKind::Constant(c) => fin(c),
            PieceKind::Polynomial { origin, coeffs } => {
                origin.is_finite() && coeffs.iter().all(fin)
            }
            PieceKind::Exponential {
                amplitude,
                wavevector,
            } => fin(amplitude) && wavevector.is_finite(),
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            } => fin(amplitude) && center.is_finite() && width.is_finite() && *width > 0.0,
            PieceKind::Sum(terms) => terms.iter().all(PieceKind::is_finite),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPiece {
    pub start: f64,
    pub end: f64,
    pub kind: PieceKind,
}

impl PotentialPiece {
    pub fn new(start: f64, end: f64, kind: PieceKind) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::InvalidArgument(format!(
                "piece interval [{start}, {end}) must be finite with start < end"
            )));
        }
        if !kind.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "piece on [{start}, {end}) has non-finite or invalid parameters"
            )));
        }
        Ok(Self { start, end, kind })
    }

    pub fn constant(start: f64, end: f64, value: C64) -> Result<Self> {
        Self::new(start, end, PieceKind::Constant(value))
    }

    /// Polynomial with coefficients in powers of `(x − start)`.
    pub fn polynomial(start: f64, end: f64, coeffs: Vec<C64>) -> Result<Self> {
        Self::new(
            start,
            end,
            PieceKind::Polynomial {
                origin: start,
                coeffs,
            },
        )
    }

    pub fn exponential(start: f64, end: f64, amplitude: C64, wavevector: f64) -> Result<Self> {
        Self::new(
            start,
            end,
            PieceKind::Exponential {
                amplitude,
                wavevector,
            },
        )
    }

    pub fn gaussian(start: f64, end: f64, amplitude: C64, center: f64, width: f64) -> Result<Self> {
        Self::new(
            start,
            end,
            PieceKind::Gaussian {
                amplitude,
                center,
                width,
            },
        )
    }

    pub fn contains(&self, x: f64) -> bool {
        self.start <= x && x < self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// How two supports `I₁`, `I₂` are arranged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportRelation {
    /// `sup I₁ <= inf I₂`.
    StrictlyPrecedes,
    /// `I₁ ∩ I₂ = [start, start + length]`, `length > 0`, and `I₁ ∖ I₂` lies
    /// to the left of `I₂`.
    WeaklyPrecedes {
        start: f64,
        length: f64,
    },
    Other,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Potential {
    pieces: Vec<PotentialPiece>,
}

impl Potential {
    /// Sorts the pieces and rejects overlapping intervals.
    pub fn new(mut pieces: Vec<PotentialPiece>) -> Result<Self> {
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        for w in pieces.windows(2) {
            if w[1].start < w[0].end {
                return Err(Error::InvalidArgument(format!(
                    "pieces [{}, {}) and [{}, {}) overlap",
                    w[0].start, w[0].end, w[1].start, w[1].end
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(piece: PotentialPiece) -> Self {
        Self {
            pieces: vec![piece],
        }
    }

    pub fn pieces(&self) -> &[PotentialPiece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Closed hull `[x₋, x₊]` of the pieces.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((self.pieces.first()?.start, self.pieces.last()?.end))
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        self.piece_at(x, Side::Right)
            .map_or(C64::new(0.0, 0.0), |p| p.kind.value(x))
    }

    fn piece_at(&self, x: f64, side: Side) -> Option<&PotentialPiece> {
        self.pieces.iter().find(|p| match side {
            Side::Right => p.start <= x && x < p.end,
            Side::Left => p.start < x && x <= p.end,
        })
    }

    /// One-sided jet at `x0` from the piece covering `[x0, x0+δ)` (right) or
    /// `(x0−δ, x0]` (left); zero when no piece covers that side.
    pub fn endpoint_jet(&self, x0: f64, side: Side, order: usize) -> Result<Jet<C64>> {
        if order > MAX_JET_ORDER {
            return Err(Error::JetOrder {
                needed: order,
                available: MAX_JET_ORDER,
            });
        }
        if !x0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "jet point {x0} is not finite"
            )));
        }
        Ok(match self.piece_at(x0, side) {
            Some(p) => Jet::new(p.kind.derivatives(x0, order)),
            None => Jet::zero(order),
        })
    }

    /// `θ(x − x1) θ(x2 − x) v(x)`; infinite bounds are allowed.
    pub fn truncate(&self, x1: f64, x2: f64) -> Result<Self> {
        if x1.is_nan() || x2.is_nan() || x1 > x2 {
            return Err(Error::InvalidArgument(format!(
                "truncation window [{x1}, {x2}] is empty or invalid"
            )));
        }
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| {
                let start = p.start.max(x1);
                let end = p.end.min(x2);
                (start < end).then(|| PotentialPiece {
                    start,
                    end,
                    kind: p.kind.clone(),
                })
            })
            .collect();
        Ok(Self { pieces })
    }

    /// Potential `x ↦ v(x − d)`.
    pub fn translate(&self, d: f64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| PotentialPiece {
                    start: p.start + d,
                    end: p.end + d,
                    kind: p.kind.translated(d),
                })
                .collect(),
        }
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| PotentialPiece {
                    start: p.start,
                    end: p.end,
                    kind: p.kind.scaled(alpha),
                })
                .collect(),
        }
    }

    /// Pointwise sum `v₁ + v₂`, refined at every breakpoint of either term.
    pub fn superpose(&self, other: &Self) -> Self {
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .chain(&other.pieces)
            .flat_map(|p| [p.start, p.end])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let mid = 0.5 * (l + r);
            let kinds: Vec<PieceKind> = self
                .pieces
                .iter()
                .chain(&other.pieces)
                .filter(|p| p.contains(mid))
                .map(|p| p.kind.clone())
                .collect();
            let kind = match kinds.len() {
                0 => continue,
                1 => kinds.into_iter().next().unwrap(),
                _ => PieceKind::Sum(kinds),
            };
            pieces.push(PotentialPiece {
                start: l,
                end: r,
                kind,
            });
        }
        Self { pieces }
    }

    /// Pieces intersected with `[x1, x2]`, as `(start, end, kind)` triples.
    pub fn segments(&self, x1: f64, x2: f64) -> impl Iterator<Item = (f64, f64, &PieceKind)> {
        self.pieces.iter().filter_map(move |p| {
            let a = p.start.max(x1);
            let b = p.end.min(x2);
            (a < b).then_some((a, b, &p.kind))
        })
    }

    /// Largest `|v|` over a uniform grid of `[x1, x2]` (closed, with left limit at `x2`).
    pub fn sampled_max_abs(&self, x1: f64, x2: f64, samples: usize) -> f64 {
        let n = samples.max(2);
        let mut m: f64 = 0.0;
        for j in 0..n {
            let x = x1 + (x2 - x1) * j as f64 / (n - 1) as f64;
            let v = if j == n - 1 {
                self.piece_at(x, Side::Left)
                    .map_or(C64::new(0.0, 0.0), |p| p.kind.value(x))
            } else {
                self.evaluate(x)
            };
            m = m.max(v.norm());
        }
        m
    }

    /// `∫ (1 + |x|) |v(x)| dx` by adaptive Simpson quadrature.
    pub fn faddeev_norm(&self, quadrature_tol: f64) -> Result<f64> {
        if !(quadrature_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature tolerance must be positive".into(),
            ));
        }
        let mut total = 0.0;
        for p in &self.pieces {
            let g = |x: f64| (1.0 + x.abs()) * p.kind.value(x).norm();
            // |x| has a kink at the origin
            let mut spans = vec![(p.start, p.end)];
            if p.start < 0.0 && 0.0 < p.end {
                spans = vec![(p.start, 0.0), (0.0, p.end)];
            }
            for (a, b) in spans {
                total += adaptive_simpson(&g, a, b, quadrature_tol / self.pieces.len() as f64)?;
            }
        }
        Ok(total)
    }

    /// Classifies the arrangement of `self` (as `v₁`) against `other` (`v₂`).
    pub fn support_relation(&self, other: &Self) -> Result<SupportRelation> {
        let (a1, b1) = self.support().ok_or(Error::EmptySupport)?;
        let (a2, b2) = other.support().ok_or(Error::EmptySupport)?;
        Ok(if b1 <= a2 {
            SupportRelation::StrictlyPrecedes
        } else if a1 <= a2 && b1 <= b2 {
            SupportRelation::WeaklyPrecedes {
                start: a2,
                length: b1 - a2,
            }
        } else {
            SupportRelation::Other
        })
    }
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Quadrature {
                estimate: left + right,
                error: delta.abs(),
            });
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}
