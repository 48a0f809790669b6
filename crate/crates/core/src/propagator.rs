//! Transfer matrices from the matrix evolution equation
//! `i ∂τ M(τ, τ₁) = w(τ) K(τ) M(τ, τ₁)`, `M(τ₁, τ₁) = 1`, in the clock
//! `τ = kx` with `w(τ) = v(τ/k) / 2k²`.
//!
//! Integration restarts at every piece boundary so that discontinuities of
//! the potential never fall inside a step.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat2::UNIMODULAR_TOL;
use crate::potential::{PieceKind, Potential};
use crate::Mat2C;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Embedded Dormand–Prince 5(4) pair with error control.
    DormandPrince45,
    /// Classic RK4 with a fixed step in τ; for debugging only.
    FixedRk4 { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// First trial step as a fraction of each segment's τ-length.
    pub initial_step_fraction: f64,
    pub method: Method,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 2_000_000,
            initial_step_fraction: 0.01,
            method: Method::DormandPrince45,
        }
    }
}

impl PropagatorConfig {
    /// Tolerances close to double-precision round-off, for reference values.
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            ..Self::default()
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument(
                "max_steps must be at least 1".into(),
            ));
        }
        if !(self.initial_step_fraction > 0.0 && self.initial_step_fraction <= 1.0) {
            return Err(Error::InvalidArgument(
                "initial_step_fraction must lie in (0, 1]".into(),
            ));
        }
        if let Method::FixedRk4 { step } = self.method {
            if !(step > 0.0) {
                return Err(Error::InvalidArgument("fixed step must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferResult {
    pub matrix: Mat2C,
    pub k: f64,
    /// `|det M − 1|`; reported, never corrected.
    pub det_drift: f64,
    pub steps_taken: usize,
}

impl TransferResult {
    pub fn is_unimodular(&self) -> bool {
        self.det_drift <= UNIMODULAR_TOL
    }
}

/// Which of the two evolution equations to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    /// `i ∂τ M = H M`.
    Forward,
    /// `i ∂τ N = −Hᵀ N`, whose solution is `(M⁻¹)ᵀ`.
    InverseTranspose,
}

fn check_args(k: f64, x1: f64, x2: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber k = {k} must be positive"
        )));
    }
    if !(x1.is_finite() && x2.is_finite() && x1 <= x2) {
        return Err(Error::InvalidArgument(format!(
            "interval [{x1}, {x2}] must be finite and ordered"
        )));
    }
    Ok(())
}

/// `M(kx₂, kx₁)`: the transfer matrix of `v` truncated to `[x1, x2]`.
pub fn transfer_matrix(
    p: &Potential,
    k: f64,
    x1: f64,
    x2: f64,
    cfg: &PropagatorConfig,
) -> Result<TransferResult> {
    let (matrix, steps_taken) = evolve(p, k, x1, x2, cfg, Flow::Forward)?;
    Ok(TransferResult {
        matrix,
        k,
        det_drift: (matrix.det() - C64::new(1.0, 0.0)).norm(),
        steps_taken,
    })
}

/// Transfer matrix of the whole potential (identity for an empty one).
pub fn full_transfer(p: &Potential, k: f64, cfg: &PropagatorConfig) -> Result<TransferResult> {
    let (a, b) = p.support().unwrap_or((0.0, 0.0));
    transfer_matrix(p, k, a, b, cfg)
}

/// `N(kx₂)` solving `i ∂τ N = −H(τ)ᵀ N`, `N(kx₁) = 1`; equals `(M⁻¹)ᵀ`.
pub fn inverse_transpose_evolution(
    p: &Potential,
    k: f64,
    x1: f64,
    x2: f64,
    cfg: &PropagatorConfig,
) -> Result<Mat2C> {
    evolve(p, k, x1, x2, cfg, Flow::InverseTranspose).map(|(m, _)| m)
}

fn evolve(
    p: &Potential,
    k: f64,
    x1: f64,
    x2: f64,
    cfg: &PropagatorConfig,
    flow: Flow,
) -> Result<(Mat2C, usize)> {
    check_args(k, x1, x2)?;
    cfg.validate()?;
    let mut state = Mat2C::identity();
    let mut steps = 0;
    for (a, b, kind) in p.segments(x1, x2) {
        let rhs = |tau: f64, m: &Mat2C| generator(kind, k, tau, flow) * *m;
        let (t0, t1) = (k * a, k * b);
        let budget = cfg.max_steps - steps.min(cfg.max_steps);
        let (next, used) = match cfg.method {
            Method::DormandPrince45 => {
                let sup_w = sampled_sup_w(kind, k, a, b);
                let ceiling = 0.1 / sup_w.max(1.0);
                let h0 = (cfg.initial_step_fraction * (t1 - t0)).min(ceiling);
                dormand_prince(&rhs, t0, t1, state, h0, cfg, budget)?
            }
            Method::FixedRk4 { step } => fixed_rk4(&rhs, t0, t1, state, step, budget)?,
        };
        state = next;
        steps += used;
    }
    Ok((state, steps))
}

/// `−iH(τ)` for the forward flow and `+iH(τ)ᵀ` for the inverse-transpose flow.
fn generator(kind: &PieceKind, k: f64, tau: f64, flow: Flow) -> Mat2C {
    let w = kind.value(tau / k) / (2.0 * k * k);
    let kt = Mat2C::k_matrix(tau);
    match flow {
        Flow::Forward => kt.scale(&(C64::new(0.0, -1.0) * w)),
        Flow::InverseTranspose => kt.transpose().scale(&(C64::new(0.0, 1.0) * w)),
    }
}

fn sampled_sup_w(kind: &PieceKind, k: f64, a: f64, b: f64) -> f64 {
    (0..=16)
        .map(|j| kind.value(a + (b - a) * j as f64 / 16.0).norm())
        .fold(0.0, f64::max)
        / (2.0 * k * k)
}

fn axpy(y: &Mat2C, h: f64, terms: &[(f64, &Mat2C)]) -> Mat2C {
    let mut acc = *y;
    for (c, m) in terms {
        if *c != 0.0 {
            acc = acc + m.scale(&C64::new(h * c, 0.0));
        }
    }
    acc
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn dormand_prince(
    rhs: &impl Fn(f64, &Mat2C) -> Mat2C,
    t0: f64,
    t1: f64,
    y0: Mat2C,
    h0: f64,
    cfg: &PropagatorConfig,
    budget: usize,
) -> Result<(Mat2C, usize)> {
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = h0.min(span);
    let mut k1 = rhs(t, &y);
    let mut steps = 0;
    while t < t1 {
        if steps >= budget {
            return Err(Error::StepLimit {
                max_steps: cfg.max_steps,
                tau: t,
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= f64::EPSILON * t.abs().max(span) {
            return Err(Error::StepUnderflow { tau: t, step: h });
        }
        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let t_end = if last { t1 } else { t + h };
        let k6 = rhs(
            t_end,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(t_end, &y_new);
        let err = axpy(
            &Mat2C::zero(),
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let ratio = err
            .entries()
            .iter()
            .zip(y.entries().iter().zip(y_new.entries()))
            .map(|(e, (a, b))| e.norm() / (cfg.abs_tol + cfg.rel_tol * a.norm().max(b.norm())))
            .fold(0.0, f64::max);
        steps += 1;
        if ratio <= 1.0 {
            t = t_end;
            y = y_new;
            k1 = k7;
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok((y, steps))
}

fn fixed_rk4(
    rhs: &impl Fn(f64, &Mat2C) -> Mat2C,
    t0: f64,
    t1: f64,
    y0: Mat2C,
    step: f64,
    budget: usize,
) -> Result<(Mat2C, usize)> {
    let n = ((t1 - t0) / step).ceil().max(1.0) as usize;
    if n > budget {
        return Err(Error::StepLimit {
            max_steps: budget,
            tau: t0,
        });
    }
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    for j in 0..n {
        let t = t0 + j as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k1)]));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k2)]));
        let k4 = rhs(t + h, &axpy(&y, h, &[(1.0, &k3)]));
        y = axpy(
            &y,
            h,
            &[
                (1.0 / 6.0, &k1),
                (1.0 / 3.0, &k2),
                (1.0 / 3.0, &k3),
                (1.0 / 6.0, &k4),
            ],
        );
    }
    Ok((y, n))
}

/// Closed-form transfer matrix of the constant potential `v0` on `[0, a]`.
///
/// Matches plane waves `e^{±ikx}` outside to the interior solution with
/// `κ² = k² − v0`. The interior propagator
/// `[[cos κa, sin κa / κ], [−κ sin κa, cos κa]]` is even in `κ`, so the
/// branch of the square root is immaterial and `κ → 0` is regular.
pub fn rectangular_barrier_oracle(v0: C64, a: f64, k: f64) -> Result<Mat2C> {
    if !(a > 0.0 && k > 0.0 && a.is_finite() && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "barrier width {a} and wavenumber {k} must be positive"
        )));
    }
    let kappa2 = C64::new(k * k, 0.0) - v0;
    let kappa = kappa2.sqrt();
    let x = kappa * a;
    let (cos_term, sinc_a) = if x.norm() < 1e-3 {
        let x2 = x * x;
        (
            1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0,
            a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0),
        )
    } else {
        (x.cos(), x.sin() / kappa)
    };
    // (ψ, ψ′)(a) = P (ψ, ψ′)(0)
    let p = Mat2C::new(cos_term, sinc_a, -kappa2 * sinc_a, cos_term);
    let ik = C64::new(0.0, k);
    let w0 = Mat2C::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), ik, -ik);
    let e_plus = C64::new(0.0, k * a).exp();
    let e_minus = C64::new(0.0, -k * a).exp();
    // inverse of [[e^{ika}, e^{−ika}], [ik e^{ika}, −ik e^{−ika}]]
    let wa_inv = Mat2C::new(
        e_minus / 2.0,
        e_minus / (2.0 * ik),
        e_plus / 2.0,
        -e_plus / (2.0 * ik),
    );
    Ok(wa_inv * p * w0)
}
