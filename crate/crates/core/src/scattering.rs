//! Reflection and transmission amplitudes and their relation to the
//! transfer matrix, `M = [[T − RˡRʳ/T, Rʳ/T], [−Rˡ/T, 1/T]]`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::Mat2C;

/// Default threshold on `|M22|` below which `T` is treated as divergent.
pub const SINGULARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub r_left: C64,
    pub r_right: C64,
    pub t: C64,
    pub k: f64,
}

impl ScatteringAmplitudes {
    pub fn free(k: f64) -> Self {
        Self {
            r_left: C64::new(0.0, 0.0),
            r_right: C64::new(0.0, 0.0),
            t: C64::new(1.0, 0.0),
            k,
        }
    }
}

pub fn amplitudes_from_transfer(m: &Mat2C, k: f64) -> Result<ScatteringAmplitudes> {
    amplitudes_from_transfer_with_tol(m, k, SINGULARITY_TOL)
}

pub fn amplitudes_from_transfer_with_tol(
    m: &Mat2C,
    k: f64,
    tol: f64,
) -> Result<ScatteringAmplitudes> {
    if m.a22.norm() <= tol {
        return Err(Error::SpectralSingularity { m22: m.a22, tol });
    }
    Ok(ScatteringAmplitudes {
        r_left: -m.a21 / m.a22,
        r_right: m.a12 / m.a22,
        t: m.a22.inv(),
        k,
    })
}

pub fn transfer_from_amplitudes(a: &ScatteringAmplitudes) -> Result<Mat2C> {
    if a.t == C64::new(0.0, 0.0) || !a.t.is_finite() {
        return Err(Error::ZeroTransmission);
    }
    Ok(Mat2C::new(
        a.t - a.r_left * a.r_right / a.t,
        a.r_right / a.t,
        -a.r_left / a.t,
        a.t.inv(),
    ))
}

/// Transfer matrix of the potential translated by `d` (`v(x) → v(x − d)`):
/// `e^{−ikdσ₃} M e^{ikdσ₃}`, so `Rˡ → e^{2ikd}Rˡ` and `Rʳ → e^{−2ikd}Rʳ`.
pub fn translate_transfer(m: &Mat2C, k: f64, d: f64) -> Mat2C {
    let phase = C64::new(0.0, 2.0 * k * d).exp();
    Mat2C::new(m.a11, m.a12 / phase, m.a21 * phase, m.a22)
}
