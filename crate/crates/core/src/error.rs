use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Pauli matrix index {0} is outside 1..=3")]
    PauliIndex(usize),

    #[error("matrix is not unimodular: det = {det} (tolerance {tol:e})")]
    NotUnimodular { det: Complex64, tol: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("potential has empty support")]
    EmptySupport,

    #[error("adaptive quadrature did not converge (estimate {estimate}, error {error:e})")]
    Quadrature { estimate: f64, error: f64 },

    #[error("integrator exceeded {max_steps} steps at tau = {tau}")]
    StepLimit { max_steps: usize, tau: f64 },

    #[error("integrator step size underflow at tau = {tau} (h = {step:e})")]
    StepUnderflow { tau: f64, step: f64 },

    #[error("spectral singularity: |M22| = {} is below {tol:e}", m22.norm())]
    SpectralSingularity { m22: Complex64, tol: f64 },

    #[error("transmission amplitude is zero")]
    ZeroTransmission,

    #[error("jet too shallow: need derivatives to order {needed}, have {available}")]
    JetOrder { needed: usize, available: usize },

    #[error("supports do not form an overlapping pair: {0}")]
    Relation(String),

    #[error("degenerate sweep: {0}")]
    DegenerateSweep(String),
}
