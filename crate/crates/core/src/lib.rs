//! Transfer matrices of one-dimensional scattering potentials, and the
//! correction that composes them when their supports overlap.
//!
//! Matrices are built in the clock `τ = kx` from the evolution equation
//! `i ∂τ M = w(τ) K(τ) M` with `w = v / 2k²`. Composition of two potentials
//! whose supports share a segment of length `ℓ` reads `M = M₂ S(kℓ) M₁`; the
//! correction `S` is available exactly (by integration) and as a power series
//! in `ε = kℓ` built from the endpoint jets of the two potentials.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod composition;
pub mod error;
pub mod invisibility;
pub mod jet;
pub mod jetseries;
pub mod mat2;
pub mod poly;
pub mod potential;
pub mod propagator;
pub mod scalar;
pub mod scattering;
pub mod series;

pub use composition::{EndpointData, Method, OverlapReport, Regime};
pub use error::{Error, Result};
pub use invisibility::UnidirectionalSpec;
pub use jet::Jet;
pub use mat2::Mat2;
pub use num_complex::Complex64 as C64;
pub use potential::{PieceKind, Potential, PotentialPiece, Side, SupportRelation};
pub use propagator::{PropagatorConfig, TransferResult};
pub use scattering::ScatteringAmplitudes;

/// Double-precision complex 2×2 matrix.
pub type Mat2C = Mat2<C64>;
/// Double-precision complex jet.
pub type JetC = Jet<C64>;
