//! TOML run configuration.
//!
//! Every document carries `schema_version` and one table per subcommand.
//! Unknown keys are rejected at every level. Complex numbers are written as a
//! bare real or as `[re, im]`.

use std::path::Path;

use serde::Deserialize;
use tmcomp::invisibility::{build_potential, UnidirectionalSpec};
use tmcomp::{Potential, PotentialPiece, C64};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Complex {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Complex> for C64 {
    fn from(c: Complex) -> Self {
        match c {
            Complex::Real(re) => C64::new(re, 0.0),
            Complex::Pair([re, im]) => C64::new(re, im),
        }
    }
}

/// One piece of a potential.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceSpec {
    Constant {
        start: f64,
        end: f64,
        value: Complex,
    },
    /// `Σ cⱼ (x − start)ʲ`.
    Polynomial {
        start: f64,
        end: f64,
        coeffs: Vec<Complex>,
    },
    /// `amplitude · e^{i wavevector x}`.
    Exponential {
        start: f64,
        end: f64,
        amplitude: Complex,
        wavevector: f64,
    },
    Gaussian {
        start: f64,
        end: f64,
        amplitude: Complex,
        center: f64,
        width: f64,
    },
    /// `z e^{iKx}` on `[offset, offset + 2πm/K]`.
    Unidirectional {
        z: Complex,
        big_k: f64,
        #[serde(default = "one")]
        m: u32,
        #[serde(default)]
        offset: f64,
    },
}

fn one() -> u32 {
    1
}

fn invalid(e: tmcomp::Error) -> CliError {
    CliError::Config(e.to_string())
}

pub fn build_potential_spec(pieces: &[PieceSpec]) -> Result<Potential, CliError> {
    let mut out = Potential::zero();
    for spec in pieces {
        let part = match *spec {
            PieceSpec::Constant { start, end, value } => Potential::single(
                PotentialPiece::constant(start, end, value.into()).map_err(invalid)?,
            ),
            PieceSpec::Polynomial {
                start,
                end,
                ref coeffs,
            } => Potential::single(
                PotentialPiece::polynomial(start, end, coeffs.iter().map(|&c| c.into()).collect())
                    .map_err(invalid)?,
            ),
            PieceSpec::Exponential {
                start,
                end,
                amplitude,
                wavevector,
            } => Potential::single(
                PotentialPiece::exponential(start, end, amplitude.into(), wavevector)
                    .map_err(invalid)?,
            ),
            PieceSpec::Gaussian {
                start,
                end,
                amplitude,
                center,
                width,
            } => Potential::single(
                PotentialPiece::gaussian(start, end, amplitude.into(), center, width)
                    .map_err(invalid)?,
            ),
            PieceSpec::Unidirectional {
                z,
                big_k,
                m,
                offset,
            } => {
                let s = UnidirectionalSpec::new(z.into(), big_k, m).map_err(invalid)?;
                build_potential(&s).map_err(invalid)?.translate(offset)
            }
        };
        out = out.superpose(&part);
    }
    Ok(out)
}

/// A list of values or an inclusive linear/logarithmic range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Single(f64),
    List(Vec<f64>),
    Range(RangeSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Grid::Single(x) => vec![*x],
            Grid::List(xs) => xs.clone(),
            Grid::Range(r) => {
                if r.count < 2 {
                    return Err(CliError::Config(format!(
                        "range count {} is below 2",
                        r.count
                    )));
                }
                if r.log && !(r.start > 0.0 && r.stop > 0.0) {
                    return Err(CliError::Config(
                        "log range needs positive endpoints".into(),
                    ));
                }
                (0..r.count)
                    .map(|j| {
                        let t = j as f64 / (r.count - 1) as f64;
                        if r.log {
                            r.start * (r.stop / r.start).powf(t)
                        } else {
                            r.start + t * (r.stop - r.start)
                        }
                    })
                    .collect()
            }
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config(
                "grid must hold at least one finite value".into(),
            ));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferConfig {
    pub potential: Vec<PieceSpec>,
    pub k: Grid,
    /// Defaults to the support of the potential.
    pub interval: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudesConfig {
    pub potential: Vec<PieceSpec>,
    pub k: Grid,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeConfig {
    pub v1: Vec<PieceSpec>,
    pub v2: Vec<PieceSpec>,
    pub k: Grid,
    /// `disjoint`, `exact`, `series:N` or `split`.
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapStudyConfig {
    pub v1: Vec<PieceSpec>,
    pub v2: Vec<PieceSpec>,
    pub k: f64,
    pub ell: Grid,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_slope_tol")]
    pub slope_tol: f64,
}

fn default_order() -> usize {
    2
}

fn default_slope_tol() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvisibilityConfig {
    pub z: Complex,
    pub big_k: f64,
    #[serde(default = "one")]
    pub m: u32,
    /// Values of `ε = Kℓ/2`; defaults to the demonstration grid.
    pub eps: Option<Grid>,
    /// Multiples of `z` for the `|Rˡ|`-against-`|z|` scan.
    pub z_scan: Option<Vec<f64>>,
    /// `ε` at which the `z` scan runs.
    pub z_scan_eps: Option<f64>,
    pub coeff_rel_tol: Option<f64>,
    pub first_order_rel_tol: Option<f64>,
    pub slope_ell_tol: Option<f64>,
    pub slope_z_tol: Option<f64>,
}

impl Default for InvisibilityConfig {
    fn default() -> Self {
        Self {
            z: Complex::Real(1e-3),
            big_k: 1.0,
            m: 1,
            eps: None,
            z_scan: None,
            z_scan_eps: None,
            coeff_rel_tol: None,
            first_order_rel_tol: None,
            slope_ell_tol: None,
            slope_z_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    pub transfer: Option<TransferConfig>,
    pub amplitudes: Option<AmplitudesConfig>,
    pub compose: Option<ComposeConfig>,
    pub overlap_study: Option<OverlapStudyConfig>,
    pub invisibility: Option<InvisibilityConfig>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Document = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// The section a subcommand needs, or a config error naming it.
pub fn require<T>(section: Option<T>, name: &str) -> Result<T, CliError> {
    section.ok_or_else(|| CliError::Config(format!("config has no [{name}] table")))
}
