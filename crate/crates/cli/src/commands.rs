use rayon::prelude::*;
use serde_json::json;

use tmcomp::composition::{
    convergence_sweep, generalized_compose, split_compose, EndpointData, Method,
};
use tmcomp::invisibility::{experiment_report, ExperimentConfig, UnidirectionalSpec};
use tmcomp::propagator::{full_transfer, transfer_matrix, PropagatorConfig};
use tmcomp::scattering::{amplitudes_from_transfer, translate_transfer};
use tmcomp::SupportRelation;

use crate::config::{
    build_potential_spec, AmplitudesConfig, ComposeConfig, InvisibilityConfig, OverlapStudyConfig,
    TransferConfig,
};
use crate::error::CliError;
use crate::output::{complex_cells, complex_json, matrix_cells, Cell, Table};

/// What a subcommand hands back: the table and whether its checks passed.
pub struct Outcome {
    pub table: Table,
    pub passed: bool,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self {
            table,
            passed: true,
        }
    }
}

pub fn transfer(c: &TransferConfig, cfg: &PropagatorConfig) -> Result<Outcome, CliError> {
    let p = build_potential_spec(&c.potential)?;
    let ks = positive_k(c.k.values()?)?;
    let interval = match c.interval {
        Some([a, b]) => Some((a, b)),
        None => p.support(),
    };
    let rows = ks
        .par_iter()
        .map(|&k| {
            let r = match interval {
                Some((a, b)) => transfer_matrix(&p, k, a, b, cfg)?,
                None => full_transfer(&p, k, cfg)?,
            };
            let mut row = vec![Cell::Num(k)];
            row.extend(matrix_cells(&r.matrix));
            row.push(Cell::Num(r.det_drift));
            row.push(Cell::Int(r.steps_taken as u64));
            Ok(row)
        })
        .collect::<Result<Vec<_>, tmcomp::Error>>()?;
    let mut t = Table::new("transfer");
    if let Some((a, b)) = interval {
        t.notes
            .push(format!("interval [{a}, {b}] in position units"));
    }
    t.column("k", "wavenumber, inverse position units")
        .matrix_columns("m", "the transfer matrix M (dimensionless)")
        .column("det_drift", "|det M - 1|")
        .column("steps", "accepted integrator steps");
    t.rows = rows;
    Ok(Outcome::ok(t))
}

pub fn amplitudes(c: &AmplitudesConfig, cfg: &PropagatorConfig) -> Result<Outcome, CliError> {
    let p = build_potential_spec(&c.potential)?;
    let ks = positive_k(c.k.values()?)?;
    let rows = ks
        .par_iter()
        .map(|&k| {
            let r = full_transfer(&p, k, cfg)?;
            let a = amplitudes_from_transfer(&r.matrix, k)?;
            let mut row = vec![Cell::Num(k)];
            for z in [a.r_left, a.r_right, a.t] {
                row.extend(complex_cells(z));
            }
            row.push(Cell::Num(r.det_drift));
            Ok(row)
        })
        .collect::<Result<Vec<_>, tmcomp::Error>>()?;
    let mut t = Table::new("amplitudes");
    t.column("k", "wavenumber, inverse position units");
    for (name, doc) in [
        ("r_left", "left reflection amplitude -M21/M22"),
        ("r_right", "right reflection amplitude M12/M22"),
        ("t", "transmission amplitude 1/M22"),
    ] {
        t.column(&format!("{name}_re"), &format!("re part of the {doc}"))
            .column(&format!("{name}_im"), &format!("im part of the {doc}"));
    }
    t.column("det_drift", "|det M - 1|");
    t.rows = rows;
    Ok(Outcome::ok(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMethod {
    Disjoint,
    Exact,
    Series(usize),
    Split,
}

impl std::str::FromStr for ComposeMethod {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "disjoint" => Ok(Self::Disjoint),
            "exact" => Ok(Self::Exact),
            "split" => Ok(Self::Split),
            _ => s
                .strip_prefix("series:")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n <= tmcomp::composition::MAX_SERIES_ORDER)
                .map(Self::Series)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "unknown method '{s}' (disjoint, exact, series:N with N <= {}, split)",
                        tmcomp::composition::MAX_SERIES_ORDER
                    ))
                }),
        }
    }
}

pub fn compose(c: &ComposeConfig, cfg: &PropagatorConfig) -> Result<Outcome, CliError> {
    let method: ComposeMethod = c.method.parse()?;
    let v1 = build_potential_spec(&c.v1)?;
    let v2 = build_potential_spec(&c.v2)?;
    let relation = v1.support_relation(&v2)?;
    // [start, start + len] is the overlap, or the gap for separated supports
    let (start, len) = match relation {
        SupportRelation::StrictlyPrecedes => {
            let (b1, a2) = (v1.support().unwrap().1, v2.support().unwrap().0);
            (b1, a2 - b1)
        }
        SupportRelation::WeaklyPrecedes { start, length } => (start, length),
        SupportRelation::Other => {
            return Err(CliError::Config(
                "v1 must lie to the left of v2 with at most a one-sided overlap".into(),
            ))
        }
    };
    let overlapping =
        matches!(relation, SupportRelation::WeaklyPrecedes { length, .. } if length > 0.0);
    if method == ComposeMethod::Disjoint && overlapping {
        return Err(CliError::Config(format!(
            "method 'disjoint' needs separated supports; they overlap on [{start}, {}]",
            start + len
        )));
    }
    let ks = positive_k(c.k.values()?)?;
    let sum = v1.superpose(&v2);
    let rows = ks
        .par_iter()
        .map(|&k| {
            let reference = full_transfer(&sum, k, cfg)?.matrix;
            let composed = match method {
                ComposeMethod::Disjoint => {
                    full_transfer(&v2, k, cfg)?.matrix * full_transfer(&v1, k, cfg)?.matrix
                }
                ComposeMethod::Exact => generalized_compose(&v1, &v2, k, Method::Exact, cfg)?,
                ComposeMethod::Series(n) => {
                    generalized_compose(&v1, &v2, k, Method::Series(n), cfg)?
                }
                ComposeMethod::Split => {
                    let m = split_compose(&sum.translate(-start), k, len, cfg)?;
                    translate_transfer(&m, k, start)
                }
            };
            let mut row = vec![Cell::Num(k), Cell::Num(k * len)];
            row.extend(matrix_cells(&composed));
            row.extend(matrix_cells(&reference));
            row.push(Cell::Num(composed.dist(&reference)));
            Ok(row)
        })
        .collect::<Result<Vec<_>, tmcomp::Error>>()?;
    let mut t = Table::new("compose");
    t.notes.push(format!("method {}", c.method));
    t.notes.push(format!(
        "{} [{start}, {}] in position units",
        if overlapping { "overlap" } else { "gap" },
        start + len
    ));
    if overlapping {
        if let Some(w) = EndpointData::from_pair(&v1, &v2, ks.iter().copied().fold(0.0, f64::max))
            .ok()
            .and_then(|d| d.validity_warning())
        {
            t.warnings.push(w);
        }
    }
    t.column("k", "wavenumber, inverse position units")
        .column("eps", "k times the overlap (or gap) length, dimensionless")
        .matrix_columns("c", "the composed matrix")
        .matrix_columns("d", "the directly integrated matrix of v1 + v2")
        .column(
            "deviation",
            "max-entry distance between composed and direct matrices",
        );
    t.rows = rows;
    Ok(Outcome::ok(t))
}

pub fn overlap_study(c: &OverlapStudyConfig, cfg: &PropagatorConfig) -> Result<Outcome, CliError> {
    let v1 = build_potential_spec(&c.v1)?;
    let v2 = build_potential_spec(&c.v2)?;
    let mut ells = c.ell.values()?;
    ells.sort_by(f64::total_cmp);
    let report = convergence_sweep(&v1, &v2, c.k, &ells, c.order, cfg)?;
    let orders: Vec<usize> = (2..=tmcomp::composition::MAX_SERIES_ORDER).collect();
    let mut t = Table::new("overlap-study");
    t.notes
        .push(format!("k = {} in inverse position units", c.k));
    t.column("ell", "overlap length, position units")
        .column("eps", "k * ell, dimensionless");
    for n in &orders {
        t.column(
            &format!("err_{n}"),
            &format!("max-entry |S_exact - S_series| with the series through ell^{n}"),
        );
    }
    t.column("regime", "endpoint continuity class of the pair");
    t.rows = report
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![Cell::Num(s.ell), Cell::Num(s.eps)];
            row.extend(orders.iter().map(|n| Cell::Num(s.errors[n])));
            row.push(Cell::Text(report.regime.as_str().into()));
            row
        })
        .collect();
    let expected = report.expected_slope();
    let passed = (report.fitted_slope - expected).abs() <= c.slope_tol;
    let slopes: serde_json::Map<String, serde_json::Value> = report
        .slopes
        .iter()
        .map(|(n, s)| (n.to_string(), json!(s)))
        .collect();
    t.summary = Some(json!({
        "k": c.k,
        "order": c.order,
        "regime": report.regime.as_str(),
        "expected_slope": expected,
        "fitted_slope": report.fitted_slope,
        "slope_tol": c.slope_tol,
        "slopes": slopes,
        "passed": passed,
    }));
    t.warnings = report.warnings.clone();
    Ok(Outcome { table: t, passed })
}

pub fn invisibility(
    c: &InvisibilityConfig,
    cfg: &PropagatorConfig,
    strict: bool,
) -> Result<Outcome, CliError> {
    let s = UnidirectionalSpec::new(c.z.into(), c.big_k, c.m)?;
    if strict && !s.is_perturbative() {
        return Err(CliError::Config(format!(
            "|z|/K^2 = {:.3e} exceeds {} (strict mode)",
            s.strength(),
            tmcomp::invisibility::PERTURBATIVE_LIMIT
        )));
    }
    let mut ex = ExperimentConfig::demo(&s);
    if let Some(eps) = &c.eps {
        ex.ell_values = eps.values()?.iter().map(|e| e / s.k()).collect();
    }
    if let Some(f) = &c.z_scan {
        ex.z_scan = f.iter().map(|f| s.z * *f).collect();
    }
    if let Some(e) = c.z_scan_eps {
        ex.z_scan_ell = e / s.k();
    }
    ex.coeff_rel_tol = c.coeff_rel_tol.unwrap_or(ex.coeff_rel_tol);
    ex.first_order_rel_tol = c.first_order_rel_tol.unwrap_or(ex.first_order_rel_tol);
    ex.slope_ell_tol = c.slope_ell_tol.unwrap_or(ex.slope_ell_tol);
    ex.slope_z_tol = c.slope_z_tol.unwrap_or(ex.slope_z_tol);
    ex.propagator = *cfg;
    if ex
        .ell_values
        .iter()
        .any(|&l| !(0.0..s.length()).contains(&l))
    {
        return Err(CliError::Config(format!(
            "eps values must keep ell in [0, {})",
            s.length()
        )));
    }
    let report = experiment_report(&s, &ex)?;

    let mut t = Table::new("invisibility");
    t.notes.push(format!(
        "v = z exp(iKx) on [0, 2 pi m / K], z = {} {:+}i, K = {}, m = {}, k = K/2",
        s.z.re, s.z.im, s.big_k, s.m
    ));
    t.column("ell", "overlap length, position units")
        .column("eps", "K ell / 2, dimensionless");
    for (tag, doc) in [("num", "integrated"), ("pred", "second-order predicted")] {
        for (name, what) in [
            ("r_left", "left reflection"),
            ("r_right", "right reflection"),
            ("t", "transmission"),
        ] {
            t.column(
                &format!("{tag}_{name}_re"),
                &format!("re part of the {doc} {what} amplitude"),
            )
            .column(
                &format!("{tag}_{name}_im"),
                &format!("im part of the {doc} {what} amplitude"),
            );
        }
    }
    for (name, doc) in [
        (
            "dev_r_left_2",
            "z^2 coefficient of R_left; relative deviation, or its modulus where none is predicted",
        ),
        (
            "dev_r_right_1",
            "relative deviation of the z coefficient of R_right",
        ),
        (
            "dev_r_right_2",
            "relative deviation of the z^2 coefficient of R_right",
        ),
        ("dev_t_2", "relative deviation of the z^2 coefficient of T"),
    ] {
        t.column(name, doc);
    }
    t.rows = report
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![Cell::Num(r.ell), Cell::Num(r.eps)];
            for a in [&r.numeric, &r.predicted] {
                for z in [a.r_left, a.r_right, a.t] {
                    row.extend(complex_cells(z));
                }
            }
            for d in [
                r.rel_dev_r_left_2(),
                r.rel_dev_r_right_1(),
                r.rel_dev_r_right_2(),
                r.rel_dev_t_2(),
            ] {
                row.push(Cell::Num(d));
            }
            row
        })
        .collect();
    let passed = report.all_passed();
    t.summary = Some(json!({
        "z": complex_json(s.z),
        "big_k": s.big_k,
        "m": s.m,
        "slope_ell": report.slope_ell,
        "slope_z": report.slope_z,
        "z_scan": report.z_scan.iter().map(|(z, r)| json!({ "abs_z": z, "abs_r_left": r })).collect::<Vec<_>>(),
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "value": c.value,
            "target": c.target,
            "tol": c.tol,
            "passed": c.passed,
        })).collect::<Vec<_>>(),
        "passed": passed,
    }));
    t.warnings = report.warnings.clone();
    Ok(Outcome { table: t, passed })
}

fn positive_k(ks: Vec<f64>) -> Result<Vec<f64>, CliError> {
    if ks.iter().any(|&k| !(k > 0.0)) {
        return Err(CliError::Config("wavenumbers must be positive".into()));
    }
    Ok(ks)
}
