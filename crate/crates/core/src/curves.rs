//! Success-probability curves over a θ grid, as CSV.
//!
//! Columns: `theta,kind,k,analytic,empirical,stderr,shots,seed`. Numbers are
//! written with 12 significant digits; the simulation columns stay empty
//! for analytic-only output.

use std::io::Write;

use crate::error::Result;
use crate::sim::{estimate, plan_experiment, simulate_tally, BasisMode, NoiseModel};
use crate::task::{closed_form, MeasurementKind, ScenarioId, TaskParams};

pub const CSV_HEADER: [&str; 8] = ["theta", "kind", "k", "analytic", "empirical", "stderr", "shots", "seed"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationSettings {
    pub shots: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    pub basis_mode: BasisMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub theta: f64,
    pub kind: MeasurementKind,
    pub k: usize,
    pub analytic: f64,
    pub empirical: Option<f64>,
    pub stderr: Option<f64>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
}

/// One row per `(θ, scenario)`, θ outermost, scenarios in canonical order.
pub fn curve_rows(thetas: &[f64], sim: Option<&SimulationSettings>) -> Result<Vec<CurveRow>> {
    let params = thetas
        .iter()
        .map(|t| TaskParams::new(*t))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<CurveRow> = params
        .iter()
        .flat_map(|p| {
            ScenarioId::all().into_iter().map(move |s| CurveRow {
                theta: p.theta(),
                kind: s.kind,
                k: s.k,
                analytic: closed_form(s, p),
                empirical: None,
                stderr: None,
                shots: None,
                seed: None,
            })
        })
        .collect();

    if let Some(sim) = sim {
        let plan = plan_experiment(thetas, sim.shots, sim.seed)?.with_basis_mode(sim.basis_mode);
        let tally = simulate_tally(&plan, &sim.noise)?;
        for k in 0..3 {
            for est in estimate(&tally, k, sim.basis_mode)? {
                let row = rows
                    .iter_mut()
                    .find(|r| r.theta.to_bits() == est.theta.to_bits() && r.kind == est.kind && r.k == k)
                    .expect("every estimate has a grid row");
                row.empirical = Some(est.value);
                row.stderr = Some(est.stderr);
                row.shots = Some(sim.shots);
                row.seed = Some(sim.seed);
            }
        }
    }
    Ok(rows)
}

/// Locale-independent decimal rendering with 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn write_curves<W: Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        w.write_record([
            format_number(r.theta),
            r.kind.name().to_string(),
            r.k.to_string(),
            format_number(r.analytic),
            opt(r.empirical),
            opt(r.stderr),
            r.shots.map(|s| s.to_string()).unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
