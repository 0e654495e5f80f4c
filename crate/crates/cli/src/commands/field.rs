use std::path::PathBuf;

use clap::Args;
use confdec_core::constants::PhysicalConstants;
use confdec_core::field::{
    estimate_g1, estimate_g2, g1_estimator_stderr, odd_moment_check, sample_field, CorrelationEstimates,
    CorrelationModel, FieldGrid, LagEstimate,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::read_g1_table;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir, Report, Table};

/// Checks are made at these multiples of tau.
const CHECK_LAGS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.0];
const CHECK_SIGMAS: f64 = 3.0;

type Expected = fn(&CorrelationModel, f64) -> f64;

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct FieldArgs {
    /// Correlation time.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Time step (default tau / 8).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Largest lag estimated (default 3 tau).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<f64>,
    /// CSV of `lag,g1` pairs replacing the Gaussian correlation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    pub tau: f64,
    pub dt: Option<f64>,
    pub n: usize,
    pub max_lag: Option<f64>,
    pub g1_table: Option<PathBuf>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        Self {
            tau: 1.0,
            dt: None,
            n: 32_768,
            max_lag: None,
            g1_table: None,
        }
    }
}

fn model(tau: f64, table: Option<&PathBuf>) -> CliResult<CorrelationModel> {
    Ok(match table {
        Some(path) => CorrelationModel::tabulated(tau, &read_g1_table(path)?)?,
        None => CorrelationModel::gaussian(tau)?,
    })
}

fn lag_check(
    list: &[LagEstimate],
    lags: &[f64],
    expected: impl Fn(f64) -> f64,
    stderr: impl Fn(f64, &LagEstimate) -> f64,
) -> (bool, f64) {
    let worst = lags
        .iter()
        .map(|&lag| {
            let e = CorrelationEstimates::nearest(list, lag).expect("lag within estimated range");
            ((e.estimate - expected(e.lag)) / stderr(e.lag, e)).abs()
        })
        .fold(0.0, f64::max);
    (worst <= CHECK_SIGMAS, worst)
}

pub fn run(settings: &Settings, cfg: &FieldConfig, out: &OutputDir) -> CliResult<()> {
    let model = model(cfg.tau, cfg.g1_table.as_ref())?;
    let dt = cfg.dt.unwrap_or(cfg.tau / 8.0);
    let max_lag = cfg.max_lag.unwrap_or(3.0 * cfg.tau);
    let grid = FieldGrid::new(dt, cfg.n, 0.0);
    let r = sample_field(&model, grid, settings.seed)?;
    let g1 = estimate_g1(&r, max_lag)?;
    let g2 = estimate_g2(&r, max_lag)?;
    let moments = odd_moment_check(&r, &[1, 3, 5])?;

    let tu = settings.units.time_label();
    let mut realization = Table::new([format!("t[{tu}]"), "xi_plus[1]".into(), "xi_minus[1]".into()]);
    for k in 0..grid.n_steps {
        realization.push(vec![num(grid.time(k)), num(r.xi_plus[k]), num(r.xi_minus[k])]);
    }
    out.table("realization", &realization)?;

    let mut correlations = Table::new([
        "series".to_string(),
        format!("lag[{tu}]"),
        "estimate[1]".into(),
        "stderr[1]".into(),
        "expected[1]".into(),
    ]);
    let series: [(&str, &[LagEstimate], Expected); 6] = [
        ("g1_plus", &g1.plus, CorrelationModel::g1),
        ("g1_minus", &g1.minus, CorrelationModel::g1),
        ("g1_cross", &g1.cross, |_, _| 0.0),
        ("g2_plus", &g2.plus, CorrelationModel::g2_same_stream),
        ("g2_minus", &g2.minus, CorrelationModel::g2_same_stream),
        ("g2_cross", &g2.cross, |_, _| 1.0),
    ];
    for (name, list, expected) in series {
        for e in list {
            correlations.push(vec![
                Value::from(name),
                num(e.lag),
                num(e.estimate),
                num(e.stderr),
                num(expected(&model, e.lag)),
            ]);
        }
    }
    out.table("correlations", &correlations)?;

    let mut moment_table = Table::new(["order", "estimate[1]", "stderr[1]"]);
    for m in &moments {
        moment_table.push(vec![Value::from(m.order), num(m.estimate), num(m.stderr)]);
    }
    out.table("moments", &moment_table)?;

    let lags: Vec<f64> = CHECK_LAGS
        .iter()
        .map(|k| k * cfg.tau)
        .filter(|l| *l <= max_lag + 1e-12)
        .collect();
    let mut report = Report::new(cfg, PhysicalConstants::<f64>::for_units(settings.units))?;
    report.result("dt", dt)?;
    report.result("duration", grid.duration())?;
    report.result("check_lags", &lags)?;
    report.result("moments", &moments)?;
    let model_ref = &model;
    let exact = |cross: bool| move |lag: f64, _: &LagEstimate| g1_estimator_stderr(model_ref, &grid, lag, cross);
    let batch = |_: f64, e: &LagEstimate| e.stderr;
    let checks = [
        ("g1_plus", lag_check(&g1.plus, &lags, |s| model.g1(s), exact(false))),
        ("g1_minus", lag_check(&g1.minus, &lags, |s| model.g1(s), exact(false))),
        ("g1_cross", lag_check(&g1.cross, &lags, |_| 0.0, exact(true))),
        (
            "g2_plus",
            lag_check(&g2.plus, &lags, |s| model.g2_same_stream(s), batch),
        ),
        (
            "g2_minus",
            lag_check(&g2.minus, &lags, |s| model.g2_same_stream(s), batch),
        ),
    ];
    for (name, (pass, worst)) in checks {
        report.check(name, pass, format!("largest |deviation| / stderr = {worst:.2}"));
    }
    let worst_moment = moments
        .iter()
        .map(|m| (m.estimate / m.stderr).abs())
        .fold(0.0, f64::max);
    report.check(
        "odd_moments",
        worst_moment <= CHECK_SIGMAS,
        format!("largest |moment| / stderr = {worst_moment:.2}"),
    );
    report.result("thresholds", json!({ "sigmas": CHECK_SIGMAS }))?;
    out.json("summary.json", &report)?;

    let failed = report.failed_checks();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "field statistics outside {CHECK_SIGMAS} stderr: {}",
            failed.join(", ")
        )))
    }
}
