use std::path::PathBuf;

use clap::Args;
use confdec_core::constants::PhysicalConstants;
use confdec_core::field::CorrelationModel;
use confdec_core::kernel::{decoherence_factor, general_kernel, grw_params, relative_change};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::read_g1_table;
use crate::config::Settings;
use crate::error::CliResult;
use crate::output::{num, OutputDir, Report, Table};

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Separations, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<Vec<f64>>,
    /// Times for the decoherence-factor curves, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<f64>>,
    /// Durations at which the general kernel is compared with the closed form.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<Vec<f64>>,
    /// CSV of `lag,g1` pairs replacing the Gaussian correlation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub a0: f64,
    pub tau: f64,
    pub mass: f64,
    pub dx: Vec<f64>,
    pub t: Vec<f64>,
    pub duration: Vec<f64>,
    pub g1_table: Option<PathBuf>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            a0: 0.1,
            tau: 1.0,
            mass: 1.0,
            dx: vec![0.0, 0.25, 0.5, 1.0, 2.0, 5.0],
            t: vec![0.0, 100.0, 200.0, 300.0, 400.0],
            duration: vec![100.0],
            g1_table: None,
        }
    }
}

pub fn run(settings: &Settings, cfg: &KernelConfig, out: &OutputDir) -> CliResult<()> {
    let k = PhysicalConstants::<f64>::for_units(settings.units);
    let model = match &cfg.g1_table {
        Some(path) => CorrelationModel::tabulated(cfg.tau, &read_g1_table(path)?)?,
        None => CorrelationModel::gaussian(cfg.tau)?,
    };
    let grw = grw_params(cfg.mass, cfg.a0, cfg.tau, &k);
    let (lu, tu) = (settings.units.length_label(), settings.units.time_label());

    let mut curves = Table::new([format!("delta_x[{lu}]"), format!("t[{tu}]"), "factor[1]".into()]);
    for &dx in &cfg.dx {
        for &t in &cfg.t {
            curves.push(vec![num(dx), num(t), num(decoherence_factor(dx, t, &grw))]);
        }
    }
    out.table("factor", &curves)?;

    let mut comparison = Table::new([
        format!("delta_x[{lu}]"),
        format!("T[{tu}]"),
        "general[1]".into(),
        "closed_form[1]".into(),
        "rel_dev[1]".into(),
    ]);
    let mut max_dev: f64 = 0.0;
    for &duration in &cfg.duration {
        for &dx in &cfg.dx {
            let general = general_kernel(&model, dx, duration, cfg.mass, cfg.a0, &k)?;
            let closed = relative_change(dx, duration, &grw);
            let dev = if closed == 0.0 {
                general.abs()
            } else {
                (general / closed - 1.0).abs()
            };
            max_dev = max_dev.max(dev);
            comparison.push(vec![num(dx), num(duration), num(general), num(closed), num(dev)]);
        }
    }
    out.table("comparison", &comparison)?;

    let mut report = Report::new(cfg, k)?;
    report.result("grw", json!({ "lambda": grw.lambda_grw, "alpha": grw.alpha }))?;
    report.result("correlation", model.kind())?;
    report.result("max_rel_dev", max_dev)?;
    out.json("kernel.json", &report)?;
    Ok(())
}
