use clap::Args;
use confdec_core::constants::PhysicalConstants;
use confdec_core::decoherence::{coherence_mc, fit_decoherence_rate, McParams};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{num, OutputDir, Report, Table};

/// `|mean|` must exceed this many standard errors at the largest T.
const MIN_SIGNAL: f64 = 5.0;

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct McArgs {
    /// Fluctuation amplitude A0.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Particle mass.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Field time step (default tau / 8).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Wavepacket separation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    /// Position of the first component.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    /// Evolution times, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    /// Number of field realizations.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub a0: f64,
    pub tau: f64,
    pub mass: f64,
    pub dt: Option<f64>,
    pub dx: f64,
    pub x0: f64,
    pub t_list: Vec<f64>,
    pub n: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            a0: 0.1,
            tau: 1.0,
            mass: 1.0,
            dt: None,
            dx: 5.0,
            x0: 0.0,
            t_list: vec![100.0, 200.0, 300.0, 400.0],
            n: 100_000,
        }
    }
}

impl McConfig {
    pub fn params(&self, settings: &Settings) -> McParams {
        McParams {
            a0: self.a0,
            mass: self.mass,
            tau: self.tau,
            dt: self.dt.unwrap_or(self.tau / 8.0),
            constants: PhysicalConstants::for_units(settings.units),
            positions: (self.x0, self.x0 + self.dx),
            t_list: self.t_list.clone(),
            n_samples: self.n,
            seed: settings.seed,
        }
    }
}

pub fn run(settings: &Settings, cfg: &McConfig, out: &OutputDir) -> CliResult<()> {
    let params = cfg.params(settings);
    let est = coherence_mc(&params)?;

    let (lu, tu) = (settings.units.length_label(), settings.units.time_label());
    let mut table = Table::new([
        format!("delta_x[{lu}]"),
        format!("T[{tu}]"),
        "re_mean[1]".into(),
        "im_mean[1]".into(),
        "stderr[1]".into(),
        "n".into(),
    ]);
    for r in &est.records {
        table.push(vec![
            num(est.delta_x),
            num(r.t),
            num(r.mean.re),
            num(r.mean.im),
            num(r.stderr),
            Value::from(r.n),
        ]);
    }
    out.table("coherence", &table)?;

    let mut report = Report::new(cfg, params.constants)?;
    report.result("records", &est.records)?;
    let grw = params.grw();
    let analytic = params.analytic_rate();
    report.result(
        "analytic",
        json!({ "lambda": grw.lambda_grw, "alpha": grw.alpha, "rate": analytic }),
    )?;

    let last = est
        .records
        .iter()
        .max_by(|a, b| a.t.total_cmp(&b.t))
        .expect("validated non-empty T list");
    let signal = last.mean.norm() > MIN_SIGNAL * last.stderr || last.stderr == 0.0;
    report.check(
        "signal_at_largest_t",
        signal,
        format!(
            "|mean| = {:.4e}, stderr = {:.3e} at T = {}",
            last.mean.norm(),
            last.stderr,
            last.t
        ),
    );
    if !signal {
        out.json("fit.json", &report)?;
        return Err(CliError::Check(format!(
            "undersampled: |mean| within {MIN_SIGNAL} standard errors of zero at T = {}",
            last.t
        )));
    }

    let fit = match fit_decoherence_rate(&est) {
        Ok(fit) => fit,
        Err(e) => {
            report.check("fit", false, e.to_string());
            out.json("fit.json", &report)?;
            return Err(e.into());
        }
    };
    report.result("fit", fit)?;
    if analytic > 0.0 {
        let ratio = fit.rate / analytic;
        report.result("ratio", ratio)?;
        report.result("ratio_stderr", fit.stderr / analytic)?;
        report.check("ratio_defined", true, "");
        report.check(
            "agreement_10pct",
            (ratio - 1.0).abs() <= 0.1,
            format!("fitted / analytic = {ratio:.4}"),
        );
    } else {
        report.result("ratio", Value::Null)?;
        report.check("ratio_defined", false, "analytic rate is zero at this separation");
        report.check(
            "rate_consistent_with_zero",
            fit.rate.abs() <= 3.0 * fit.stderr,
            format!("rate = {:e} +- {:e}", fit.rate, fit.stderr),
        );
    }
    out.json("fit.json", &report)?;
    Ok(())
}
