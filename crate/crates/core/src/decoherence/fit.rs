use serde::{Deserialize, Serialize};

use super::ensemble::CoherenceEstimate;
use crate::error::{Error, Result};

/// Least-squares fit of `-ln|mean| = intercept + rate T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: f64,
    pub stderr: f64,
    /// T-independent dephasing from the ends of the exposure window.
    pub intercept: f64,
}

const MIN_POINTS: usize = 4;
const MIN_SPAN: f64 = 2.0;
const MIN_SIGNAL: f64 = 5.0;

/// Weighted fit of the decay exponent against `T`.
///
/// Weights are `1 / var(-ln|mean|)` from the radial standard errors. If
/// the errors are all zero (exact input) the fit is unweighted and the
/// slope error comes from the residuals.
pub fn fit_decoherence_rate(est: &CoherenceEstimate) -> Result<RateFit> {
    let recs = &est.records;
    let mut ts: Vec<f64> = recs.iter().map(|r| r.t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    if ts.len() < MIN_POINTS {
        return Err(Error::FitDegenerate(format!(
            "{} distinct evolution times, need {MIN_POINTS}",
            ts.len()
        )));
    }
    if ts[ts.len() - 1] < MIN_SPAN * ts[0] {
        return Err(Error::FitDegenerate(format!(
            "evolution times span [{}, {}], less than a factor {MIN_SPAN}",
            ts[0],
            ts[ts.len() - 1]
        )));
    }
    if let Some(r) = recs.iter().find(|r| !(r.mean.norm() > MIN_SIGNAL * r.stderr)) {
        return Err(Error::FitDegenerate(format!(
            "|mean| = {:e} at T = {} is within {MIN_SIGNAL} standard errors of zero",
            r.mean.norm(),
            r.t
        )));
    }

    let ys: Vec<f64> = recs.iter().map(|r| -r.mean.norm().ln()).collect();
    let sigmas: Vec<f64> = recs.iter().map(|r| r.stderr_radial / r.mean.norm()).collect();
    let floor = sigmas
        .iter()
        .copied()
        .filter(|s| *s > 0.0)
        .fold(f64::INFINITY, f64::min);
    let weighted = floor.is_finite();
    let weights: Vec<f64> = sigmas
        .iter()
        .map(|s| if weighted { s.max(floor).powi(-2) } else { 1.0 })
        .collect();

    let sw: f64 = weights.iter().sum();
    let t_bar = recs.iter().zip(&weights).map(|(r, w)| w * r.t).sum::<f64>() / sw;
    let y_bar = ys.iter().zip(&weights).map(|(y, w)| w * y).sum::<f64>() / sw;
    let sxx: f64 = recs.iter().zip(&weights).map(|(r, w)| w * (r.t - t_bar).powi(2)).sum();
    let sxy: f64 = recs
        .iter()
        .zip(&ys)
        .zip(&weights)
        .map(|((r, y), w)| w * (r.t - t_bar) * (y - y_bar))
        .sum();
    let rate = sxy / sxx;
    let intercept = y_bar - rate * t_bar;
    let stderr = if weighted {
        (1.0 / sxx).sqrt()
    } else {
        let rss: f64 = recs
            .iter()
            .zip(&ys)
            .map(|(r, y)| (y - intercept - rate * r.t).powi(2))
            .sum();
        (rss / (recs.len() - 2) as f64 / sxx).sqrt()
    };
    Ok(RateFit {
        rate,
        stderr,
        intercept,
    })
}
