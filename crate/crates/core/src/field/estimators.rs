//! Sample estimators of the correlation structure.
//!
//! Standard errors use batch means over contiguous blocks, each many
//! correlation times long, so serial correlation inside a stream is
//! accounted for without modelling it.

use serde::{Deserialize, Serialize};

use super::synthesis::FieldRealization;
use crate::error::{Error, Result};
use crate::field::{CorrelationModel, FieldGrid};

const MIN_BATCHES: usize = 8;
const MAX_BATCHES: usize = 64;
/// Target batch length in correlation times.
const BATCH_TAUS: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagEstimate {
    pub lag: f64,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub order: u32,
    pub estimate: f64,
    pub stderr: f64,
}

/// Same-stream and cross-stream estimates at lags `0, dt, 2 dt, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimates {
    pub plus: Vec<LagEstimate>,
    pub minus: Vec<LagEstimate>,
    /// `xi_plus(t) xi_minus(t + lag)` statistics.
    pub cross: Vec<LagEstimate>,
}

impl CorrelationEstimates {
    /// Entry whose lag is closest to `lag`.
    pub fn nearest(list: &[LagEstimate], lag: f64) -> Option<&LagEstimate> {
        list.iter()
            .min_by(|a, b| (a.lag - lag).abs().total_cmp(&(b.lag - lag).abs()))
    }
}

/// Mean and batch-means standard error of `values[0..len]`.
fn mean_with_stderr(len: usize, batches: usize, value: impl Fn(usize) -> f64) -> (f64, f64) {
    let total: f64 = (0..len).map(&value).sum();
    let mean = total / len as f64;
    let size = len / batches;
    let batch_means: Vec<f64> = (0..batches)
        .map(|b| (b * size..(b + 1) * size).map(&value).sum::<f64>() / size as f64)
        .collect();
    let bm = batch_means.iter().sum::<f64>() / batches as f64;
    let var = batch_means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

fn batch_count(r: &FieldRealization, len: usize) -> usize {
    let tau_guess = r.grid.dt * 8.0;
    let by_length = (len as f64 * r.grid.dt / (BATCH_TAUS * tau_guess)) as usize;
    by_length.clamp(MIN_BATCHES, MAX_BATCHES).min(len / 2).max(2)
}

fn lag_steps(r: &FieldRealization, max_lag: f64) -> Result<usize> {
    let duration = r.grid.duration();
    if !(max_lag >= 0.0) || max_lag >= duration / 4.0 {
        return Err(Error::param(format!(
            "max_lag {max_lag} must be below a quarter of the realization ({duration})"
        )));
    }
    Ok((max_lag / r.grid.dt + 1e-9).floor() as usize)
}

fn lag_series(
    r: &FieldRealization,
    max_k: usize,
    a: &[f64],
    b: &[f64],
    transform: impl Fn(f64) -> f64 + Copy,
) -> Vec<LagEstimate> {
    let n = a.len();
    (0..=max_k)
        .map(|k| {
            let len = n - k;
            let (estimate, stderr) =
                mean_with_stderr(len, batch_count(r, len), |i| transform(a[i]) * transform(b[i + k]));
            LagEstimate {
                lag: k as f64 * r.grid.dt,
                estimate,
                stderr,
            }
        })
        .collect()
}

/// Autocovariance of each stream and the cross-covariance, about the known
/// zero mean, with `1/(n - k)` normalization.
pub fn estimate_g1(r: &FieldRealization, max_lag: f64) -> Result<CorrelationEstimates> {
    let max_k = lag_steps(r, max_lag)?;
    let id = |x: f64| x;
    Ok(CorrelationEstimates {
        plus: lag_series(r, max_k, &r.xi_plus, &r.xi_plus, id),
        minus: lag_series(r, max_k, &r.xi_minus, &r.xi_minus, id),
        cross: lag_series(r, max_k, &r.xi_plus, &r.xi_minus, id),
    })
}

/// Exact standard error of the [`estimate_g1`] entry at `lag` for a field
/// drawn from `model` on `grid` (Bartlett's formula, Gaussian field).
/// `cross` selects the cross-stream estimator.
pub fn g1_estimator_stderr(model: &CorrelationModel, grid: &FieldGrid, lag: f64, cross: bool) -> f64 {
    let dt = grid.dt;
    let m = (lag / dt).round() as i64;
    let len = grid.n_steps as i64 - m;
    if len <= 0 {
        return f64::NAN;
    }
    let reach = (((model.support() + lag) / dt).ceil() as i64 + 1).min(len - 1);
    let g = |h: i64| model.g1(h as f64 * dt);
    let nf = len as f64;
    let var: f64 = (-reach..=reach)
        .map(|h| {
            let paired = if cross { 0.0 } else { g(h + m) * g(h - m) };
            (1.0 - h.abs() as f64 / nf) * (g(h) * g(h) + paired)
        })
        .sum::<f64>()
        / nf;
    var.sqrt()
}

/// `M[xi(t)^2 xi(t + lag)^2]` for each stream and across streams.
pub fn estimate_g2(r: &FieldRealization, max_lag: f64) -> Result<CorrelationEstimates> {
    let max_k = lag_steps(r, max_lag)?;
    let sq = |x: f64| x * x;
    Ok(CorrelationEstimates {
        plus: lag_series(r, max_k, &r.xi_plus, &r.xi_plus, sq),
        minus: lag_series(r, max_k, &r.xi_minus, &r.xi_minus, sq),
        cross: lag_series(r, max_k, &r.xi_plus, &r.xi_minus, sq),
    })
}

fn pooled_moment(r: &FieldRealization, f: impl Fn(f64) -> f64 + Copy) -> (f64, f64) {
    let n = r.grid.n_steps;
    let batches = batch_count(r, n);
    let (mp, sp) = mean_with_stderr(n, batches, |i| f(r.xi_plus[i]));
    let (mm, sm) = mean_with_stderr(n, batches, |i| f(r.xi_minus[i]));
    ((mp + mm) / 2.0, (sp * sp + sm * sm).sqrt() / 2.0)
}

/// Sample odd moments `M[xi^n]`, pooled over both streams.
pub fn odd_moment_check(r: &FieldRealization, orders: &[u32]) -> Result<Vec<MomentEstimate>> {
    if let Some(&even) = orders.iter().find(|o| *o % 2 == 0) {
        return Err(Error::EvenOrderRejected(even));
    }
    if let Some(&big) = orders.iter().find(|o| **o > 7) {
        return Err(Error::param(format!("moment order {big} above 7")));
    }
    Ok(orders
        .iter()
        .map(|&order| {
            let (estimate, stderr) = pooled_moment(r, |x| x.powi(order as i32));
            MomentEstimate {
                order,
                estimate,
                stderr,
            }
        })
        .collect())
}

/// Excess kurtosis `m4 / m2^2 - 3`, pooled over both streams. The standard
/// error comes from the spread of per-batch kurtosis values.
pub fn excess_kurtosis(r: &FieldRealization) -> MomentEstimate {
    let n = r.grid.n_steps;
    let batches = batch_count(r, n);
    let size = n / batches;
    let kurt = |xs: &[f64]| {
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        let m4 = xs.iter().map(|x| x.powi(4)).sum::<f64>() / xs.len() as f64;
        m4 / (m2 * m2) - 3.0
    };
    let mut per_batch = Vec::with_capacity(2 * batches);
    for stream in [&r.xi_plus, &r.xi_minus] {
        per_batch.extend((0..batches).map(|b| kurt(&stream[b * size..(b + 1) * size])));
    }
    let m = per_batch.len() as f64;
    let mean = per_batch.iter().sum::<f64>() / m;
    let var = per_batch.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let overall = (kurt(&r.xi_plus) + kurt(&r.xi_minus)) / 2.0;
    MomentEstimate {
        order: 4,
        estimate: overall,
        stderr: (var / m).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::sample_field;

    fn constant(n: usize) -> FieldRealization {
        let grid = FieldGrid::new(0.125, n, 0.0);
        FieldRealization::from_samples(grid, vec![2.0; n], vec![-1.0; n], 0).unwrap()
    }

    #[test]
    fn constant_series_estimates() {
        let r = constant(1024);
        let g1 = estimate_g1(&r, 1.0).unwrap();
        assert_eq!(g1.plus.len(), 9);
        assert!(g1.plus.iter().all(|e| e.estimate == 4.0 && e.stderr == 0.0));
        assert!(g1.cross.iter().all(|e| e.estimate == -2.0));
        let g2 = estimate_g2(&r, 0.5).unwrap();
        assert!(g2.minus.iter().all(|e| e.estimate == 1.0));
        assert!(g2.cross.iter().all(|e| e.estimate == 4.0));
    }

    #[test]
    fn max_lag_precondition() {
        let r = constant(1024);
        // duration 127.875
        assert!(estimate_g1(&r, 32.0).is_err());
        assert!(estimate_g1(&r, 31.0).is_ok());
    }

    #[test]
    fn moment_orders() {
        let r = constant(256);
        assert_eq!(odd_moment_check(&r, &[1, 2]), Err(Error::EvenOrderRejected(2)));
        assert!(odd_moment_check(&r, &[9]).is_err());
        let m = odd_moment_check(&r, &[1, 3]).unwrap();
        assert_eq!(m[0].estimate, 0.5);
        assert_eq!(m[1].estimate, 3.5);
    }

    #[test]
    fn exact_stderr_matches_seed_spread() {
        let model = CorrelationModel::gaussian(1.0).unwrap();
        let grid = FieldGrid::new(0.125, 1 << 12, 0.0);
        let sampler = crate::field::FieldSampler::new(&model, grid).unwrap();
        let draws: Vec<(f64, f64)> = (0..400)
            .map(|seed| {
                let g1 = estimate_g1(&sampler.sample(seed), 1.0).unwrap();
                (g1.plus[8].estimate, g1.cross[8].estimate)
            })
            .collect();
        let sd = |xs: Vec<f64>| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
        };
        let same = sd(draws.iter().map(|d| d.0).collect());
        let cross = sd(draws.iter().map(|d| d.1).collect());
        let want_same = g1_estimator_stderr(&model, &grid, 1.0, false);
        let want_cross = g1_estimator_stderr(&model, &grid, 1.0, true);
        // 400 draws: the sample sd has about 3.5 % relative noise
        assert!((same / want_same - 1.0).abs() < 0.12, "{same} vs {want_same}");
        assert!((cross / want_cross - 1.0).abs() < 0.12, "{cross} vs {want_cross}");
    }

    #[test]
    fn gaussian_field_moments() {
        let model = CorrelationModel::gaussian(1.0).unwrap();
        let r = sample_field(&model, FieldGrid::new(0.125, 1 << 15, 0.0), 42).unwrap();
        let n_eff = (r.grid.n_steps as f64) * r.grid.dt / model.tau();
        let mean = r.xi_plus.iter().sum::<f64>() / r.grid.n_steps as f64;
        assert!(mean.abs() < 4.0 / n_eff.sqrt());
        let g1 = estimate_g1(&r, 3.0).unwrap();
        assert!((0.95..=1.05).contains(&g1.plus[0].estimate));
        for order in odd_moment_check(&r, &[1, 3, 5]).unwrap() {
            assert!(order.estimate.abs() < 4.0 * order.stderr, "{order:?}");
        }
        let k = excess_kurtosis(&r);
        assert!(k.estimate.abs() < 4.0 * k.stderr, "{k:?}");
    }
}
