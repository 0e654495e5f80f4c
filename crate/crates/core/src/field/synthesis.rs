//! Circulant-embedding synthesis of the fluctuation processes.
//!
//! The sampled grid is embedded in a periodic grid at least `support(g1)`
//! longer than the kept window, so the periodic images of the covariance
//! never reach a kept pair of samples. Each stream is the real part of the
//! FFT of spectrally weighted complex white noise.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::correlation::{CorrelationKind, CorrelationModel};
use crate::error::{Error, Result};

/// Finest allowed ratio `tau / dt`.
pub const MIN_STEPS_PER_TAU: f64 = 8.0;
/// Relative slack when locating shifted times on grid nodes.
const NODE_SNAP: f64 = 1e-9;
/// Spectral components below `-NEGATIVE_SPECTRUM_TOL * max` make a table
/// indefinite; smaller negatives are round-off and clipped to zero.
const NEGATIVE_SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub dt: f64,
    /// Number of samples; node `k` sits at `t_start + k dt`.
    pub n_steps: usize,
    pub t_start: f64,
}

impl FieldGrid {
    pub fn new(dt: f64, n_steps: usize, t_start: f64) -> Self {
        Self { dt, n_steps, t_start }
    }

    /// Smallest grid aligned to multiples of `dt` that contains `[t_min, t_max]`.
    pub fn covering(t_min: f64, t_max: f64, dt: f64) -> Self {
        let first = (t_min / dt + NODE_SNAP).floor();
        let last = (t_max / dt - NODE_SNAP).ceil();
        Self {
            dt,
            n_steps: (last - first) as usize + 1,
            t_start: first * dt,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + (self.n_steps.saturating_sub(1)) as f64 * self.dt
    }

    pub fn duration(&self) -> f64 {
        self.t_end() - self.t_start
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }

    pub fn check_resolution(&self, tau: f64) -> Result<()> {
        let limit = tau / MIN_STEPS_PER_TAU;
        if !(self.dt > 0.0) || self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::ResolutionError { dt: self.dt, limit });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Right-moving, `xi_plus(t - x/c)`.
    Plus,
    /// Left-moving, `xi_minus(t + x/c)`.
    Minus,
}

/// One sampled path of both fluctuation processes.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub grid: FieldGrid,
    pub xi_plus: Vec<f64>,
    pub xi_minus: Vec<f64>,
    pub seed: u64,
}

impl FieldRealization {
    /// Wrap externally supplied samples, e.g. a deterministic test field.
    pub fn from_samples(grid: FieldGrid, xi_plus: Vec<f64>, xi_minus: Vec<f64>, seed: u64) -> Result<Self> {
        if xi_plus.len() != grid.n_steps || xi_minus.len() != grid.n_steps {
            return Err(Error::param(format!(
                "sample arrays ({}, {}) do not match grid size {}",
                xi_plus.len(),
                xi_minus.len(),
                grid.n_steps
            )));
        }
        Ok(Self {
            grid,
            xi_plus,
            xi_minus,
            seed,
        })
    }

    pub fn stream(&self, direction: Direction) -> &[f64] {
        match direction {
            Direction::Plus => &self.xi_plus,
            Direction::Minus => &self.xi_minus,
        }
    }

    /// Contiguous sub-window `[start, start + len)` of both streams.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.grid.n_steps || len < 2 {
            return Err(Error::param(format!(
                "window [{start}, {}) outside {} samples",
                start + len,
                self.grid.n_steps
            )));
        }
        Ok(Self {
            grid: FieldGrid::new(self.grid.dt, len, self.grid.time(start)),
            xi_plus: self.xi_plus[start..start + len].to_vec(),
            xi_minus: self.xi_minus[start..start + len].to_vec(),
            seed: self.seed,
        })
    }

    /// `xi_plus(t - x/c)` or `xi_minus(t + x/c)`, linearly interpolated.
    pub fn field_at(&self, x: f64, t: f64, direction: Direction, c: f64) -> Result<f64> {
        let shifted = match direction {
            Direction::Plus => t - x / c,
            Direction::Minus => t + x / c,
        };
        self.sample_at(shifted, direction)
    }

    /// Linear interpolation of one stream at absolute time `t`.
    pub fn sample_at(&self, t: f64, direction: Direction) -> Result<f64> {
        let grid = &self.grid;
        let last = grid.n_steps - 1;
        let u = (t - grid.t_start) / grid.dt;
        if !(u >= -NODE_SNAP && u <= last as f64 + NODE_SNAP) {
            return Err(Error::OutOfRange {
                t,
                start: grid.t_start,
                end: grid.t_end(),
            });
        }
        let mut k = u.floor();
        let mut frac = u - k;
        if frac > 1.0 - NODE_SNAP {
            k += 1.0;
            frac = 0.0;
        } else if frac < NODE_SNAP {
            frac = 0.0;
        }
        let k = (k.max(0.0) as usize).min(last);
        let xs = self.stream(direction);
        if frac == 0.0 || k == last {
            return Ok(xs[k]);
        }
        Ok((1.0 - frac) * xs[k] + frac * xs[k + 1])
    }
}

/// Reusable sampler: spectrum and FFT plan are computed once per
/// `(model, grid)` and shared across realizations.
#[derive(Clone)]
pub struct FieldSampler {
    model: CorrelationModel,
    grid: FieldGrid,
    amplitudes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FieldSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSampler")
            .field("model", &self.model)
            .field("grid", &self.grid)
            .field("embedding", &self.amplitudes.len())
            .finish()
    }
}

impl FieldSampler {
    pub fn new(model: &CorrelationModel, grid: FieldGrid) -> Result<Self> {
        grid.check_resolution(model.tau())?;
        if grid.n_steps < 2 {
            return Err(Error::param("field grid needs at least two samples"));
        }
        let pad = (model.support() / grid.dt).ceil() as usize + 1;
        let size = (grid.n_steps + pad).next_power_of_two();
        let fft = FftPlanner::new().plan_fft_forward(size);
        let eigenvalues = match model.kind() {
            CorrelationKind::Gaussian => gaussian_eigenvalues(model, grid.dt, size),
            CorrelationKind::Tabulated => table_eigenvalues(model, grid.dt, size, fft.as_ref())?,
        };
        let amplitudes = eigenvalues.iter().map(|l| (l / size as f64).sqrt()).collect();
        Ok(Self {
            model: model.clone(),
            grid,
            amplitudes,
            fft,
        })
    }

    pub fn grid(&self) -> &FieldGrid {
        &self.grid
    }

    pub fn model(&self) -> &CorrelationModel {
        &self.model
    }

    /// Length of the periodic embedding.
    pub fn embedding_size(&self) -> usize {
        self.amplitudes.len()
    }

    /// Eigenvalues of the embedded circulant covariance.
    pub fn spectrum(&self) -> Vec<f64> {
        let n = self.amplitudes.len() as f64;
        self.amplitudes.iter().map(|a| a * a * n).collect()
    }

    /// Draw one realization. `xi_plus` uses ChaCha stream 0 and `xi_minus`
    /// stream 1 of the generator keyed by `seed`.
    pub fn sample(&self, seed: u64) -> FieldRealization {
        FieldRealization {
            grid: self.grid,
            xi_plus: self.sample_stream(seed, 0),
            xi_minus: self.sample_stream(seed, 1),
            seed,
        }
    }

    fn sample_stream(&self, seed: u64, stream: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&a| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(a * re, a * im)
            })
            .collect();
        self.fft.process(&mut buf);
        buf.truncate(self.grid.n_steps);
        buf.into_iter().map(|z| z.re).collect()
    }
}

/// Eigenvalues of the circulant Gaussian covariance from the closed-form
/// spectrum via Poisson summation:
/// `lambda_k = (1/dt) sum_p S(w_k + 2 pi p / dt)`.
fn gaussian_eigenvalues(model: &CorrelationModel, dt: f64, size: usize) -> Vec<f64> {
    let omega_unit = 2.0 * PI / (size as f64 * dt);
    let alias = 2.0 * PI / dt;
    (0..size)
        .map(|k| {
            let signed = if k <= size / 2 {
                k as f64
            } else {
                k as f64 - size as f64
            };
            let w = signed * omega_unit;
            (-3..=3)
                .map(|p| model.gaussian_spectrum(w + p as f64 * alias).unwrap_or(0.0))
                .sum::<f64>()
                / dt
        })
        .collect()
}

fn table_eigenvalues(model: &CorrelationModel, dt: f64, size: usize, fft: &dyn Fft<f64>) -> Result<Vec<f64>> {
    let mut row: Vec<Complex64> = (0..size)
        .map(|j| Complex64::new(model.g1(j.min(size - j) as f64 * dt), 0.0))
        .collect();
    fft.process(&mut row);
    let peak = row.iter().map(|z| z.re).fold(0.0f64, f64::max);
    if let Some((index, z)) = row
        .iter()
        .enumerate()
        .find(|(_, z)| z.re < -NEGATIVE_SPECTRUM_TOL * peak)
    {
        return Err(Error::IndefiniteCovariance { index, value: z.re });
    }
    Ok(row.iter().map(|z| z.re.max(0.0)).collect())
}

/// Sample one realization of `model` on `grid`.
pub fn sample_field(model: &CorrelationModel, grid: FieldGrid, seed: u64) -> Result<FieldRealization> {
    Ok(FieldSampler::new(model, grid)?.sample(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp_realization() -> FieldRealization {
        let grid = FieldGrid::new(0.125, 9, -0.5);
        let plus: Vec<f64> = (0..9).map(|k| k as f64).collect();
        let minus: Vec<f64> = (0..9).map(|k| (k * k) as f64).collect();
        FieldRealization::from_samples(grid, plus, minus, 0).unwrap()
    }

    #[test]
    fn field_at_on_grid_and_shifted() {
        let r = ramp_realization();
        let c = 1.0;
        let tk = r.grid.time(5);
        assert_eq!(r.field_at(0.0, tk, Direction::Plus, c).unwrap(), r.xi_plus[5]);
        assert_eq!(r.field_at(c * 0.125, tk, Direction::Plus, c).unwrap(), r.xi_plus[4]);
        assert_eq!(r.field_at(c * 0.125, tk, Direction::Minus, c).unwrap(), r.xi_minus[6]);
        let mid = r.field_at(0.5 * c * 0.125, tk, Direction::Minus, c).unwrap();
        assert_eq!(mid, (r.xi_minus[5] + r.xi_minus[6]) / 2.0);
    }

    #[test]
    fn field_at_explicit_c() {
        let r = ramp_realization();
        let c = 3.0e8;
        let tk = r.grid.time(4);
        assert_eq!(r.field_at(c * 0.25, tk, Direction::Plus, c).unwrap(), r.xi_plus[2]);
    }

    #[test]
    fn field_at_out_of_range() {
        let r = ramp_realization();
        assert!(matches!(
            r.field_at(0.0, -0.6, Direction::Plus, 1.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            r.field_at(-1.0, 0.0, Direction::Plus, 1.0),
            Err(Error::OutOfRange { .. })
        ));
        assert_eq!(r.field_at(0.0, 0.5, Direction::Plus, 1.0).unwrap(), 8.0);
    }

    #[test]
    fn covering_grid_is_aligned() {
        let g = FieldGrid::covering(-7.0, 412.3, 0.125);
        assert_eq!(g.t_start, -7.0);
        assert!(g.t_end() >= 412.3 && g.t_end() < 412.3 + 0.125);
        assert_eq!(g.time(56), 0.0);
    }

    #[test]
    fn resolution_guard() {
        let m = CorrelationModel::gaussian(1.0).unwrap();
        let err = sample_field(&m, FieldGrid::new(0.5, 100, 0.0), 1).unwrap_err();
        assert!(matches!(err, Error::ResolutionError { .. }));
        assert!(sample_field(&m, FieldGrid::new(0.125, 100, 0.0), 1).is_ok());
    }

    #[test]
    fn deterministic_and_independent_streams() {
        let m = CorrelationModel::gaussian(1.0).unwrap();
        let grid = FieldGrid::new(0.125, 500, 0.0);
        let a = sample_field(&m, grid, 7).unwrap();
        let b = sample_field(&m, grid, 7).unwrap();
        let c = sample_field(&m, grid, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.xi_plus, c.xi_plus);
        assert_ne!(a.xi_plus, a.xi_minus);
    }

    #[test]
    fn gaussian_spectrum_matches_fft_of_covariance_row() {
        let m = CorrelationModel::gaussian(1.0).unwrap();
        let grid = FieldGrid::new(0.125, 200, 0.0);
        let sampler = FieldSampler::new(&m, grid).unwrap();
        let size = sampler.embedding_size();
        let fft = FftPlanner::new().plan_fft_forward(size);
        let direct = table_free_row_spectrum(&m, grid.dt, size, fft.as_ref());
        for (a, b) in sampler.spectrum().iter().zip(direct) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            assert!(*a >= 0.0);
        }
    }

    fn table_free_row_spectrum(m: &CorrelationModel, dt: f64, size: usize, fft: &dyn Fft<f64>) -> Vec<f64> {
        let mut row: Vec<Complex64> = (0..size)
            .map(|j| Complex64::new(m.g1(j.min(size - j) as f64 * dt), 0.0))
            .collect();
        fft.process(&mut row);
        row.into_iter().map(|z| z.re).collect()
    }

    #[test]
    fn indefinite_table_rejected() {
        // A box-shaped g1 has a sinc spectrum with negative lobes.
        let table = [(0.0, 1.0), (0.999, 1.0), (1.0, 0.0)];
        let m = CorrelationModel::tabulated(1.0, &table).unwrap();
        let err = sample_field(&m, FieldGrid::new(0.125, 64, 0.0), 1).unwrap_err();
        assert!(matches!(err, Error::IndefiniteCovariance { .. }));
    }

    #[test]
    fn triangle_table_is_valid() {
        let table = [(0.0, 1.0), (1.0, 0.0)];
        let m = CorrelationModel::tabulated(1.0, &table).unwrap();
        let r = sample_field(&m, FieldGrid::new(0.125, 64, 0.0), 1).unwrap();
        assert_eq!(r.xi_plus.len(), 64);
    }
}
