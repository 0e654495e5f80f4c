use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::field::{CorrelationModel, FieldGrid};
use crate::kernel::{decoherence_rate, grw_params, GrwParams};

/// Hard ceiling on the fluctuation amplitude.
pub const A0_LIMIT: f64 = 0.2;
/// Amplitudes above this trigger a warning: neglected higher orders grow.
pub const A0_WARN: f64 = 0.1;
pub const MIN_SAMPLES: usize = 100;
/// Required ratio between every evolution time and the light-crossing time.
const CROSSING_RATIO: f64 = 10.0;
/// Realizations extend this many correlation times past the needed window.
const GRID_MARGIN_TAUS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub a0: f64,
    pub mass: f64,
    pub tau: f64,
    /// Field time step; defaults to `tau / 8`.
    pub dt: f64,
    pub constants: PhysicalConstants<f64>,
    /// Wavepacket component positions `(x, x')`.
    pub positions: (f64, f64),
    pub t_list: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
}

impl McParams {
    /// Natural units (`c = hbar = 1`, `M = 1`, `tau = 1`) with components at
    /// `0` and `delta_x`.
    pub fn natural(a0: f64, delta_x: f64, t_list: Vec<f64>, n_samples: usize, seed: u64) -> Self {
        Self {
            a0,
            mass: 1.0,
            tau: 1.0,
            dt: 0.125,
            constants: PhysicalConstants::natural(),
            positions: (0.0, delta_x),
            t_list,
            n_samples,
            seed,
        }
    }

    pub fn delta_x(&self) -> f64 {
        (self.positions.1 - self.positions.0).abs()
    }

    pub fn t_max(&self) -> f64 {
        self.t_list.iter().copied().fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        let k = &self.constants;
        for (name, v) in [
            ("mass", self.mass),
            ("tau", self.tau),
            ("dt", self.dt),
            ("c", k.c),
            ("hbar", k.hbar),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.a0 > 0.0 && self.a0 <= A0_LIMIT) {
            return Err(Error::param(format!("A0 must lie in (0, {A0_LIMIT}], got {}", self.a0)));
        }
        if self.a0 > A0_WARN {
            log::warn!(
                "A0 = {} above {A0_WARN}: higher-order corrections may exceed tolerance",
                self.a0
            );
        }
        if !(self.positions.0.is_finite() && self.positions.1.is_finite()) {
            return Err(Error::param("positions must be finite"));
        }
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::InsufficientSamples(self.n_samples));
        }
        if self.t_list.is_empty() {
            return Err(Error::param("empty evolution-time list"));
        }
        let crossing = self.delta_x() / k.c;
        if let Some(t) = self
            .t_list
            .iter()
            .find(|t| !(t.is_finite() && **t > 0.0 && **t > CROSSING_RATIO * crossing))
        {
            return Err(Error::param(format!(
                "evolution time {t} must be positive and exceed {CROSSING_RATIO} x the light-crossing time {crossing}"
            )));
        }
        self.model()?;
        Ok(())
    }

    pub fn model(&self) -> Result<CorrelationModel> {
        CorrelationModel::gaussian(self.tau)
    }

    /// Grid covering `[-max|x|/c - 2 tau, T_max + max|x|/c + 2 tau]`.
    pub fn field_grid(&self) -> FieldGrid {
        let reach = self.positions.0.abs().max(self.positions.1.abs()) / self.constants.c;
        let margin = GRID_MARGIN_TAUS * self.tau;
        FieldGrid::covering(-reach - margin, self.t_max() + reach + margin, self.dt)
    }

    pub fn grw(&self) -> GrwParams<f64> {
        grw_params(self.mass, self.a0, self.tau, &self.constants)
    }

    /// `lambda (1 - exp(-2 dx^2 / (c tau)^2))`.
    pub fn analytic_rate(&self) -> f64 {
        decoherence_rate(self.delta_x(), &self.grw())
    }
}
