use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::scalar::{sqrt_half_pi, Real};

/// Parameters of `d rho/dt = -lambda (1 - exp(-(alpha/4)(x - x')^2)) rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrwParams<T> {
    /// Saturated decoherence rate (1/time).
    pub lambda_grw: T,
    /// Inverse-square localization scale (1/length^2).
    pub alpha: T,
}

impl<T: Real> GrwParams<T> {
    pub fn new(lambda_grw: T, alpha: T) -> Result<Self> {
        if !(lambda_grw >= T::zero()) || !(alpha > T::zero()) {
            return Err(Error::param(format!(
                "need lambda >= 0 and alpha > 0, got lambda = {lambda_grw}, alpha = {alpha}"
            )));
        }
        Ok(Self { lambda_grw, alpha })
    }
}

/// `lambda = sqrt(pi/2) M^2 c^4 A0^4 tau / hbar^2` and `alpha = 8 / (c tau)^2`.
///
/// The rate is assembled as `(M c^2 / hbar)^2 A0^4 tau` so SI inputs stay in
/// range for as long as possible.
pub fn grw_params<T: Real>(mass: T, a0: T, tau: T, constants: &PhysicalConstants<T>) -> GrwParams<T> {
    let omega = constants.rest_energy(mass) / constants.hbar;
    let a2 = a0 * a0;
    let ctau = constants.c * tau;
    GrwParams {
        lambda_grw: sqrt_half_pi::<T>() * omega * omega * a2 * a2 * tau,
        alpha: T::lit(8.0) / (ctau * ctau),
    }
}

/// `lambda (1 - exp(-(alpha/4) dx^2))`: the decay rate of `rho(x, x + dx)`.
pub fn decoherence_rate<T: Real>(delta_x: T, params: &GrwParams<T>) -> T {
    -params.lambda_grw * (-(params.alpha / T::lit(4.0)) * delta_x * delta_x).exp_m1()
}

/// `lambda t (exp(-(alpha/4) dx^2) - 1)`, the first-order relative change
/// `delta rho / rho` over time `t`.
pub fn relative_change<T: Real>(delta_x: T, t: T, params: &GrwParams<T>) -> T {
    -decoherence_rate(delta_x, params) * t
}

/// `exp(lambda t (exp(-(alpha/4) dx^2) - 1))`, the exact factor multiplying
/// `rho(x, x')` after time `t` without free evolution.
pub fn decoherence_factor<T: Real>(delta_x: T, t: T, params: &GrwParams<T>) -> T {
    relative_change(delta_x, t, params).exp()
}
