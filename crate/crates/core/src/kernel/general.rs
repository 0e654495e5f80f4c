//! Relative change of `rho(x, x')` for an arbitrary stationary `g1`:
//!
//! ```text
//! drho/rho = (M^2 A0^4 c^4 / hbar^2) [ I_overlap - 2 I_self ]
//! I_overlap = int_0^T int_0^T g1(t - t' - d) g1(t - t' + d) dt dt'
//! I_self    = int_0^T int_0^t g1(t - t')^2 dt' dt
//! ```
//!
//! with `d = (x - x')/c`. Both integrands depend on `t - t'` only, so each
//! double integral collapses onto the lag `s`:
//! `I_overlap = 2 int_0^T (T - s) g1(s - d) g1(s + d) ds` (the product is
//! even in `s`) and `I_self = int_0^T (T - s) g1(s)^2 ds`.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::field::CorrelationModel;
use crate::quadrature::{integrate_with_breaks, QuadOptions};

const REL_TOL: f64 = 1e-8;
/// Breakpoint spacing in correlation times; resolves narrow kernels inside
/// long integration ranges.
const PANEL_TAUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelIntegrals {
    pub overlap: f64,
    pub self_term: f64,
    /// Combined quadrature error estimate of `overlap - 2 self_term`.
    pub error: f64,
}

impl KernelIntegrals {
    pub fn bracket(&self) -> f64 {
        self.overlap - 2.0 * self.self_term
    }
}

fn breakpoints(g1: &CorrelationModel, shift: f64, duration: f64) -> Vec<f64> {
    let reach = (g1.support() + shift.abs()).min(duration);
    let panel = PANEL_TAUS * g1.tau();
    let panels = (reach / panel).ceil().max(1.0) as usize;
    let mut pts: Vec<f64> = (0..=panels).map(|k| (k as f64 * panel).min(reach)).collect();
    for knot in g1.knots(g1.support()) {
        for p in [knot, knot - shift.abs(), knot + shift.abs()] {
            if p > 0.0 && p < reach {
                pts.push(p);
            }
        }
    }
    pts.push(duration);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// The two lag integrals, in time^2 units of the correlation model.
pub fn kernel_integrals(g1: &CorrelationModel, shift: f64, duration: f64) -> Result<KernelIntegrals> {
    if !(duration > 0.0) || !shift.is_finite() {
        return Err(Error::param(format!(
            "need T > 0 and finite lag shift, got T = {duration}, d = {shift}"
        )));
    }
    let opts = QuadOptions {
        epsabs: 1e-15 * duration * g1.tau(),
        epsrel: REL_TOL,
        max_intervals: 20_000,
    };
    let weight = |s: f64| duration - s;
    let overlap = integrate_with_breaks(
        |s| weight(s) * g1.g1(s - shift) * g1.g1(s + shift),
        &breakpoints(g1, shift, duration),
        opts,
    )?;
    let self_term = integrate_with_breaks(
        |s| {
            let g = g1.g1(s);
            weight(s) * g * g
        },
        &breakpoints(g1, 0.0, duration),
        opts,
    )?;
    Ok(KernelIntegrals {
        overlap: 2.0 * overlap.value,
        self_term: self_term.value,
        error: 2.0 * overlap.error + 2.0 * self_term.error,
    })
}

/// `delta rho / rho` over duration `T` for separation `delta_x`.
///
/// Valid for `T >> delta_x / c` and `T >> tau`; outside that regime the
/// value is still computed but a warning is logged.
pub fn general_kernel(
    g1: &CorrelationModel,
    delta_x: f64,
    duration: f64,
    mass: f64,
    a0: f64,
    constants: &PhysicalConstants<f64>,
) -> Result<f64> {
    let shift = delta_x / constants.c;
    if duration < 10.0 * g1.tau().max(shift.abs()) {
        log::warn!(
            "T = {duration} is not large against tau = {} and dx/c = {shift}",
            g1.tau()
        );
    }
    let integrals = kernel_integrals(g1, shift, duration)?;
    let omega = constants.rest_energy(mass) / constants.hbar;
    let a2 = a0 * a0;
    Ok(omega * omega * a2 * a2 * integrals.bracket())
}
