//! Conformal factor `f = (1 + A)^(4/(D-2))` and the Newtonian potential of a
//! particle of mass `M` in a conformal field.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Spacetime dimension used everywhere downstream of this module.
pub const DEFAULT_DIMENSION: i32 = 4;

/// `(1 + A)^(4/(D-2))`.
///
/// Below `A = -1` the base is negative. The result is real only when the
/// exponent `4/(D-2)` is an integer (`D = 3, 4, 6`); for `D = 5` and `D > 6`
/// the metric is complex and [`Error::NonPhysicalMetric`] is returned.
pub fn conformal_factor<T: Real>(amplitude: T, dimension: i32) -> Result<T> {
    if dimension < 3 {
        return Err(Error::InvalidDimension(dimension));
    }
    let base = T::one() + amplitude;
    let denom = dimension - 2;
    if 4 % denom == 0 {
        return Ok(base.powi(4 / denom));
    }
    if base < T::zero() {
        return Err(Error::NonPhysicalMetric {
            amplitude: amplitude.to_f64_lossy(),
            dimension,
        });
    }
    Ok(base.powf(T::lit(4.0) / T::lit(denom as f64)))
}

/// `(M c^2 / 2) [f(A) - 1]`.
///
/// In `D = 4` this is `(M c^2 / 2)(2A + A^2)`, evaluated in that expanded form
/// so the linear term survives for tiny amplitudes.
pub fn newtonian_potential<T: Real>(
    amplitude: T,
    mass: T,
    constants: &PhysicalConstants<T>,
    dimension: i32,
) -> Result<T> {
    let half_rest = constants.rest_energy(mass) / T::lit(2.0);
    if dimension == 4 {
        return Ok(half_rest * amplitude * (T::lit(2.0) + amplitude));
    }
    let f = conformal_factor(amplitude, dimension)?;
    Ok(half_rest * (f - T::one()))
}
