use super::params::McParams;
use crate::error::{Error, Result};
use crate::field::{Direction, FieldRealization};

fn potential(r: &FieldRealization, x: f64, t: f64, params: &McParams, half_rest: f64) -> Result<f64> {
    let c = params.constants.c;
    let xi = r.field_at(x, t, Direction::Plus, c)? + r.field_at(x, t, Direction::Minus, c)?;
    let a = params.a0 * xi;
    Ok(half_rest * a * (2.0 + a))
}

/// `phi(x, T) = -(1/hbar) int_0^T V(x, t) dt` for every `T` in `times`.
///
/// One trapezoid sweep over the realization's time step serves all
/// requested end points, so phases at different `T` share their common
/// prefix. `times` need not be sorted.
pub fn phase_history(r: &FieldRealization, x: f64, times: &[f64], params: &McParams) -> Result<Vec<f64>> {
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::param(format!("evolution time {t} is negative")));
    }
    let dt = r.grid.dt;
    let half_rest = params.constants.rest_energy(params.mass) / 2.0;
    let scale = -1.0 / params.constants.hbar;
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));

    let mut out = vec![0.0; times.len()];
    let mut integral = 0.0;
    let mut t_node = 0.0;
    let mut k = 0usize;
    let mut v_node = potential(r, x, 0.0, params, half_rest)?;
    for idx in order {
        let target = times[idx];
        // Advance whole steps while the next node is not past the target.
        while (k + 1) as f64 * dt <= target * (1.0 + 1e-12) {
            let t_next = (k + 1) as f64 * dt;
            let v_next = potential(r, x, t_next, params, half_rest)?;
            integral += 0.5 * dt * (v_node + v_next);
            v_node = v_next;
            t_node = t_next;
            k += 1;
        }
        let rest = target - t_node;
        let partial = if rest > 1e-12 * dt {
            let v_end = potential(r, x, target, params, half_rest)?;
            0.5 * rest * (v_node + v_end)
        } else {
            0.0
        };
        out[idx] = scale * (integral + partial);
    }
    Ok(out)
}

/// Accumulated phase of a component frozen at `x` over `[0, T]`.
pub fn accumulate_phase(r: &FieldRealization, x: f64, duration: f64, params: &McParams) -> Result<f64> {
    Ok(phase_history(r, x, &[duration], params)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample_field, FieldGrid};

    fn constant_field(plus: f64, minus: f64) -> FieldRealization {
        let grid = FieldGrid::new(0.125, 41, -1.0);
        FieldRealization::from_samples(grid, vec![plus; 41], vec![minus; 41], 0).unwrap()
    }

    #[test]
    fn zero_amplitude_gives_zero_phase() {
        let p = McParams {
            a0: 0.0,
            ..McParams::natural(0.1, 1.0, vec![1.0], 100, 0)
        };
        let r = constant_field(1.3, -0.4);
        assert_eq!(accumulate_phase(&r, 0.25, 3.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn constant_unit_field() {
        let p = McParams::natural(0.1, 1.0, vec![1.0], 100, 0);
        let r = constant_field(1.0, 0.0);
        let phi = accumulate_phase(&r, 0.0, 1.0, &p).unwrap();
        assert!((phi + 0.105).abs() < 1e-15, "{phi}");
        // Off-grid end point and shifted position.
        let phi = accumulate_phase(&r, 0.3, 1.05, &p).unwrap();
        assert!((phi + 0.105 * 1.05).abs() < 1e-14, "{phi}");
    }

    #[test]
    fn history_matches_individual_calls() {
        let p = McParams::natural(0.1, 1.0, vec![1.0], 100, 0);
        let model = p.model().unwrap();
        let r = sample_field(&model, FieldGrid::covering(-3.0, 30.0, 0.125), 5).unwrap();
        let times = [20.0, 5.0, 12.5, 7.3];
        let h = phase_history(&r, 0.5, &times, &p).unwrap();
        for (t, v) in times.iter().zip(&h) {
            let single = accumulate_phase(&r, 0.5, *t, &p).unwrap();
            assert!((single - v).abs() < 1e-12 * single.abs().max(1.0));
        }
    }

    #[test]
    fn out_of_range_propagates() {
        let p = McParams::natural(0.1, 1.0, vec![1.0], 100, 0);
        let r = constant_field(1.0, 1.0);
        assert!(matches!(
            accumulate_phase(&r, 0.0, 10.0, &p),
            Err(Error::OutOfRange { .. })
        ));
    }
}
