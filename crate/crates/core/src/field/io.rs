//! CSV export of realizations and estimates.

use std::io::Write;

use super::estimators::{LagEstimate, MomentEstimate};
use super::synthesis::FieldRealization;

pub fn write_realization_csv<W: Write>(mut w: W, r: &FieldRealization, time_unit: &str) -> std::io::Result<()> {
    writeln!(w, "t[{time_unit}],xi_plus[1],xi_minus[1]")?;
    for k in 0..r.grid.n_steps {
        writeln!(w, "{},{},{}", r.grid.time(k), r.xi_plus[k], r.xi_minus[k])?;
    }
    Ok(())
}

pub fn write_lag_estimates_csv<W: Write>(mut w: W, rows: &[LagEstimate], time_unit: &str) -> std::io::Result<()> {
    writeln!(w, "lag[{time_unit}],estimate[1],stderr[1]")?;
    for e in rows {
        writeln!(w, "{},{},{}", e.lag, e.estimate, e.stderr)?;
    }
    Ok(())
}

pub fn write_moments_csv<W: Write>(mut w: W, rows: &[MomentEstimate]) -> std::io::Result<()> {
    writeln!(w, "order,estimate[1],stderr[1]")?;
    for e in rows {
        writeln!(w, "{},{},{}", e.order, e.estimate, e.stderr)?;
    }
    Ok(())
}
