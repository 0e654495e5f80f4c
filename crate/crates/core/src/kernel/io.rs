//! Density-matrix import/export (CSV of `(x_i, x_j, re, im)` and JSON) and
//! kernel-curve CSV.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub dx: f64,
    pub x0: f64,
}

/// JSON layout: `{"grid": {"n", "dx", "x0"}, "entries": [[re, im], ...]}`,
/// entries row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub grid: GridSpec,
    pub entries: Vec<[f64; 2]>,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        Self {
            grid: GridSpec {
                n: rho.n(),
                dx: rho.dx(),
                x0: rho.x0(),
            },
            entries: rho.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let entries = j.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        DensityMatrix::from_entries(j.grid.x0, j.grid.dx, j.grid.n, entries)
    }
}

pub fn to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&DensityMatrixJson::from(rho)).expect("density matrix serializes")
}

pub fn from_json(text: &str) -> Result<DensityMatrix> {
    let j: DensityMatrixJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidDensityMatrix(format!("json: {e}")))?;
    j.try_into()
}

pub fn write_csv<W: Write>(mut w: W, rho: &DensityMatrix, length_unit: &str) -> std::io::Result<()> {
    writeln!(
        w,
        "x[{length_unit}],x_prime[{length_unit}],re[1/{length_unit}],im[1/{length_unit}]"
    )?;
    for i in 0..rho.n() {
        for j in 0..rho.n() {
            let z = rho.get(i, j);
            writeln!(w, "{},{},{},{}", rho.x(i), rho.x(j), z.re, z.im)?;
        }
    }
    Ok(())
}

/// Parse the CSV written by [`write_csv`]. Rows may come in any order; the
/// grid is recovered from the distinct `x` values, which must be uniform.
pub fn read_csv<R: BufRead>(r: R) -> Result<DensityMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || lineno == 0 && line.starts_with('x') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidDensityMatrix(format!("line {}: {e}", lineno + 1)))?;
        if fields.len() != 4 {
            return Err(Error::InvalidDensityMatrix(format!(
                "line {}: expected 4 columns, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        rows.push((fields[0], fields[1], Complex64::new(fields[2], fields[3])));
    }
    let mut xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let n = xs.len();
    if n == 0 || rows.len() != n * n {
        return Err(Error::InvalidDensityMatrix(format!(
            "{} rows do not form a square grid over {n} positions",
            rows.len()
        )));
    }
    let x0 = xs[0];
    let dx = if n > 1 { (xs[n - 1] - x0) / (n - 1) as f64 } else { 1.0 };
    if xs.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > 1e-9 * dx) {
        return Err(Error::InvalidDensityMatrix("positions are not uniformly spaced".into()));
    }
    let index = |x: f64| ((x - x0) / dx).round() as usize;
    let mut entries = vec![Complex64::new(f64::NAN, f64::NAN); n * n];
    for (x, xp, z) in rows {
        let (i, j) = (index(x), index(xp));
        if i >= n || j >= n {
            return Err(Error::InvalidDensityMatrix(format!("position ({x}, {xp}) off grid")));
        }
        entries[i * n + j] = z;
    }
    DensityMatrix::from_entries(x0, dx, n, entries)
}

/// Rows `(delta_x, t, factor)`.
pub fn write_kernel_curve_csv<W: Write>(
    mut w: W,
    rows: &[(f64, f64, f64)],
    length_unit: &str,
    time_unit: &str,
) -> std::io::Result<()> {
    writeln!(w, "delta_x[{length_unit}],t[{time_unit}],factor[1]")?;
    for (dx, t, f) in rows {
        writeln!(w, "{dx},{t},{f}")?;
    }
    Ok(())
}
