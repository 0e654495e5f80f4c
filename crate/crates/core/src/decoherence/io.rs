//! Coherence CSV and run manifest.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ensemble::CoherenceEstimate;
use super::params::McParams;

/// Columns `(delta_x, T, re_mean, im_mean, stderr, n)`.
pub fn write_coherence_csv<W: Write>(
    mut w: W,
    est: &CoherenceEstimate,
    length_unit: &str,
    time_unit: &str,
) -> std::io::Result<()> {
    writeln!(
        w,
        "delta_x[{length_unit}],T[{time_unit}],re_mean[1],im_mean[1],stderr[1],n"
    )?;
    for r in &est.records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            est.delta_x, r.t, r.mean.re, r.mean.im, r.stderr, r.n
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McManifest {
    pub params: McParams,
    pub seed: u64,
    pub version: String,
}

impl McManifest {
    pub fn new(params: &McParams) -> Self {
        Self {
            params: params.clone(),
            seed: params.seed,
            version: crate::VERSION.to_string(),
        }
    }
}
