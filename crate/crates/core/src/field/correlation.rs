use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian `g1` is treated as zero beyond this many correlation times
/// (`exp(-64)` is far below double-precision resolution of `g1(0)`).
const GAUSSIAN_SUPPORT_TAUS: f64 = 8.0;
/// Largest magnitude allowed for the last tabulated entry.
const TABLE_TAIL_LIMIT: f64 = 1e-6;
const TABLE_EVEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationKind {
    Gaussian,
    Tabulated,
}

/// First-order correlation `g1(s)` of the fluctuation processes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationModel {
    kind: CorrelationKind,
    tau: f64,
    /// Non-negative lags, strictly increasing, starting at `(0, 1)`.
    table: Option<Vec<(f64, f64)>>,
}

impl CorrelationModel {
    /// `g1(s) = exp(-s^2 / tau^2)`.
    pub fn gaussian(tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::param(format!("correlation time must be positive, got {tau}")));
        }
        Ok(Self {
            kind: CorrelationKind::Gaussian,
            tau,
            table: None,
        })
    }

    /// Piecewise-linear `g1` through `(lag, value)` pairs.
    ///
    /// Negative lags are accepted only if they mirror the positive side. The
    /// table must contain `g1(0) = 1` and decay below `1e-6` at its last
    /// entry; beyond it `g1` is zero.
    pub fn tabulated(tau: f64, pairs: &[(f64, f64)]) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::param(format!("correlation time must be positive, got {tau}")));
        }
        if pairs.iter().any(|(s, g)| !s.is_finite() || !g.is_finite()) {
            return Err(Error::InvalidTable("non-finite entry".into()));
        }
        let mut positive: Vec<(f64, f64)> = pairs.iter().copied().filter(|(s, _)| *s >= 0.0).collect();
        positive.sort_by(|a, b| a.0.total_cmp(&b.0));
        if positive.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidTable("duplicate lag".into()));
        }
        if positive.len() < 2 {
            return Err(Error::InvalidTable("need at least two non-negative lags".into()));
        }
        if positive[0].0 != 0.0 || (positive[0].1 - 1.0).abs() > TABLE_EVEN_TOL {
            return Err(Error::InvalidTable("g1(0) must equal 1".into()));
        }
        let last = positive[positive.len() - 1].1;
        if last.abs() >= TABLE_TAIL_LIMIT {
            return Err(Error::InvalidTable(format!(
                "last entry {last:e} does not decay below {TABLE_TAIL_LIMIT:e}"
            )));
        }
        if let Some((_, g)) = positive.iter().find(|(_, g)| g.abs() > 1.0 + TABLE_EVEN_TOL) {
            return Err(Error::InvalidTable(format!("|g1| = {g} exceeds g1(0)")));
        }
        let model = Self {
            kind: CorrelationKind::Tabulated,
            tau,
            table: Some(positive),
        };
        for &(s, g) in pairs.iter().filter(|(s, _)| *s < 0.0) {
            let mirror = model.g1(-s);
            if (mirror - g).abs() > TABLE_EVEN_TOL {
                return Err(Error::InvalidTable(format!(
                    "not even: g1({s}) = {g} but g1({}) = {mirror}",
                    -s
                )));
            }
        }
        Ok(model)
    }

    pub fn kind(&self) -> CorrelationKind {
        self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn table(&self) -> Option<&[(f64, f64)]> {
        self.table.as_deref()
    }

    pub fn g1(&self, s: f64) -> f64 {
        let s = s.abs();
        match &self.table {
            None => {
                let u = s / self.tau;
                (-u * u).exp()
            }
            Some(table) => interpolate(table, s),
        }
    }

    /// Second-order correlation `M[xi(t)^2 xi(t+s)^2]` for a Gaussian process.
    pub fn g2_same_stream(&self, s: f64) -> f64 {
        let g = self.g1(s);
        1.0 + 2.0 * g * g
    }

    /// Lag beyond which `g1` is zero (tabulated) or negligible (Gaussian).
    pub fn support(&self) -> f64 {
        match &self.table {
            None => GAUSSIAN_SUPPORT_TAUS * self.tau,
            Some(table) => table[table.len() - 1].0,
        }
    }

    /// Lags where `g1` has kinks, up to `limit`.
    pub(crate) fn knots(&self, limit: f64) -> Vec<f64> {
        match &self.table {
            None => Vec::new(),
            Some(table) => table
                .iter()
                .map(|(s, _)| *s)
                .filter(|s| *s > 0.0 && *s < limit)
                .collect(),
        }
    }

    /// Fourier transform `S(w) = int g1(s) exp(-i w s) ds` of the Gaussian
    /// kernel, `tau sqrt(pi) exp(-w^2 tau^2 / 4)`. `None` for tables.
    pub fn gaussian_spectrum(&self, omega: f64) -> Option<f64> {
        match self.kind {
            CorrelationKind::Gaussian => {
                let u = omega * self.tau;
                Some(self.tau * std::f64::consts::PI.sqrt() * (-u * u / 4.0).exp())
            }
            CorrelationKind::Tabulated => None,
        }
    }
}

fn interpolate(table: &[(f64, f64)], s: f64) -> f64 {
    let idx = table.partition_point(|(lag, _)| *lag <= s);
    if idx == 0 {
        return table[0].1;
    }
    if idx == table.len() {
        return 0.0;
    }
    let (s0, g0) = table[idx - 1];
    let (s1, g1) = table[idx];
    let f = (s - s0) / (s1 - s0);
    (1.0 - f) * g0 + f * g1
}
