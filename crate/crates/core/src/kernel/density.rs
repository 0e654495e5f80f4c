//! One-dimensional density matrices on a uniform position grid.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::grw::{decoherence_factor, GrwParams};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Largest change allowed when the split-step size is halved.
pub const STEP_HALVING_TOL: f64 = 1e-6;

/// `rho(x_i, x_j)` on `x_i = x0 + i dx`, with trace `sum_i rho_ii dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    x0: f64,
    dx: f64,
    n: usize,
    /// Row-major `n * n`.
    entries: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub trace: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        (self.trace - 1.0).abs() <= TRACE_TOL
            && self.hermiticity_error <= HERMITICITY_TOL
            && self.min_eigenvalue >= -POSITIVITY_TOL
    }
}

impl DensityMatrix {
    /// Validate hermiticity and normalize the trace to one.
    pub fn from_entries(x0: f64, dx: f64, n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 || !(dx > 0.0) || !x0.is_finite() {
            return Err(Error::InvalidDensityMatrix(format!(
                "bad grid: n = {n}, dx = {dx}, x0 = {x0}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let mut rho = Self { x0, dx, n, entries };
        let herm = rho.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not hermitian (error {herm:e})")));
        }
        let trace = rho.trace();
        if !(trace > 0.0) {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} is not positive")));
        }
        rho.entries.iter_mut().for_each(|z| *z /= trace);
        Ok(rho)
    }

    /// `|psi><psi|`, normalized so that `sum |psi_i|^2 dx = 1`.
    pub fn pure(x0: f64, dx: f64, psi: &[Complex64]) -> Result<Self> {
        let n = psi.len();
        let mut entries = Vec::with_capacity(n * n);
        for a in psi {
            for b in psi {
                entries.push(a * b.conj());
            }
        }
        Self::from_entries(x0, dx, n, entries)
    }

    /// Pure Gaussian wavepacket with position standard deviation `sigma`.
    pub fn gaussian(x0: f64, dx: f64, n: usize, center: f64, sigma: f64) -> Result<Self> {
        let psi: Vec<Complex64> = (0..n)
            .map(|i| {
                let u = (x0 + i as f64 * dx - center) / sigma;
                Complex64::new((-u * u / 4.0).exp(), 0.0)
            })
            .collect();
        Self::pure(x0, dx, &psi)
    }

    /// Equal-weight superposition of two Gaussian packets at `centers`.
    pub fn cat(x0: f64, dx: f64, n: usize, centers: (f64, f64), sigma: f64) -> Result<Self> {
        let psi: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = x0 + i as f64 * dx;
                let a = (x - centers.0) / sigma;
                let b = (x - centers.1) / sigma;
                Complex64::new((-a * a / 4.0).exp() + (-b * b / 4.0).exp(), 0.0)
            })
            .collect();
        Self::pure(x0, dx, &psi)
    }

    /// Diagonal (incoherent) state with the given position weights.
    pub fn diagonal(x0: f64, dx: f64, weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, w) in weights.iter().enumerate() {
            entries[i * n + i] = Complex64::new(*w, 0.0);
        }
        Self::from_entries(x0, dx, n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum::<f64>() * self.dx
    }

    /// `max |rho_ij - conj(rho_ji)|` relative to the largest entry.
    pub fn hermiticity_error(&self) -> f64 {
        let scale = self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst / scale
    }

    /// Smallest eigenvalue of the operator `rho`, i.e. of the matrix `rho dx`.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.n, self.n, &self.entries) * Complex64::new(self.dx, 0.0);
        let hermitian = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn invariants(&self) -> InvariantReport {
        InvariantReport {
            trace: self.trace(),
            hermiticity_error: self.hermiticity_error(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }

    pub fn position_mean(&self) -> f64 {
        (0..self.n).map(|i| self.x(i) * self.get(i, i).re).sum::<f64>() * self.dx / self.trace()
    }

    pub fn position_variance(&self) -> f64 {
        let mean = self.position_mean();
        (0..self.n)
            .map(|i| (self.x(i) - mean).powi(2) * self.get(i, i).re)
            .sum::<f64>()
            * self.dx
            / self.trace()
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn map_entries(&self, f: impl Fn(usize, usize, Complex64) -> Complex64) -> Self {
        let n = self.n;
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, z)| f(k / n, k % n, *z))
            .collect();
        Self { entries, ..*self }
    }

    fn apply_decoherence(&self, params: &GrwParams<f64>, t: f64) -> Self {
        // Factor depends on |i - j| only.
        let factors: Vec<f64> = (0..self.n)
            .map(|d| decoherence_factor(d as f64 * self.dx, t, params))
            .collect();
        self.map_entries(|i, j, z| z * factors[i.abs_diff(j)])
    }

    fn adjoint(&self) -> Self {
        self.map_entries(|i, j, _| self.get(j, i).conj())
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.n + j]
    }
}

/// Multiply each `rho(x_i, x_j)` by `decoherence_factor(|x_i - x_j|, t)`.
pub fn evolve_pure_decoherence(rho: &DensityMatrix, params: &GrwParams<f64>, t: f64) -> DensityMatrix {
    rho.apply_decoherence(params, t)
}

/// Free-particle propagator `exp(-i p^2 dt / (2 M hbar))` on a periodic grid.
struct KineticStep {
    phases: Vec<Complex64>,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    ifft: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl KineticStep {
    fn new(n: usize, dx: f64, mass: f64, hbar: f64, dt: f64) -> Self {
        let mut planner = FftPlanner::new();
        let dk = 2.0 * PI / (n as f64 * dx);
        let phases = (0..n)
            .map(|m| {
                let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                let k = signed * dk;
                // conjugated propagator; see `apply`
                let angle = if mass.is_infinite() {
                    0.0
                } else {
                    hbar * k * k * dt / (2.0 * mass)
                };
                Complex64::from_polar(1.0 / n as f64, angle)
            })
            .collect();
        Self {
            phases,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        }
    }

    /// Right-multiply by `U^dagger`: each row `r` becomes `conj(U) r`.
    fn right_adjoint(&self, rho: &DensityMatrix) -> DensityMatrix {
        let n = rho.n;
        let mut entries = rho.entries.clone();
        for row in entries.chunks_mut(n) {
            self.fft.process(row);
            row.iter_mut().zip(&self.phases).for_each(|(z, p)| *z *= p);
            self.ifft.process(row);
        }
        DensityMatrix { entries, ..*rho }
    }

    /// `U rho U^dagger = (R(R(rho)^dagger))^dagger` with `R(m) = m U^dagger`.
    fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        self.right_adjoint(&self.right_adjoint(rho).adjoint()).adjoint()
    }
}

fn strang(
    rho: &DensityMatrix,
    params: &GrwParams<f64>,
    mass: f64,
    hbar: f64,
    dt: f64,
    n_steps: usize,
) -> DensityMatrix {
    let kinetic = KineticStep::new(rho.n, rho.dx, mass, hbar, dt);
    let mut state = rho.clone();
    for _ in 0..n_steps {
        state = state.apply_decoherence(params, dt / 2.0);
        state = kinetic.apply(&state);
        state = state.apply_decoherence(params, dt / 2.0);
    }
    state
}

/// Strang splitting of the GRW master equation with `H0 = p^2 / 2M`.
///
/// Each step is a half decoherence step, an exact spectral kinetic step on
/// both indices and another half decoherence step. The run is repeated at
/// half the step size; if the two disagree by more than
/// [`STEP_HALVING_TOL`] in any entry, [`Error::StepTooLarge`] is returned.
pub fn evolve_with_free_hamiltonian(
    rho: &DensityMatrix,
    params: &GrwParams<f64>,
    mass: f64,
    constants: &PhysicalConstants<f64>,
    dt: f64,
    n_steps: usize,
) -> Result<DensityMatrix> {
    if !(mass > 0.0) || !(dt >= 0.0) {
        return Err(Error::param(format!("need mass > 0 and dt >= 0, got {mass}, {dt}")));
    }
    if n_steps == 0 || dt == 0.0 {
        return Ok(rho.clone());
    }
    let coarse = strang(rho, params, mass, constants.hbar, dt, n_steps);
    let fine = strang(rho, params, mass, constants.hbar, dt / 2.0, 2 * n_steps);
    let change = coarse.max_abs_diff(&fine);
    if change > STEP_HALVING_TOL {
        return Err(Error::StepTooLarge(change));
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::grw_params;

    fn natural() -> PhysicalConstants<f64> {
        PhysicalConstants::natural()
    }

    fn params() -> GrwParams<f64> {
        grw_params(1.0, 0.1, 1.0, &natural())
    }

    #[test]
    fn construction_normalizes() {
        let rho = DensityMatrix::gaussian(-10.0, 0.1, 200, 0.0, 1.0).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-14);
        assert!((rho.position_variance() - 1.0).abs() < 1e-10);
        let inv = rho.invariants();
        assert!(inv.ok(), "{inv:?}");
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut e = vec![Complex64::new(0.0, 0.0); 4];
        e[0] = Complex64::new(1.0, 0.0);
        e[3] = Complex64::new(1.0, 0.0);
        e[1] = Complex64::new(0.2, 0.1);
        e[2] = Complex64::new(0.2, 0.1);
        assert!(matches!(
            DensityMatrix::from_entries(0.0, 1.0, 2, e),
            Err(Error::InvalidDensityMatrix(_))
        ));
    }

    #[test]
    fn zero_time_is_identity() {
        let rho = DensityMatrix::cat(-20.0, 0.25, 160, (-5.0, 5.0), 1.0).unwrap();
        assert_eq!(evolve_pure_decoherence(&rho, &params(), 0.0), rho);
        assert_eq!(
            evolve_with_free_hamiltonian(&rho, &params(), 1.0, &natural(), 0.0, 10).unwrap(),
            rho
        );
        assert_eq!(
            evolve_with_free_hamiltonian(&rho, &params(), 1.0, &natural(), 0.1, 0).unwrap(),
            rho
        );
    }

    #[test]
    fn mixed_diagonal_unchanged() {
        let rho = DensityMatrix::diagonal(0.0, 0.5, &[1.0; 32]).unwrap();
        assert_eq!(evolve_pure_decoherence(&rho, &params(), 1e7), rho);
    }

    #[test]
    fn cat_coherence_drops_by_e() {
        let p = params();
        let rho = DensityMatrix::cat(-20.0, 0.25, 161, (-5.0, 5.0), 1.0).unwrap();
        let t = 1.0 / p.lambda_grw;
        let out = evolve_pure_decoherence(&rho, &p, t);
        let (a, b) = (60, 100); // x = -5 and x = 5
        assert_eq!(rho.x(a), -5.0);
        assert_eq!(rho.x(b), 5.0);
        let ratio = out.get(a, b).norm() / rho.get(a, b).norm();
        assert!((ratio - (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(out.get(a, a), rho.get(a, a));
        assert_eq!(out.get(b, b), rho.get(b, b));
    }

    #[test]
    fn infinite_mass_matches_pure_decoherence() {
        let p = params();
        let rho = DensityMatrix::cat(-10.0, 0.25, 80, (-3.0, 3.0), 0.8).unwrap();
        let split = evolve_with_free_hamiltonian(&rho, &p, f64::INFINITY, &natural(), 50.0, 20).unwrap();
        let direct = evolve_pure_decoherence(&rho, &p, 1000.0);
        assert!(split.max_abs_diff(&direct) < 1e-6);
    }

    #[test]
    fn coarse_steps_are_rejected() {
        let p = GrwParams::new(5.0, 8.0).unwrap();
        let rho = DensityMatrix::cat(-10.0, 0.25, 80, (-3.0, 3.0), 0.8).unwrap();
        let err = evolve_with_free_hamiltonian(&rho, &p, 1.0, &natural(), 0.5, 4).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge(_)));
    }
}
