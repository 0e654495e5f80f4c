//! Analytic side of the decoherence model: GRW-form parameters, the
//! closed-form kernel, density-matrix evolution and the general-correlation
//! quadrature.

mod density;
mod general;
mod grw;
pub mod io;

pub use density::{evolve_pure_decoherence, evolve_with_free_hamiltonian, DensityMatrix, InvariantReport};
pub use general::{general_kernel, kernel_integrals, KernelIntegrals};
pub use grw::{decoherence_factor, decoherence_rate, grw_params, relative_change, GrwParams};
