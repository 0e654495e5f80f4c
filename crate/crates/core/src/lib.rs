//! Conformal spacetime fluctuations and the decoherence they induce in
//! massive-particle wavepackets.
//!
//! The crate is split along the physics:
//!
//! * [`constants`] and [`conformal`]: physical constants, unit scales, the
//!   conformal factor and the Newtonian potential of a mass in a conformal
//!   field.
//! * [`field`]: synthesis of the two counter-propagating Gaussian fluctuation
//!   processes and estimators for their correlation structure.
//! * [`decoherence`]: exact-path Monte Carlo of the accumulated phase and
//!   the ensemble-averaged coherence factor.
//! * [`kernel`]: the analytic decoherence kernel in GRW form, density-matrix
//!   evolution and the general-correlation quadrature.
//! * [`bounds`]: zero-point source model and interferometry bounds on the
//!   cut-off parameter.
//!
//! The closed-form physics is generic over [`Real`] (`f32`/`f64`); the
//! sampling and density-matrix machinery works in `f64`. Concrete aliases
//! for the common instantiation live at the crate root.

pub mod bounds;
pub mod conformal;
pub mod constants;
pub mod decoherence;
pub mod error;
pub mod field;
pub mod kernel;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision physical constants.
pub type Constants = constants::PhysicalConstants<f64>;
/// Single-precision physical constants (natural units only; SI magnitudes
/// overflow `f32`).
pub type Constants32 = constants::PhysicalConstants<f32>;
/// Double-precision GRW parameters.
pub type Grw = kernel::GrwParams<f64>;
/// Double-precision zero-point cut-off model.
pub type Cutoff = bounds::CutoffModel<f64>;
/// Double-precision interferometer parameters.
pub type Experiment = bounds::ExperimentParams<f64>;
/// Double-precision cosmological source parameters.
pub type CosmoSource = bounds::CosmoSourceParams<f64>;

/// Version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
