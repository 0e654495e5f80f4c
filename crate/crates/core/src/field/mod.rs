//! Counter-propagating conformal fluctuation processes.
//!
//! The right- and left-moving amplitudes are `A0 xi_plus(t - x/c)` and
//! `A0 xi_minus(t + x/c)`. Both `xi` processes are independent, stationary,
//! zero-mean Gaussian sequences with first-order correlation `g1`; the
//! amplitude `A0` is applied by the consumer.

mod correlation;
mod estimators;
pub mod io;
mod synthesis;

pub use correlation::{CorrelationKind, CorrelationModel};
pub use estimators::{
    estimate_g1, estimate_g2, excess_kurtosis, g1_estimator_stderr, odd_moment_check, CorrelationEstimates,
    LagEstimate, MomentEstimate,
};
pub use synthesis::{sample_field, Direction, FieldGrid, FieldRealization, FieldSampler};
