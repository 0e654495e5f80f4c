//! Exact-path Monte Carlo of the conformal phase.
//!
//! Wavepacket components sit at fixed positions `x` and `x'` (the kinetic
//! term is dropped during the exposure). Along each sampled field the
//! potential `V = (M c^2 / 2)[(1 + A)^2 - 1]`, `A = A0 (xi_plus + xi_minus)`,
//! is integrated to a phase; the ensemble mean of `exp(i (phi(x') - phi(x)))`
//! is the factor multiplying `rho(x, x')`.

mod ensemble;
mod fit;
pub mod io;
mod params;
mod phase;

pub use ensemble::{coherence_mc, sample_seed, CoherenceEstimate, CoherenceRecord};
pub use fit::{fit_decoherence_rate, RateFit};
pub use params::{McParams, A0_LIMIT, A0_WARN, MIN_SAMPLES};
pub use phase::{accumulate_phase, phase_history};
