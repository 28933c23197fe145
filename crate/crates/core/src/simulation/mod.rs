//! Monte Carlo side: random linear maps under Π_∞ and Π_N, Euler
//! characteristics and volumes of `A ∩ F^{−1}D`, and the convergence and
//! inequality drivers.

mod chi;
mod convergence;
mod estimate;
mod kin_ineq;
mod poincare;
mod rng;
mod sampling;

pub use chi::{cap_pair_chi, chi_intersection, quadratic_sublevel_chi, sample_on, volume_fraction};
pub use convergence::{nu_convergence, nu_limit_factor, pi_n_sweep, NuRow, SweepRow};
pub use estimate::{embed_unit, estimate_lhs, predict, sigma_counterpart, Gate, McConfig, McReport};
pub use kin_ineq::{kinematic_inequality_check, KinematicInequalityReport};
pub use poincare::{ks_statistic, poincare_test, sample_projection, PoincareReport};
pub use rng::{accumulate, map_chunks, Moments, RngStream, CHUNK};
pub use sampling::{
    sample_law, sample_pi_infinity, sample_pi_n, stiefel_frame, uniform_sphere, Law, LinearMapSample,
};
