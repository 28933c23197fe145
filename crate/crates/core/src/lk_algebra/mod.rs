//! Invariant valuations on Σ^N: bases, exact conversions, the
//! Lipschitz–Killing product, and evaluation on model sets.

mod basis;
mod conversion;
mod evaluate;
mod series;
mod sets;
mod valuation;

pub use basis::Basis;
pub use conversion::{
    binomial_scalar, change_basis, change_basis_with, conversion_matrix, from_sigma_rows,
    sigma_expansion_log, to_sigma_rows, Limits, SparseRows, EXACT_MAX_N, FLOAT_MAX_N,
};
pub use evaluate::{
    euclidean_ball_mu, evaluate, evaluate_with, lk_unit_sphere, mu_to_t_factor, tau_evaluate, unit_lk, Value,
};
pub use series::{series_compose, SeriesRule};
pub use sets::{abs_sigma, curvature_profile, sigma_values, ModelSet, PrincipalCurvatureProfile, SetSigma};
pub use valuation::{lk_multiply, SeriesU, ValuationVector};
