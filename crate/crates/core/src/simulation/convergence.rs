use serde::Serialize;

use crate::error::{GkfError, Result};
use crate::gaussian_volumes::{gamma, GaussSet};
use crate::lk_algebra::{evaluate, Basis, ModelSet, ValuationVector};
use crate::scalar_ring::ln_omega;

use super::estimate::{estimate_lhs, sigma_counterpart, McConfig, McReport};
use super::sampling::Law;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuRow {
    pub big_n: usize,
    pub k: usize,
    pub nu: f64,
    pub limit: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// `(2π)^{k/2} / (k! ω_k)`, the factor relating `lim ν_k(D_N)` to `γ_k(D)`.
pub fn nu_limit_factor(k: usize) -> f64 {
    let kf = k as f64;
    (kf / 2.0 * (2.0 * std::f64::consts::PI).ln() - ln_factorial(k) - ln_omega(kf)).exp()
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `ν_k` of the Σ^N counterpart of D against its Gaussian limit, for each N
/// and k ≤ k_max.
pub fn nu_convergence(d: &GaussSet, k_max: usize, n_list: &[usize]) -> Result<Vec<NuRow>> {
    let g = gamma(d, k_max)?;
    let mut rows = Vec::new();
    for &big_n in n_list {
        if k_max > big_n {
            return Err(GkfError::OutOfRange(format!("k_max = {k_max} exceeds N = {big_n}")));
        }
        let set = sigma_counterpart(d, big_n)?;
        for k in 0..=k_max {
            let nu = evaluate(&ValuationVector::unit(big_n, Basis::Nu, k), &set)?.to_f64();
            let limit = nu_limit_factor(k) * g.values[k];
            let abs_err = (nu - limit).abs();
            rows.push(NuRow { big_n, k, nu, limit, abs_err, rel_err: abs_err / limit.abs() });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub law: Law,
    pub report: McReport,
}

/// The same estimand under Π_N for each N in the list and then under Π_∞,
/// all with one configuration so the draws are coupled.
pub fn pi_n_sweep(
    a: &ModelSet,
    d: &GaussSet,
    m: usize,
    n_list: &[usize],
    config: &McConfig,
) -> Result<Vec<SweepRow>> {
    let mut laws: Vec<Law> = n_list.iter().map(|&n| Law::PiN(n)).collect();
    laws.push(Law::PiInfinity);
    laws.into_iter().map(|law| Ok(SweepRow { law, report: estimate_lhs(a, d, m, law, config)? })).collect()
}
