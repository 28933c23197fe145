use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{GkfError, Result};
use crate::scalar_ring::{binomial, factorial, omega, PiScalar, Rational};
use crate::signed_log::{log_sum, SignedLog};

use super::conversion::{change_basis, sigma_expansion_log, Limits};
use super::sets::{sigma_values, ModelSet};
use super::{Basis, ValuationVector};

/// A valuation value: exact when every ingredient is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(PiScalar),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => x.to_f64(),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&PiScalar> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Float(x) => write!(f, "{x:.16e}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

fn check_sigma_side(v: &ValuationVector, set: &ModelSet) -> Result<usize> {
    match set.sigma_dim() {
        Some(n) if n == v.n() => Ok(n),
        Some(n) => Err(GkfError::DimensionMismatch { expected: v.n(), got: n }),
        None => Err(GkfError::UnsupportedSet(format!("{set} does not live in Σ^N"))),
    }
}

/// Value of an invariant valuation on a Σ^N test set.
///
/// The valuation is first written in σ coordinates (exactly when N is within
/// the exact cap, otherwise through log-form float expansions) and paired
/// with the set's σ values.
pub fn evaluate(v: &ValuationVector, set: &ModelSet) -> Result<Value> {
    evaluate_with(v, set, &Limits::default())
}

pub fn evaluate_with(v: &ValuationVector, set: &ModelSet, limits: &Limits) -> Result<Value> {
    let n = check_sigma_side(v, set)?;
    limits.check_float(n)?;
    let sigma = sigma_values(set)?;
    if n <= limits.exact_max_n {
        let coords = change_basis(v, Basis::Sigma)?;
        if let Some(exact) = &sigma.exact {
            let mut acc = PiScalar::zero();
            for (c, s) in coords.coeffs().iter().zip(exact) {
                if !s.is_zero() {
                    acc.add_mul(c, s);
                }
            }
            return Ok(Value::Exact(acc));
        }
        let terms =
            coords.coeffs().iter().zip(&sigma.values).map(|(c, s)| SignedLog::from_f64(c.to_f64()) * *s);
        return Ok(Value::Float(log_sum(terms).to_f64()));
    }
    let mut terms = Vec::new();
    for (i, c) in v.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = SignedLog::from_f64(c.to_f64());
        for (j, e) in sigma_expansion_log(v.basis(), n, i) {
            terms.push(c * e * sigma.values[j]);
        }
    }
    Ok(Value::Float(log_sum(terms).to_f64()))
}

/// `τ_k(A) = (4N)^{k/2} σ_{N−k}(A)`.
pub fn tau_evaluate(k: usize, set: &ModelSet) -> Result<Value> {
    let n = set.sigma_dim().ok_or_else(|| GkfError::UnsupportedSet(format!("{set} does not live in Σ^N")))?;
    if k > n {
        return Err(GkfError::OutOfRange(format!("τ_{k} on Σ^{n}")));
    }
    let sigma = sigma_values(set)?;
    if let Some(exact) = &sigma.exact {
        if n <= Limits::default().exact_max_n {
            return Ok(Value::Exact(&exact[n - k] * &PiScalar::int_half_pow(4 * n as u64, k as i64)));
        }
    }
    let shift = k as f64 / 2.0 * (4.0 * n as f64).ln();
    Ok(Value::Float(sigma.values[n - k].shift(shift).to_f64()))
}

/// `μ_k(B^n_1) = C(n, k) ω_n / ω_{n−k}`.
pub fn euclidean_ball_mu(n: usize, k: usize) -> PiScalar {
    if k > n {
        return PiScalar::zero();
    }
    let b = Rational::from_integer(binomial(n as u64, k as u64));
    omega(n as u64).div_monomial(&omega((n - k) as u64)).expect("ω is a monomial").scale(&b)
}

/// `t^k = k! ω_k / π^k · μ_k`.
pub fn mu_to_t_factor(k: usize) -> PiScalar {
    let fact = Rational::from_integer(factorial(k as u64));
    omega(k as u64)
        .scale(&fact)
        .div_monomial(&PiScalar::pi_half_pow(2 * k as i64))
        .expect("π^k is a monomial")
}

/// `t^k(S^n)` for the unit sphere. From the tube polynomial,
/// `μ_k(S^n) = 2 ω_{n+1} C(n+1, k) / ω_{n+1−k}` when n − k is even, else 0.
pub fn lk_unit_sphere(n: usize, k: usize) -> PiScalar {
    if k > n || (n - k) % 2 == 1 {
        return PiScalar::zero();
    }
    let mu = euclidean_ball_mu(n + 1, k).scale(&Rational::from_integer(BigInt::from(2)));
    &mu_to_t_factor(k) * &mu
}

/// `t^k` of a set on the unit sphere S^n.
///
/// Caps are rescaled onto Σ^n, where `t^k = 2^k u^k`.
pub fn unit_lk(set: &ModelSet, k: usize) -> Result<Value> {
    set.validate()?;
    match *set {
        ModelSet::UnitSphere { n } => Ok(Value::Exact(lk_unit_sphere(n, k))),
        ModelSet::UnitGreatSubsphere { m, .. } => Ok(Value::Exact(lk_unit_sphere(m, k))),
        ModelSet::UnitCap { n, theta } => {
            if k > n {
                return Ok(Value::Exact(PiScalar::zero()));
            }
            let ball = ModelSet::GeodesicBall { n, r: theta * (n as f64).sqrt() };
            let two_k = PiScalar::from_rational(Rational::from_integer(BigInt::from(2).pow(k as u32)));
            match evaluate(&ValuationVector::u_power(n, k), &ball)? {
                Value::Exact(x) => Ok(Value::Exact(&x * &two_k)),
                Value::Float(x) => Ok(Value::Float(x * two_k.to_f64())),
            }
        }
        _ => Err(GkfError::UnsupportedSet(format!("{set} is not a unit-sphere set"))),
    }
}
