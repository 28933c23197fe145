//! Gaussian intrinsic volumes of model sets in R^d and the closed-form right
//! side of the Gaussian kinematic formula.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use libm::{erf, erfc};
use statrs::function::gamma::ln_gamma;

use crate::error::{GkfError, Result};
use crate::kinematics::gkf_coefficient;
use crate::lk_algebra::{unit_lk, ModelSet, Value};
use crate::scalar_ring::{HalfInteger, PiScalar, Rational};

/// Model sets for the Gaussian side, all in R^d with the standard Gaussian
/// measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussSet {
    /// `{x : x_1 ≥ u}`
    HalfSpace {
        d: usize,
        u: f64,
    },
    CenteredBall {
        d: usize,
        rho: f64,
    },
    Origin {
        d: usize,
    },
    FullSpace {
        d: usize,
    },
}

impl fmt::Display for GaussSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GaussSet::HalfSpace { d, u } => write!(f, "halfspace:{d}:{u}"),
            GaussSet::CenteredBall { d, rho } => write!(f, "ball:{d}:{rho}"),
            GaussSet::Origin { d } => write!(f, "origin:{d}"),
            GaussSet::FullSpace { d } => write!(f, "fullspace:{d}"),
        }
    }
}

impl GaussSet {
    pub fn dim(&self) -> usize {
        match *self {
            GaussSet::HalfSpace { d, .. }
            | GaussSet::CenteredBall { d, .. }
            | GaussSet::Origin { d }
            | GaussSet::FullSpace { d } => d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(GkfError::InvalidArgument("ambient dimension must be at least 1".into()));
        }
        match *self {
            GaussSet::HalfSpace { u, .. } if !u.is_finite() => {
                Err(GkfError::InvalidArgument(format!("threshold {u} is not finite")))
            }
            GaussSet::CenteredBall { rho, .. } if !(rho.is_finite() && rho > 0.0) => {
                Err(GkfError::InvalidArgument(format!("ball radius {rho} must be positive")))
            }
            _ => Ok(()),
        }
    }

    /// Membership test for a point of R^d.
    pub fn contains(&self, y: &[f64]) -> bool {
        match *self {
            GaussSet::HalfSpace { u, .. } => y[0] >= u,
            GaussSet::CenteredBall { rho, .. } => y.iter().map(|v| v * v).sum::<f64>() <= rho * rho,
            GaussSet::Origin { .. } => y.iter().all(|v| *v == 0.0),
            GaussSet::FullSpace { .. } => true,
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `P(|X| ≤ a)` for X standard Gaussian in R^d, by integrating the chi
/// density down two dimensions at a time:
/// `P_d(a) = P_{d−2}(a) − (a²/2)^{d/2−1} e^{−a²/2} / Γ(d/2)`.
pub fn chi_cdf(d: usize, a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let h = 0.5 * a * a;
    let (mut p, start) = if d.is_multiple_of(2) { (0.0, 2) } else { (erf(a / SQRT_2), 3) };
    let mut m = start;
    while m <= d {
        let nu = m as f64 / 2.0;
        p -= ((nu - 1.0) * h.ln() - h - ln_gamma(nu)).exp();
        if m == 2 {
            // P_0 = 1 (all mass at the origin)
            p += 1.0;
        }
        m += 2;
    }
    p
}

/// Gaussian measure of the r-tube around D.
pub fn gauss_measure_tube(set: &GaussSet, r: f64) -> Result<f64> {
    set.validate()?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(GkfError::InvalidArgument(format!("tube radius {r} must be ≥ 0")));
    }
    Ok(match *set {
        GaussSet::HalfSpace { u, .. } => normal_cdf(r - u),
        GaussSet::CenteredBall { d, rho } => chi_cdf(d, rho + r),
        GaussSet::Origin { d } => chi_cdf(d, r),
        GaussSet::FullSpace { .. } => 1.0,
    })
}

/// `γ_0, …, γ_{k_max}`; exact coefficients are kept where the set admits
/// them (FullSpace, Origin, HalfSpace at u = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector {
    pub d: usize,
    pub values: Vec<f64>,
    pub exact: Option<Vec<PiScalar>>,
}

/// Probabilists' Hermite polynomial `He_m(x)`.
pub fn hermite_he(m: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if m == 0 {
        return a;
    }
    for j in 1..m {
        let c = x * b - j as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// Coefficients of `P_m` where `(d/ds)^m [s^{d−1} e^{−s²/2}] = P_m(s) e^{−s²/2}`,
/// via `P_{m+1} = P_m' − s P_m`. Index = power of s.
pub fn radial_derivative_poly(d: usize, m: usize) -> Vec<i128> {
    let mut p = vec![0i128; d];
    p[d - 1] = 1;
    for _ in 0..m {
        let mut next = vec![0i128; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            if i > 0 {
                next[i - 1] += i as i128 * c;
            }
            next[i + 1] -= c;
        }
        p = next;
    }
    p
}

/// `c_d = 2^{1−d/2} / Γ(d/2)`, the chi density normalization.
fn chi_norm_ln(d: usize) -> f64 {
    (1.0 - d as f64 / 2.0) * std::f64::consts::LN_2 - ln_gamma(d as f64 / 2.0)
}

/// `c_d` as an exact number.
fn chi_norm_exact(d: usize) -> PiScalar {
    // Γ(d/2) = (d/2 − 1)! or a half-integer product times √π
    let mut g = Rational::from_integer(1.into());
    let mut x = HalfInteger(d as i64 - 2);
    while x.0 > 0 {
        g *= x.to_rational();
        x = HalfInteger(x.0 - 2);
    }
    let gamma = if d.is_multiple_of(2) {
        PiScalar::from_rational(g)
    } else {
        &PiScalar::from_rational(g) * &PiScalar::sqrt_pi()
    };
    let two_pow = PiScalar::int_half_pow(2, 2 - d as i64);
    two_pow.div_monomial(&gamma).expect("Γ(d/2) is a monomial")
}

fn eval_poly(p: &[i128], s: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * s + *c as f64)
}

/// One-sided derivatives `γ_k = (d/dr)^k γ_0(tube(D, r))` at r = 0.
pub fn gamma(set: &GaussSet, k_max: usize) -> Result<GammaVector> {
    set.validate()?;
    let d = set.dim();
    let g0 = gauss_measure_tube(set, 0.0)?;
    let mut values = vec![g0];
    let mut exact = None;
    match *set {
        GaussSet::HalfSpace { u, .. } => {
            // d^k/dr^k Φ(r − u) = φ^{(k−1)}(−u) = He_{k−1}(u) φ(u)
            values.extend((1..=k_max).map(|k| hermite_he(k - 1, u) * normal_pdf(u)));
            if u == 0.0 {
                let phi0 = &PiScalar::int_half_pow(2, -1) * &PiScalar::pi_half_pow(-1);
                let mut e = vec![PiScalar::from_rational(crate::scalar_ring::rat(1, 2))];
                for k in 1..=k_max {
                    let he = hermite_he(k - 1, 0.0) as i64;
                    e.push(&phi0 * &PiScalar::from_int(he));
                }
                exact = Some(e);
            }
        }
        GaussSet::CenteredBall { d, rho } => {
            let c = chi_norm_ln(d).exp();
            values.extend((1..=k_max).map(|k| {
                let p = radial_derivative_poly(d, k - 1);
                c * eval_poly(&p, rho) * (-0.5 * rho * rho).exp()
            }));
        }
        GaussSet::Origin { d } => {
            let c = chi_norm_exact(d);
            let mut e = vec![PiScalar::zero()];
            for k in 1..=k_max {
                let p0 = radial_derivative_poly(d, k - 1)[0];
                e.push(&c * &PiScalar::from_int(p0 as i64));
            }
            values.extend(e[1..].iter().map(PiScalar::to_f64));
            exact = Some(e);
        }
        GaussSet::FullSpace { .. } => {
            values.extend(std::iter::repeat_n(0.0, k_max));
            let mut e = vec![PiScalar::zero(); k_max + 1];
            e[0] = PiScalar::one();
            exact = Some(e);
        }
    }
    Ok(GammaVector { d, values, exact })
}

/// `r ↦ γ(D_r)` continued analytically to r < 0 (inner parallel sets for
/// the half-space and ball, reflection of the radial integral for the point).
fn continued_tube_measure(set: &GaussSet, r: f64) -> Result<f64> {
    if r >= 0.0 {
        return gauss_measure_tube(set, r);
    }
    let radial = |d: usize, a: f64| {
        if a >= 0.0 {
            chi_cdf(d, a)
        } else if d.is_multiple_of(2) {
            chi_cdf(d, -a)
        } else {
            -chi_cdf(d, -a)
        }
    };
    Ok(match *set {
        GaussSet::HalfSpace { u, .. } => normal_cdf(r - u),
        GaussSet::CenteredBall { d, rho } => radial(d, rho + r),
        GaussSet::Origin { d } => radial(d, r),
        GaussSet::FullSpace { .. } => 1.0,
    })
}

/// Finite-difference estimate of `γ_k` from the tube measure alone:
/// central k-th differences at steps h, h/2, h/4, h/8, Richardson
/// extrapolated in h². Steps near 0.25 balance truncation against
/// cancellation for k ≤ 4.
pub fn gamma_fd_oracle(set: &GaussSet, k: usize, h: f64) -> Result<f64> {
    set.validate()?;
    if k > 8 {
        return Err(GkfError::OutOfRange(format!("finite differences unreliable for k = {k} > 8")));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(GkfError::InvalidArgument(format!("step {h} must be positive")));
    }
    if k == 0 {
        return gauss_measure_tube(set, 0.0);
    }
    const LEVELS: usize = 4;
    let mut h2 = [0.0; LEVELS];
    let mut est = [0.0; LEVELS];
    for l in 0..LEVELS {
        let hl = h / f64::powi(2.0, l as i32);
        let mut acc = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let r = (k as f64 / 2.0 - j as f64) * hl;
            acc += sign * binom * continued_tube_measure(set, r)?;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        h2[l] = hl * hl;
        est[l] = acc / hl.powi(k as i32);
    }
    for m in 1..LEVELS {
        for i in 0..LEVELS - m {
            est[i] = (h2[i + m] * est[i] - h2[i] * est[i + 1]) / (h2[i + m] - h2[i]);
        }
    }
    Ok(est[0])
}

/// Right side of the Gaussian kinematic formula,
/// `Σ_k (π/2)^{k/2}/(k! ω_k) · t^{k+m}(A) · γ_k(D)`.
pub fn gkf_predict(a: &ModelSet, d: &GaussSet, m: usize) -> Result<Value> {
    a.validate()?;
    let n = a.unit_dim().ok_or_else(|| GkfError::UnsupportedSet(format!("{a} is not a unit-sphere set")))?;
    if m > n {
        return Err(GkfError::OutOfRange(format!("degree {m} exceeds dim S^{n}")));
    }
    let g = gamma(d, n - m)?;
    let mut exact = Some(PiScalar::zero());
    let mut float = 0.0;
    for k in 0..=n - m {
        let t = unit_lk(a, k + m)?;
        let coef = gkf_coefficient(k);
        float += coef.to_f64() * t.to_f64() * g.values[k];
        exact = match (exact, &t, &g.exact) {
            (Some(acc), Value::Exact(tv), Some(ge)) => {
                let mut acc = acc;
                acc.add_mul(&(&coef * tv), &ge[k]);
                Some(acc)
            }
            _ => None,
        };
    }
    Ok(match exact {
        Some(x) => Value::Exact(x),
        None => Value::Float(float),
    })
}
