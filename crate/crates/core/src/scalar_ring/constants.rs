//! Unit-ball volumes `ω_n`, unit-sphere areas `α_n`, and their log-float
//! counterparts for dimensions far beyond exact reach.

use num_bigint::BigInt;
use num_traits::One;
use statrs::function::gamma::ln_gamma;

use super::pi_scalar::PiScalar;
use super::rational::{factorial, Rational};

/// `Γ(n/2 + 1) / π^{[n odd]/2}` as a rational: `(n/2)!` for even `n`, and
/// `(n/2)(n/2 - 1)···(1/2)` for odd `n`.
fn gamma_half_plus_one_rational(n: u64) -> Rational {
    if n.is_multiple_of(2) {
        Rational::from_integer(factorial(n / 2))
    } else {
        let mut num = BigInt::one();
        let mut k = n as i64;
        while k > 0 {
            num *= k;
            k -= 2;
        }
        Rational::new(num, BigInt::from(2u32).pow(n.div_ceil(2) as u32))
    }
}

/// Volume of the unit ball in `R^n`, `π^{n/2} / Γ(n/2 + 1)`.
pub fn omega(n: u64) -> PiScalar {
    // Γ(n/2+1) carries one factor √π for odd n.
    let pi_exp = (n - n % 2) as i64;
    PiScalar::monomial(
        gamma_half_plus_one_rational(n).recip(),
        super::pi_scalar::Monomial { radicand: 1, pi_half_exp: pi_exp },
    )
}

/// Area of the unit `n`-sphere, `(n + 1) ω_{n+1}`.
pub fn alpha(n: u64) -> PiScalar {
    omega(n + 1).scale(&Rational::from_integer(BigInt::from(n + 1)))
}

/// `ln ω_n`, valid for any real `n ≥ 0`.
pub fn ln_omega(n: f64) -> f64 {
    0.5 * n * std::f64::consts::PI.ln() - ln_gamma(0.5 * n + 1.0)
}

/// `ln α_n = ln 2 + ((n+1)/2) ln π − ln Γ((n+1)/2)`; `n ≥ 0`.
pub fn ln_alpha(n: f64) -> f64 {
    std::f64::consts::LN_2 + 0.5 * (n + 1.0) * std::f64::consts::PI.ln() - ln_gamma(0.5 * (n + 1.0))
}

/// `ln C(n, k)` via log-gamma.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Precomputed exact `ω_n` and `α_n` for `n ≤ max_index`.
#[derive(Debug, Clone)]
pub struct ConstantTable {
    pub max_index: usize,
    pub omega: Vec<PiScalar>,
    pub alpha: Vec<PiScalar>,
}

impl ConstantTable {
    pub fn new(max_index: usize) -> Self {
        let omega: Vec<PiScalar> = (0..=max_index as u64 + 1).map(omega).collect();
        let alpha = (0..=max_index)
            .map(|n| omega[n + 1].scale(&Rational::from_integer(BigInt::from(n + 1))))
            .collect();
        let mut omega = omega;
        omega.truncate(max_index + 1);
        ConstantTable { max_index, omega, alpha }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ring::rational::rat;

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0), PiScalar::one());
        assert_eq!(omega(1), PiScalar::from_int(2));
        assert_eq!(omega(2), PiScalar::pi());
        // Γ(5/2) = (3/4)√π
        assert_eq!(omega(3), PiScalar::pi().scale(&rat(4, 3)));
        assert_eq!(omega(4), PiScalar::pi().pow(2).scale(&rat(1, 2)));
        assert!((omega(3).to_f64() - 4.188_790_204_786_391).abs() < 1e-14);
    }

    #[test]
    fn alpha_is_scaled_omega() {
        let t = ConstantTable::new(30);
        for n in 0..=30 {
            assert_eq!(t.alpha[n], alpha(n as u64));
            assert_eq!(t.omega[n], omega(n as u64));
            assert_eq!(t.alpha[n], omega(n as u64 + 1).scale(&rat(n as i64 + 1, 1)));
        }
        assert_eq!(alpha(1), PiScalar::pi().scale(&rat(2, 1)));
        assert_eq!(alpha(2), PiScalar::pi().scale(&rat(4, 1)));
    }

    #[test]
    fn log_forms_match_exact() {
        for n in 0..40u64 {
            let e = omega(n).to_f64().ln();
            assert!((ln_omega(n as f64) - e).abs() < 1e-12, "n={n}");
            let a = alpha(n).to_f64().ln();
            assert!((ln_alpha(n as f64) - a).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn omega_ratio_asymptotics() {
        for n in [1_000u64, 10_000] {
            let ratio = omega(n).div_monomial(&omega(n - 1)).unwrap().to_f64();
            let scaled = ratio * ((n as f64) / (2.0 * std::f64::consts::PI)).sqrt();
            assert!((scaled - 1.0).abs() < 0.01, "n={n} scaled={scaled}");
        }
    }

    #[test]
    fn stirling_sanity() {
        for k in [50u32, 80, 200, 1000] {
            let k = k as f64;
            let v =
                (ln_gamma(k + 1.0) + k * (1.0 - k.ln()) - 0.5 * (2.0 * std::f64::consts::PI * k).ln()).exp();
            assert!((0.99..=1.01).contains(&v), "k={k} v={v}");
        }
    }
}
