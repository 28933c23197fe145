use std::str::FromStr;

use crate::error::{GkfError, Result};
use crate::scalar_ring::{generalized_binomial, HalfInteger, PiScalar};

use super::conversion::mu_over_t_factor;
use super::{Basis, SeriesU, ValuationVector};

/// Series substitutions between bases. `AFromB` / `AOfB` take a vector in
/// basis A and rewrite it in basis B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesRule {
    /// φ^i = (4N)^{i/2} (u/√(1+u²))^i
    PhiOfU,
    /// u^k = (φ̂/√(1−φ̂²))^k with φ̂ = φ/√(4N)
    UOfPhi,
    /// σ_{N−i} = u^i (1+u²)^{−i/2−1}
    SigmaFromU,
    /// u^k = Σ_j C(j+k/2, j) σ_{N−k−2j}
    UFromSigma,
    /// μ_k = π^k/(k! ω_k) t^k
    MuFromT,
    /// t^k = k! ω_k/π^k μ_k
    TFromMu,
}

impl SeriesRule {
    pub const ALL: [SeriesRule; 6] = [
        SeriesRule::PhiOfU,
        SeriesRule::UOfPhi,
        SeriesRule::SigmaFromU,
        SeriesRule::UFromSigma,
        SeriesRule::MuFromT,
        SeriesRule::TFromMu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesRule::PhiOfU => "PhiOfU",
            SeriesRule::UOfPhi => "UOfPhi",
            SeriesRule::SigmaFromU => "SigmaFromU",
            SeriesRule::UFromSigma => "UFromSigma",
            SeriesRule::MuFromT => "MuFromT",
            SeriesRule::TFromMu => "TFromMu",
        }
    }

    /// (input basis, output basis)
    pub fn bases(self) -> (Basis, Basis) {
        match self {
            SeriesRule::PhiOfU => (Basis::Phi, Basis::U),
            SeriesRule::UOfPhi => (Basis::U, Basis::Phi),
            SeriesRule::SigmaFromU => (Basis::Sigma, Basis::U),
            SeriesRule::UFromSigma => (Basis::U, Basis::Sigma),
            SeriesRule::MuFromT => (Basis::Mu, Basis::T),
            SeriesRule::TFromMu => (Basis::T, Basis::Mu),
        }
    }
}

impl FromStr for SeriesRule {
    type Err = GkfError;
    fn from_str(s: &str) -> Result<Self> {
        SeriesRule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| GkfError::UnknownRule(s.to_string()))
    }
}

/// Sum of `coeffs[i] · scale(i) · powers[i]` as a truncated series.
fn combine(
    n: usize,
    coeffs: &[PiScalar],
    powers: &[SeriesU],
    scale: impl Fn(usize) -> PiScalar,
) -> Vec<PiScalar> {
    let mut out = vec![PiScalar::zero(); n + 1];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c * &scale(i);
        for (k, p) in powers[i].coeffs().iter().enumerate() {
            if !p.is_zero() {
                out[k].add_mul(&c, p);
            }
        }
    }
    out
}

/// Applies a series substitution to a valuation vector.
pub fn series_compose(v: &ValuationVector, rule: SeriesRule) -> Result<ValuationVector> {
    let (input, output) = rule.bases();
    if v.basis() != input {
        return Err(GkfError::BasisNotAllowed(v.basis().to_string(), input.name()));
    }
    let n = v.n();
    let four_n = 4 * n.max(1) as u64;
    let out = match rule {
        SeriesRule::PhiOfU => {
            let powers = SeriesU::crofton_normalized(n).powers();
            combine(n, v.coeffs(), &powers, |i| PiScalar::int_half_pow(four_n, i as i64))
        }
        SeriesRule::UOfPhi => {
            // x (1 − x²)^{−1/2}, built from the (1 + x²) series by flipping signs
            let mut c = SeriesU::one_plus_u2_pow(n, HalfInteger(-1)).coeffs().to_vec();
            for (k, x) in c.iter_mut().enumerate() {
                if k % 4 == 2 {
                    *x = -x.clone();
                }
            }
            let inner = SeriesU::new(n, c)?;
            let u_of_x = SeriesU::monomial(n, 1).mul(&inner);
            let powers = u_of_x.powers();
            let mut out = combine(n, v.coeffs(), &powers, |_| PiScalar::one());
            for (k, x) in out.iter_mut().enumerate() {
                *x = &*x * &PiScalar::int_half_pow(four_n, -(k as i64));
            }
            out
        }
        SeriesRule::SigmaFromU => {
            let damp = SeriesU::one_plus_u2_pow(n, HalfInteger(-2));
            let powers: Vec<SeriesU> =
                SeriesU::crofton_normalized(n).powers().iter().map(|p| p.mul(&damp)).collect();
            // σ_j multiplies the (N − j)-th power
            let rev: Vec<PiScalar> = v.coeffs().iter().rev().cloned().collect();
            combine(n, &rev, &powers, |_| PiScalar::one())
        }
        SeriesRule::UFromSigma => {
            let mut out = vec![PiScalar::zero(); n + 1];
            for (k, c) in v.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for j in 0..=(n - k) / 2 {
                    let b = generalized_binomial(HalfInteger((2 * j + k) as i64), j as u64);
                    out[n - k - 2 * j] += c.scale(&b);
                }
            }
            out
        }
        SeriesRule::MuFromT => v.coeffs().iter().enumerate().map(|(k, c)| c * &mu_over_t_factor(k)).collect(),
        SeriesRule::TFromMu => v
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c * &mu_over_t_factor(k).inv_monomial().expect("nonzero monomial"))
            .collect(),
    };
    ValuationVector::new(n, output, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lk_algebra::change_basis;

    #[test]
    fn rules_agree_with_change_of_basis() {
        for n in [1usize, 2, 5, 8] {
            for rule in SeriesRule::ALL {
                let (from, to) = rule.bases();
                for i in 0..=n {
                    let v = ValuationVector::unit(n, from, i);
                    assert_eq!(
                        series_compose(&v, rule).unwrap(),
                        change_basis(&v, to).unwrap(),
                        "{} N={n} i={i}",
                        rule.name()
                    );
                }
            }
        }
    }

    #[test]
    fn chi_in_sigma() {
        let s = series_compose(&ValuationVector::chi(5), SeriesRule::UFromSigma).unwrap();
        let ones: Vec<i64> = vec![0, 1, 0, 1, 0, 1];
        for (c, e) in s.coeffs().iter().zip(ones) {
            assert_eq!(*c, PiScalar::from_int(e));
        }
    }

    #[test]
    fn wrong_basis_and_names() {
        assert!(series_compose(&ValuationVector::chi(3), SeriesRule::PhiOfU).is_err());
        assert_eq!("uofphi".parse::<SeriesRule>().unwrap(), SeriesRule::UOfPhi);
        assert!(matches!("nope".parse::<SeriesRule>(), Err(GkfError::UnknownRule(_))));
    }
}
