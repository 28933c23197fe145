use std::ops::{Add, Sub};

use crate::error::{GkfError, Result};
use crate::scalar_ring::{generalized_binomial, HalfInteger, PiScalar, Rational};

use super::Basis;

/// An invariant valuation on Σ^N (the sphere of radius √N in R^{N+1}),
/// written in one of the canonical bases. `coeffs[i]` multiplies the i-th
/// basis element; there are always exactly `N + 1` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationVector {
    n: usize,
    basis: Basis,
    coeffs: Vec<PiScalar>,
}

impl ValuationVector {
    pub fn new(n: usize, basis: Basis, coeffs: Vec<PiScalar>) -> Result<Self> {
        if coeffs.len() != n + 1 {
            return Err(GkfError::DimensionMismatch { expected: n + 1, got: coeffs.len() });
        }
        Ok(ValuationVector { n, basis, coeffs })
    }

    pub fn zero(n: usize, basis: Basis) -> Self {
        ValuationVector { n, basis, coeffs: vec![PiScalar::zero(); n + 1] }
    }

    /// The i-th basis element itself.
    pub fn unit(n: usize, basis: Basis, i: usize) -> Self {
        let mut v = Self::zero(n, basis);
        v.coeffs[i] = PiScalar::one();
        v
    }

    /// The Euler characteristic χ = t^0 = u^0.
    pub fn chi(n: usize) -> Self {
        Self::unit(n, Basis::U, 0)
    }

    /// `u^k`; zero when `k > N`.
    pub fn u_power(n: usize, k: usize) -> Self {
        if k > n {
            Self::zero(n, Basis::U)
        } else {
            Self::unit(n, Basis::U, k)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[PiScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &PiScalar {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<PiScalar> {
        self.coeffs
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        ValuationVector { n: self.n, basis: self.basis, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PiScalar::is_zero)
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.n, other.n, "valuations on different spheres");
        assert_eq!(self.basis, other.basis, "valuations in different bases");
    }
}

impl Add for &ValuationVector {
    type Output = ValuationVector;
    fn add(self, rhs: &ValuationVector) -> ValuationVector {
        self.check_compatible(rhs);
        ValuationVector {
            n: self.n,
            basis: self.basis,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ValuationVector {
    type Output = ValuationVector;
    fn sub(self, rhs: &ValuationVector) -> ValuationVector {
        self.check_compatible(rhs);
        ValuationVector {
            n: self.n,
            basis: self.basis,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A power series in u truncated modulo u^{N+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesU {
    n: usize,
    coeffs: Vec<PiScalar>,
}

impl SeriesU {
    pub fn new(n: usize, mut coeffs: Vec<PiScalar>) -> Result<Self> {
        if coeffs.len() > n + 1 {
            if coeffs[n + 1..].iter().any(|c| !c.is_zero()) {
                return Err(GkfError::OutOfRange(format!(
                    "series of degree {} exceeds truncation order {n}",
                    coeffs.len() - 1
                )));
            }
            coeffs.truncate(n + 1);
        }
        coeffs.resize(n + 1, PiScalar::zero());
        Ok(SeriesU { n, coeffs })
    }

    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![PiScalar::zero(); n + 1];
        coeffs[0] = PiScalar::one();
        SeriesU { n, coeffs }
    }

    pub fn monomial(n: usize, k: usize) -> Self {
        let mut coeffs = vec![PiScalar::zero(); n + 1];
        if k <= n {
            coeffs[k] = PiScalar::one();
        }
        SeriesU { n, coeffs }
    }

    /// `(1 + u²)^{top}` truncated, with generalized binomial coefficients.
    pub fn one_plus_u2_pow(n: usize, top: HalfInteger) -> Self {
        let mut coeffs = vec![PiScalar::zero(); n + 1];
        for j in 0..=n / 2 {
            coeffs[2 * j] = PiScalar::from_rational(generalized_binomial(top, j as u64));
        }
        SeriesU { n, coeffs }
    }

    /// `u / √(1 + u²)`, the normalized Crofton valuation φ/√(4N).
    pub fn crofton_normalized(n: usize) -> Self {
        Self::monomial(n, 1).mul(&Self::one_plus_u2_pow(n, HalfInteger(-1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[PiScalar] {
        &self.coeffs
    }

    pub fn mul(&self, rhs: &SeriesU) -> SeriesU {
        assert_eq!(self.n, rhs.n, "series truncated at different orders");
        let n = self.n;
        let mut out = vec![PiScalar::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_mul(a, b);
                }
            }
        }
        SeriesU { n, coeffs: out }
    }

    pub fn scale(&self, c: &PiScalar) -> SeriesU {
        SeriesU { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> SeriesU {
        SeriesU { n: self.n, coeffs: self.coeffs.iter().map(|x| x.scale(q)).collect() }
    }

    pub fn add(&self, rhs: &SeriesU) -> SeriesU {
        SeriesU { n: self.n, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }

    /// Successive powers `1, s, s², …, s^N`.
    pub fn powers(&self) -> Vec<SeriesU> {
        let mut out = Vec::with_capacity(self.n + 1);
        out.push(SeriesU::one(self.n));
        for i in 1..=self.n {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }

    pub fn into_valuation(self) -> ValuationVector {
        ValuationVector { n: self.n, basis: Basis::U, coeffs: self.coeffs }
    }

    pub fn from_valuation(v: &ValuationVector) -> Result<Self> {
        if v.basis() != Basis::U {
            return Err(GkfError::BasisNotAllowed(v.basis().to_string(), "u"));
        }
        Ok(SeriesU { n: v.n(), coeffs: v.coeffs().to_vec() })
    }
}

/// Product in the Lipschitz–Killing algebra: polynomial multiplication in t
/// (equivalently u) truncated at degree N. Mixed T/U inputs give a U result.
pub fn lk_multiply(a: &ValuationVector, b: &ValuationVector) -> Result<ValuationVector> {
    for v in [a, b] {
        if !matches!(v.basis(), Basis::T | Basis::U) {
            return Err(GkfError::BasisNotAllowed(v.basis().to_string(), "t, u"));
        }
    }
    if a.n() != b.n() {
        return Err(GkfError::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    // t and u powers differ by a degree-wise scaling (4N)^{k/2}, which is
    // multiplicative, so the product has the same form in either basis.
    let (lhs, rhs, basis) = if a.basis() == b.basis() {
        (a.clone(), b.clone(), a.basis())
    } else {
        (super::change_basis(a, Basis::U)?, super::change_basis(b, Basis::U)?, Basis::U)
    };
    let n = a.n();
    let sa = SeriesU { n, coeffs: lhs.into_coeffs() };
    let sb = SeriesU { n, coeffs: rhs.into_coeffs() };
    let prod = sa.mul(&sb);
    ValuationVector::new(n, basis, prod.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ring::rat;

    #[test]
    fn multiply_examples() {
        let n = 6;
        let v = ValuationVector::new(
            n,
            Basis::U,
            (0..=n as i64).map(|i| PiScalar::from_rational(rat(i - 2, 3))).collect(),
        )
        .unwrap();
        assert_eq!(lk_multiply(&ValuationVector::chi(n), &v).unwrap(), v);
        assert_eq!(
            lk_multiply(&ValuationVector::u_power(n, 2), &ValuationVector::u_power(n, 3)).unwrap(),
            ValuationVector::u_power(n, 5)
        );
        assert!(lk_multiply(&ValuationVector::u_power(n, 4), &ValuationVector::u_power(n, 3))
            .unwrap()
            .is_zero());
        let t = ValuationVector::unit(n, Basis::T, 2);
        assert_eq!(lk_multiply(&t, &t).unwrap(), ValuationVector::unit(n, Basis::T, 4));
        assert!(lk_multiply(&ValuationVector::unit(n, Basis::Mu, 1), &t).is_err());
    }

    #[test]
    fn crofton_series_is_odd() {
        let s = SeriesU::crofton_normalized(7);
        // u - u³/2 + 3u⁵/8 - 5u⁷/16
        let expect = [0, 1, 0, 0, 0, 0, 0, 0];
        assert_eq!(s.coeffs()[1], PiScalar::from_int(expect[1]));
        assert_eq!(s.coeffs()[3], PiScalar::from_rational(rat(-1, 2)));
        assert_eq!(s.coeffs()[5], PiScalar::from_rational(rat(3, 8)));
        assert_eq!(s.coeffs()[7], PiScalar::from_rational(rat(-5, 16)));
        assert!(s.coeffs()[0].is_zero() && s.coeffs()[2].is_zero());
    }
}
