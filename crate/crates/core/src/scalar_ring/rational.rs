//! Exact rationals and the generalized binomial coefficient.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(pub i64);

impl HalfInteger {
    pub fn from_int(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    /// `n + 1/2`
    pub fn half_plus(n: i64) -> Self {
        HalfInteger(2 * n + 1)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        rat(self.0, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

/// `top (top-1) ... (top-j+1) / j!` for integer or half-integer `top`.
pub fn generalized_binomial(top: HalfInteger, j: u64) -> Rational {
    // Work with numerator 2*top - 2i over 2 to stay in integers until the end.
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j as i64 {
        num *= BigInt::from(top.0 - 2 * i);
        den *= BigInt::from(2 * (i + 1));
    }
    if num.is_zero() {
        return Rational::zero();
    }
    Rational::new(num, den)
}

/// Ordinary binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Floating generalized binomial, for large-N float paths.
pub fn generalized_binomial_f64(top: HalfInteger, j: u64) -> f64 {
    let t = top.to_f64();
    let mut acc = 1.0;
    for i in 0..j {
        acc *= (t - i as f64) / (i + 1) as f64;
    }
    acc
}
