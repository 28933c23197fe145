//! Exact numbers of the form `Σ q · √r · π^{m/2}`.
//!
//! `q` is rational, `r` is a squarefree positive integer and `m` is any
//! integer. The family `{√r · π^{m/2}}` is linearly independent over the
//! rationals (π is transcendental), so two values are equal exactly when
//! their normalized term lists are equal.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{rat_int, Rational};

const PI_DIGITS: &str =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798";
const SQRT_PI_DIGITS: &str =
    "1.77245385090551602729816748334114518279754945612238712821380778985291128459103218137495065673854466541";

/// Working precision ceiling of the stored constants, in decimal digits.
pub const MAX_FLOAT_DIGITS: u32 = 96;

/// `√radicand · π^{pi_half_exp/2}` with squarefree `radicand`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub radicand: u64,
    pub pi_half_exp: i64,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.pi_half_exp, self.radicand).cmp(&(other.pi_half_exp, other.radicand))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial { radicand: 1, pi_half_exp: 0 };

    /// Product of two monomials; the integer factor pulled out of the radical
    /// is returned alongside.
    fn mul(self, other: Monomial) -> (u64, Monomial) {
        let g = self.radicand.gcd(&other.radicand);
        let radicand = (self.radicand / g).checked_mul(other.radicand / g).expect("radicand overflow");
        (g, Monomial { radicand, pi_half_exp: self.pi_half_exp + other.pi_half_exp })
    }
}

/// Splits `n` into `s² · r` with `r` squarefree.
pub fn square_free_split(n: u64) -> (u64, u64) {
    assert!(n > 0, "square_free_split of zero");
    let mut s = 1u64;
    let mut r = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            r *= p;
        }
        p += 1;
    }
    r *= m;
    (s, r)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PiScalar {
    // sorted by monomial, no zero coefficients
    terms: Vec<(Monomial, Rational)>,
}

impl PiScalar {
    pub fn zero() -> Self {
        PiScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::monomial(q, Monomial::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn monomial(q: Rational, m: Monomial) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            PiScalar { terms: vec![(m, q)] }
        }
    }

    /// `π^{m/2}`
    pub fn pi_half_pow(m: i64) -> Self {
        Self::monomial(Rational::one(), Monomial { radicand: 1, pi_half_exp: m })
    }

    pub fn pi() -> Self {
        Self::pi_half_pow(2)
    }

    pub fn sqrt_pi() -> Self {
        Self::pi_half_pow(1)
    }

    /// `√n` for a positive integer `n`, reduced to `s·√r`.
    pub fn sqrt_int(n: u64) -> Self {
        let (s, r) = square_free_split(n);
        Self::monomial(Rational::from_integer(BigInt::from(s)), Monomial { radicand: r, pi_half_exp: 0 })
    }

    /// `n^{k/2}` for a positive integer `n` and any integer `k`.
    pub fn int_half_pow(n: u64, k: i64) -> Self {
        let base = Self::sqrt_int(n);
        let p = base.pow(k.unsigned_abs() as u32);
        if k >= 0 {
            p
        } else {
            p.inv_monomial().expect("power of a monomial is a monomial")
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    /// The rational value, when the number has no π or radical part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, q)] if *m == Monomial::ONE => Some(q.clone()),
            _ => None,
        }
    }

    fn insert_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(k, _)| k.cmp(&m)) {
            Ok(i) => {
                self.terms[i].1 += q;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (m, q)),
        }
    }

    /// `self += a * b` without materializing the product.
    pub fn add_mul(&mut self, a: &PiScalar, b: &PiScalar) {
        for (ma, qa) in &a.terms {
            for (mb, qb) in &b.terms {
                let (g, m) = ma.mul(*mb);
                let mut q = qa * qb;
                if g != 1 {
                    q *= Rational::from_integer(BigInt::from(g));
                }
                self.insert_term(m, q);
            }
        }
    }

    pub fn scale(&self, q: &Rational) -> PiScalar {
        if q.is_zero() {
            return PiScalar::zero();
        }
        PiScalar { terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect() }
    }

    pub fn pow(&self, e: u32) -> PiScalar {
        let mut acc = PiScalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term value; `None` for zero or multi-term values.
    pub fn inv_monomial(&self) -> Option<PiScalar> {
        let [(m, q)] = self.terms.as_slice() else {
            return None;
        };
        // 1/(q √r π^{e/2}) = √r / (q r) · π^{-e/2}
        let r = Rational::from_integer(BigInt::from(m.radicand));
        Some(PiScalar::monomial(
            (q * &r).recip(),
            Monomial { radicand: m.radicand, pi_half_exp: -m.pi_half_exp },
        ))
    }

    /// Division by a single-term divisor.
    pub fn div_monomial(&self, d: &PiScalar) -> Option<PiScalar> {
        Some(self * &d.inv_monomial()?)
    }

    pub fn to_f64(&self) -> f64 {
        float_of(self, 50)
    }
}

// ---------------------------------------------------------------------------
// arithmetic traits

impl Add<&PiScalar> for &PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiScalar {
    type Output = PiScalar;
    fn add(mut self, rhs: PiScalar) -> PiScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&PiScalar> for PiScalar {
    fn add_assign(&mut self, rhs: &PiScalar) {
        for (m, q) in &rhs.terms {
            self.insert_term(*m, q.clone());
        }
    }
}

impl AddAssign for PiScalar {
    fn add_assign(&mut self, rhs: PiScalar) {
        for (m, q) in rhs.terms {
            self.insert_term(m, q);
        }
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(mut self) -> PiScalar {
        for (_, q) in self.terms.iter_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        -self.clone()
    }
}

impl Sub<&PiScalar> for &PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for PiScalar {
    type Output = PiScalar;
    fn sub(mut self, rhs: PiScalar) -> PiScalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&PiScalar> for PiScalar {
    fn sub_assign(&mut self, rhs: &PiScalar) {
        for (m, q) in &rhs.terms {
            self.insert_term(*m, -q.clone());
        }
    }
}

impl Mul<&PiScalar> for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        let mut out = PiScalar::zero();
        out.add_mul(self, rhs);
        out
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: PiScalar) -> PiScalar {
        &self * &rhs
    }
}

impl From<Rational> for PiScalar {
    fn from(q: Rational) -> Self {
        PiScalar::from_rational(q)
    }
}

impl From<i64> for PiScalar {
    fn from(n: i64) -> Self {
        PiScalar::from_int(n)
    }
}

// ---------------------------------------------------------------------------
// formatting

impl fmt::Display for PiScalar {
    /// Symbolic form, e.g. `4/3·π^{2/2}` or `-1/2·√2·π^{1/2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                if q.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if q.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", q.abs())?;
            if m.radicand != 1 {
                write!(f, "·√{}", m.radicand)?;
            }
            if m.pi_half_exp != 0 {
                write!(f, "·π^{{{}/2}}", m.pi_half_exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiScalar({self})")
    }
}

// ---------------------------------------------------------------------------
// float bridge

fn decimal_to_rational(s: &str, digits: u32) -> Rational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let frac: String = frac.chars().take(digits as usize).collect();
    let num: BigInt = format!("{int}{frac}").parse().expect("constant digits");
    Rational::new(num, BigInt::from(10u32).pow(frac.len() as u32))
}

fn sqrt_rational_approx(r: u64, digits: u32) -> Rational {
    let scale = BigUint::from(10u32).pow(digits);
    let root = (BigUint::from(r) * &scale * &scale).sqrt();
    Rational::new(BigInt::from(root), BigInt::from(scale))
}

type ApproxCache = Mutex<HashMap<(Monomial, u32), Rational>>;

fn approx_cache() -> &'static ApproxCache {
    static CACHE: OnceLock<ApproxCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Rational approximation of `√r · π^{m/2}` with roughly `digits` correct
/// significant digits.
fn monomial_approx(m: Monomial, digits: u32) -> Rational {
    if let Some(v) = approx_cache().lock().unwrap().get(&(m, digits)) {
        return v.clone();
    }
    let pi = decimal_to_rational(PI_DIGITS, digits);
    let sqrt_pi = decimal_to_rational(SQRT_PI_DIGITS, digits);
    let e = m.pi_half_exp.unsigned_abs();
    let mut v = num_traits::pow(pi, (e / 2) as usize);
    if e % 2 == 1 {
        v *= sqrt_pi;
    }
    if m.pi_half_exp < 0 {
        v = v.recip();
    }
    if m.radicand != 1 {
        v *= sqrt_rational_approx(m.radicand, digits);
    }
    approx_cache().lock().unwrap().insert((m, digits), v.clone());
    v
}

/// Numerical value of `x`.
///
/// π, √π and radicals are replaced by rational approximations carrying
/// `precision` decimal digits (at least 50, at most [`MAX_FLOAT_DIGITS`]);
/// the sum is formed exactly and rounded to `f64` once at the end.
pub fn float_of(x: &PiScalar, precision: u32) -> f64 {
    let digits = precision.clamp(50, MAX_FLOAT_DIGITS);
    match x.terms.as_slice() {
        [] => 0.0,
        [(m, q)] if *m == Monomial::ONE => q.to_f64().unwrap_or(f64::NAN),
        terms => {
            let mut acc = Rational::zero();
            for (m, q) in terms {
                acc += q * monomial_approx(*m, digits);
            }
            acc.to_f64().unwrap_or(f64::NAN)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ring::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(&PiScalar::sqrt_pi() * &PiScalar::sqrt_pi(), PiScalar::pi());
        let x = PiScalar::monomial(rat(3, 7), Monomial { radicand: 5, pi_half_exp: -3 });
        assert_eq!(&x + &PiScalar::zero(), x);
        let two_pi = PiScalar::pi().scale(&rat(2, 1));
        assert_eq!(&two_pi - &PiScalar::pi(), PiScalar::pi());
    }

    #[test]
    fn radicals_reduce() {
        assert_eq!(PiScalar::sqrt_int(12), PiScalar::sqrt_int(3).scale(&rat(2, 1)));
        assert_eq!(&PiScalar::sqrt_int(6) * &PiScalar::sqrt_int(10), PiScalar::sqrt_int(60));
        assert_eq!(PiScalar::sqrt_int(7).pow(2), PiScalar::from_int(7));
        assert_eq!(PiScalar::int_half_pow(20, -3), PiScalar::sqrt_int(20).pow(3).inv_monomial().unwrap());
        assert_eq!(square_free_split(360), (6, 10));
    }

    #[test]
    fn inverse_and_float() {
        let x = PiScalar::monomial(rat(-5, 3), Monomial { radicand: 6, pi_half_exp: 7 });
        assert_eq!(&x * &x.inv_monomial().unwrap(), PiScalar::one());
        assert!((PiScalar::pi().to_f64() - std::f64::consts::PI).abs() < 1e-16);
        assert_eq!(PiScalar::zero().to_f64(), 0.0);
        let omega3 = PiScalar::pi().scale(&rat(4, 3));
        assert!((omega3.to_f64() - 4.188_790_204_786_391).abs() < 1e-15);
        let s2 = PiScalar::sqrt_int(2);
        assert_eq!(s2.to_f64(), std::f64::consts::SQRT_2);
    }

    #[test]
    fn symbolic_display() {
        let x = PiScalar::pi().scale(&rat(4, 3)) - PiScalar::sqrt_int(2).scale(&rat(1, 2));
        assert_eq!(x.to_string(), "-1/2·√2 + 4/3·π^{2/2}");
    }

    fn arb_scalar() -> impl Strategy<Value = PiScalar> {
        prop::collection::vec(
            (-6i64..7, 1i64..5, prop::sample::select(vec![1u64, 2, 3, 5, 6]), -3i64..4),
            0..4,
        )
        .prop_map(|ts| {
            let mut acc = PiScalar::zero();
            for (n, d, r, e) in ts {
                acc += PiScalar::monomial(rat(n, d), Monomial { radicand: r, pi_half_exp: e });
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert!(a.terms().iter().all(|(_, q)| !q.is_zero()));
        }

        #[test]
        fn float_is_additive(a in arb_scalar(), b in arb_scalar()) {
            let s = (&a + &b).to_f64();
            let t = a.to_f64() + b.to_f64();
            prop_assert!((s - t).abs() <= 1e-12 * (1.0 + a.to_f64().abs() + b.to_f64().abs()));
        }
    }
}
