//! Kinematic formulas on Σ^N: the operators `p_N`, the ν family dual to the
//! u-powers, and the Gaussian kinematic coefficients.

mod nu;

use std::f64::consts::FRAC_PI_2;

use crate::error::{GkfError, Result};
use crate::lk_algebra::{
    change_basis, sigma_expansion_log, sigma_values, to_sigma_rows, Basis, ModelSet, ValuationVector,
};
use crate::scalar_ring::{factorial, omega, rat, PiScalar, Rational};
use crate::signed_log::{log_sum, SignedLog};

pub use nu::{nu_table, NuTable};

/// An element `Σ_{i,j} c_{ij} L_i ⊗ R_j` of the tensor square of the
/// valuation space, with `L` and `R` bases of Σ^N valuations.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicTensor {
    n: usize,
    left: Basis,
    right: Basis,
    entries: Vec<Vec<PiScalar>>,
}

impl KinematicTensor {
    pub fn zero(n: usize, left: Basis, right: Basis) -> Self {
        KinematicTensor { n, left, right, entries: vec![vec![PiScalar::zero(); n + 1]; n + 1] }
    }

    pub fn new(n: usize, left: Basis, right: Basis, entries: Vec<Vec<PiScalar>>) -> Result<Self> {
        if entries.len() != n + 1 {
            return Err(GkfError::DimensionMismatch { expected: n + 1, got: entries.len() });
        }
        if let Some(r) = entries.iter().find(|r| r.len() != n + 1) {
            return Err(GkfError::DimensionMismatch { expected: n + 1, got: r.len() });
        }
        Ok(KinematicTensor { n, left, right, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> (Basis, Basis) {
        (self.left, self.right)
    }

    pub fn entry(&self, i: usize, j: usize) -> &PiScalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<PiScalar>] {
        &self.entries
    }

    pub fn add_assign(&mut self, other: &KinematicTensor, scale: &PiScalar) {
        assert_eq!((self.n, self.left, self.right), (other.n, other.left, other.right));
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            for (x, y) in a.iter_mut().zip(b) {
                if !y.is_zero() {
                    x.add_mul(scale, y);
                }
            }
        }
    }

    /// Rewrites both tensor factors in new bases, exactly.
    pub fn convert(&self, left: Basis, right: Basis) -> Result<KinematicTensor> {
        let n = self.n;
        // right factor, row by row
        let mut rows = Vec::with_capacity(n + 1);
        for r in &self.entries {
            let v = ValuationVector::new(n, self.right, r.clone())?;
            rows.push(change_basis(&v, right)?.into_coeffs());
        }
        // left factor, column by column
        let mut entries = vec![vec![PiScalar::zero(); n + 1]; n + 1];
        for j in 0..=n {
            let col: Vec<PiScalar> = rows.iter().map(|r| r[j].clone()).collect();
            let v = change_basis(&ValuationVector::new(n, self.left, col)?, left)?;
            for (i, c) in v.into_coeffs().into_iter().enumerate() {
                entries[i][j] = c;
            }
        }
        Ok(KinematicTensor { n, left, right, entries })
    }

    /// `Σ c_{ij} a_i b_j` for values `a_i = L_i(A)`, `b_j = R_j(B)`.
    pub fn pair_f64(&self, a: &[f64], b: &[f64]) -> f64 {
        let terms = self.entries.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| {
                SignedLog::from_f64(c.to_f64()) * SignedLog::from_f64(a[i]) * SignedLog::from_f64(b[j])
            })
        });
        log_sum(terms).to_f64()
    }

    /// Exact pairing with exact values.
    pub fn pair_exact(&self, a: &[PiScalar], b: &[PiScalar]) -> PiScalar {
        let mut acc = PiScalar::zero();
        for (i, row) in self.entries.iter().enumerate() {
            if a[i].is_zero() {
                continue;
            }
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && !b[j].is_zero() {
                    acc.add_mul(&(c * &a[i]), &b[j]);
                }
            }
        }
        acc
    }
}

/// `p_N(σ_k) = ½ Σ_{i+j=k} σ_i ⊗ σ_j`.
pub fn p_sigma(n: usize, k: usize) -> Result<KinematicTensor> {
    if k > n {
        return Err(GkfError::OutOfRange(format!("σ_{k} on Σ^{n}")));
    }
    let mut t = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
    let half = PiScalar::from_rational(rat(1, 2));
    for i in 0..=k {
        t.entries[i][k - i] = half.clone();
    }
    Ok(t)
}

/// `p_N(τ_k) = 2^{−N−1} N^{−N/2} Σ_{i+j=N+k} τ_i ⊗ τ_j`.
pub fn p_tau(n: usize, k: usize) -> Result<KinematicTensor> {
    if k > n {
        return Err(GkfError::OutOfRange(format!("τ_{k} on Σ^{n}")));
    }
    let c = &PiScalar::from_rational(rat(1, 2).pow(n as i32 + 1))
        * &PiScalar::int_half_pow(n.max(1) as u64, -(n as i64));
    let mut t = KinematicTensor::zero(n, Basis::Tau, Basis::Tau);
    for i in k..=n {
        t.entries[i][n + k - i] = c.clone();
    }
    Ok(t)
}

/// Kinematic operator of an arbitrary valuation, in σ ⊗ σ; linear in the
/// valuation.
pub fn kinematic_operator(v: &ValuationVector) -> Result<KinematicTensor> {
    let n = v.n();
    let s = change_basis(v, Basis::Sigma)?;
    let mut t = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
    for (m, c) in s.coeffs().iter().enumerate() {
        if !c.is_zero() {
            t.add_assign(&p_sigma(n, m)?, c);
        }
    }
    Ok(t)
}

/// `p_N(u^k)` in σ ⊗ σ.
pub fn p_u_power(n: usize, k: usize) -> Result<KinematicTensor> {
    if k > n {
        return Err(GkfError::OutOfRange(format!("u^{k} on Σ^{n}")));
    }
    kinematic_operator(&ValuationVector::u_power(n, k))
}

/// `p_N(χ) = Σ_k u^k ⊗ ν_k`, stored in u ⊗ σ with the ν rows expanded.
pub fn p_chi(n: usize) -> KinematicTensor {
    let table = nu_table(n);
    KinematicTensor { n, left: Basis::U, right: Basis::Sigma, entries: table.matrix().to_vec() }
}

/// `p_N(χ)` assembled from `p_σ` through χ = Σ_j σ_{N−2j}.
pub fn p_chi_sigma(n: usize) -> KinematicTensor {
    let mut t = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
    let one = PiScalar::one();
    for m in (n % 2..=n).step_by(2) {
        t.add_assign(&p_sigma(n, m).expect("m ≤ N"), &one);
    }
    t
}

/// `p_N(e_k)` paired with σ-values of two sets, in floating point, for a
/// basis element `e_k`. Uses log-form σ-expansions, so N may be far beyond
/// the exact cap.
pub fn pair_kinematic_f64(basis: Basis, n: usize, k: usize, a: &[SignedLog], b: &[SignedLog]) -> Result<f64> {
    if k > n {
        return Err(GkfError::OutOfRange(format!("index {k} on Σ^{n}")));
    }
    if a.len() != n + 1 || b.len() != n + 1 {
        return Err(GkfError::DimensionMismatch { expected: n + 1, got: a.len().min(b.len()) });
    }
    let half = SignedLog::positive(-std::f64::consts::LN_2);
    let mut terms = Vec::new();
    for (m, c) in sigma_expansion_log(basis, n, k) {
        let c = c * half;
        for i in 0..=m {
            if !a[i].is_zero() && !b[m - i].is_zero() {
                terms.push(c * a[i] * b[m - i]);
            }
        }
    }
    Ok(log_sum(terms).to_f64())
}

/// `(π/2)^{k/2} / (k! ω_k)`, the weight of the k-th Lipschitz–Killing term
/// in the Gaussian kinematic formula.
pub fn gkf_coefficient(k: usize) -> PiScalar {
    let fact = Rational::from_integer(factorial(k as u64));
    let num = &PiScalar::pi_half_pow(k as i64) * &PiScalar::int_half_pow(2, -(k as i64));
    num.div_monomial(&omega(k as u64).scale(&fact)).expect("ω_k is a monomial")
}

/// Values `u^k(A)` for k = 0..=N, from exact σ-expansions and float σ.
fn u_values(n: usize, sigma: &[f64]) -> Vec<f64> {
    let rows = to_sigma_rows(Basis::U, n);
    rows.iter()
        .map(|row| {
            log_sum(row.iter().map(|(j, c)| SignedLog::from_f64(c.to_f64()) * SignedLog::from_f64(sigma[*j])))
                .to_f64()
        })
        .collect()
}

/// Outcome of the tube-volume check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeIdentity {
    /// normalized volume of the r-neighbourhood of A
    pub lhs: f64,
    /// `Σ_k u^k(B_r) ν_k(A)`
    pub rhs: f64,
}

/// Checks `vol(Tube(A, r))/vol(Σ^N) = Σ_k u^k(B_r) ν_k(A)` for a model set A
/// whose outer reach exceeds r. The tube of a model set is again a model
/// set, so the left side is computed directly.
pub fn tube_volume_identity(n: usize, r: f64, set: &ModelSet) -> Result<TubeIdentity> {
    set.validate()?;
    if set.sigma_dim() != Some(n) {
        return Err(GkfError::UnsupportedSet(format!("{set} does not live in Σ^{n}")));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(GkfError::InvalidArgument(format!("tube radius {r}")));
    }
    let big_r = (n as f64).sqrt();
    let tube = match *set {
        ModelSet::GeodesicBall { r: rho, .. } => ModelSet::GeodesicBall { n, r: rho + r },
        ModelSet::SubsphereTube { d, s, .. } => ModelSet::SubsphereTube { n, d, s: s + r },
        ModelSet::GreatSubsphere { j, .. } if j < n => ModelSet::SubsphereTube { n, d: n - j, s: r },
        ModelSet::GreatSubsphere { .. } | ModelSet::AmbientSphere { .. } => *set,
        _ => return Err(GkfError::UnsupportedSet(format!("{set}"))),
    };
    tube.validate().map_err(|_| {
        GkfError::OutOfRange(format!(
            "radius {r} reaches the focal set of {set} (reach bound {})",
            match *set {
                ModelSet::GeodesicBall { r: rho, .. } => std::f64::consts::PI * big_r - rho,
                ModelSet::SubsphereTube { s, .. } => FRAC_PI_2 * big_r - s,
                _ => FRAC_PI_2 * big_r,
            }
        ))
    })?;
    let lhs = sigma_values(&tube)?.to_f64()[0] / 2.0;
    let ball = ModelSet::GeodesicBall { n, r };
    let u = u_values(n, &sigma_values(&ball)?.to_f64());
    let a = sigma_values(set)?.to_f64();
    let rhs = p_chi(n).pair_f64(&u, &a);
    Ok(TubeIdentity { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        assert_eq!(gkf_coefficient(0), PiScalar::one());
        assert_eq!(gkf_coefficient(2), PiScalar::from_rational(rat(1, 4)));
        let c1 = gkf_coefficient(1).to_f64();
        assert!((c1 - (std::f64::consts::PI / 2.0).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn tau_operator_is_rescaled_sigma_operator() {
        for n in [1usize, 2, 4, 7] {
            for k in 0..=n {
                let lhs = p_tau(n, k).unwrap().convert(Basis::Sigma, Basis::Sigma).unwrap();
                let mut rhs = KinematicTensor::zero(n, Basis::Sigma, Basis::Sigma);
                rhs.add_assign(&p_sigma(n, n - k).unwrap(), &PiScalar::int_half_pow(4 * n as u64, k as i64));
                assert_eq!(lhs, rhs, "N={n} k={k}");
            }
        }
    }

    #[test]
    fn chi_operator_two_ways() {
        for n in [1usize, 3, 6, 9] {
            let a = p_chi(n).convert(Basis::Sigma, Basis::Sigma).unwrap();
            assert_eq!(a, p_chi_sigma(n), "N={n}");
            let b = kinematic_operator(&ValuationVector::chi(n)).unwrap();
            assert_eq!(b, p_chi_sigma(n));
        }
    }

    #[test]
    fn float_pairing_matches_exact() {
        let n = 7;
        let a = sigma_values(&ModelSet::GeodesicBall { n, r: 1.3 }).unwrap();
        let b = sigma_values(&ModelSet::SubsphereTube { n, d: 3, s: 0.6 }).unwrap();
        for basis in [Basis::U, Basis::T, Basis::Nu, Basis::Phi] {
            for k in 0..=n {
                let exact = kinematic_operator(&ValuationVector::unit(n, basis, k))
                    .unwrap()
                    .pair_f64(&a.to_f64(), &b.to_f64());
                let float = pair_kinematic_f64(basis, n, k, &a.values, &b.values).unwrap();
                assert!((exact - float).abs() < 1e-11 * exact.abs().max(1.0), "{basis} {k}");
            }
        }
    }

    #[test]
    fn tube_identity_small() {
        let set = ModelSet::SubsphereTube { n: 6, d: 2, s: 0.4 };
        let t = tube_volume_identity(6, 0.5, &set).unwrap();
        assert!((t.lhs - t.rhs).abs() < 1e-10, "{t:?}");
        let t = tube_volume_identity(5, 0.7, &ModelSet::GreatSubsphere { n: 5, j: 2 }).unwrap();
        assert!((t.lhs - t.rhs).abs() < 1e-10, "{t:?}");
        assert!(tube_volume_identity(4, 3.2, &ModelSet::GreatSubsphere { n: 4, j: 1 }).is_err());
    }
}
