use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::ln_gamma;

use crate::error::{GkfError, Result};
use crate::kinematics::nu_table;
use crate::scalar_ring::{factorial, generalized_binomial, ln_omega, omega, HalfInteger, PiScalar, Rational};
use crate::signed_log::SignedLog;

use super::{Basis, ValuationVector};

/// Largest N accepted by exact-arithmetic paths unless overridden.
pub const EXACT_MAX_N: usize = 64;
/// Largest N accepted by floating paths unless overridden.
pub const FLOAT_MAX_N: usize = 4096;

/// Size caps for exact and floating computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub exact_max_n: usize,
    pub float_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { exact_max_n: EXACT_MAX_N, float_max_n: FLOAT_MAX_N }
    }
}

impl Limits {
    pub fn check_exact(&self, n: usize) -> Result<()> {
        if n > self.exact_max_n {
            Err(GkfError::ExactLimit { n, limit: self.exact_max_n })
        } else {
            Ok(())
        }
    }

    pub fn check_float(&self, n: usize) -> Result<()> {
        if n > self.float_max_n {
            Err(GkfError::ExactLimit { n, limit: self.float_max_n })
        } else {
            Ok(())
        }
    }
}

/// Sparse rows: `rows[i] = [(j, c), …]` meaning element i = Σ c · (other)_j.
pub type SparseRows = Vec<Vec<(usize, PiScalar)>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Direction {
    ToSigma,
    FromSigma,
}

type RowCache = HashMap<(Basis, usize, Direction), Arc<SparseRows>>;

fn cache() -> &'static Mutex<RowCache> {
    static CACHE: OnceLock<Mutex<RowCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(basis: Basis, n: usize, dir: Direction) -> Arc<SparseRows> {
    let key = (basis, n, dir);
    if let Some(rows) = cache().lock().expect("row cache poisoned").get(&key) {
        return rows.clone();
    }
    let rows = Arc::new(match dir {
        Direction::ToSigma => build_to_sigma(basis, n),
        Direction::FromSigma => build_from_sigma(basis, n),
    });
    cache().lock().expect("row cache poisoned").entry(key).or_insert(rows).clone()
}

/// `(4N)^{k/2}` for every `k` in `-(N+2)..=N+2`, indexed by `k + N + 2`.
struct FourNPowers {
    n: usize,
    table: Vec<PiScalar>,
}

impl FourNPowers {
    fn new(n: usize) -> Self {
        let top = n as i64 + 2;
        if n == 0 {
            return FourNPowers { n, table: vec![PiScalar::one(); 2 * top as usize + 1] };
        }
        let root = PiScalar::sqrt_int(4 * n as u64);
        let inv_root = root.inv_monomial().expect("nonzero");
        let mut up = vec![PiScalar::one()];
        let mut down = vec![PiScalar::one()];
        for i in 1..=top as usize {
            up.push(&up[i - 1] * &root);
            down.push(&down[i - 1] * &inv_root);
        }
        let mut table: Vec<PiScalar> = down.into_iter().skip(1).rev().collect();
        table.extend(up);
        FourNPowers { n, table }
    }

    fn get(&self, k: i64) -> &PiScalar {
        &self.table[(k + self.n as i64 + 2) as usize]
    }
}

fn rat_scalar(q: Rational) -> PiScalar {
    PiScalar::from_rational(q)
}

/// `π^k / (k! ω_k)`, the factor taking t^k to μ_k.
pub(crate) fn mu_over_t_factor(k: usize) -> PiScalar {
    let fact = Rational::from_integer(factorial(k as u64));
    PiScalar::pi_half_pow(2 * k as i64)
        .div_monomial(&omega(k as u64).scale(&fact))
        .expect("ω_k is a monomial")
}

fn u_to_sigma_row(n: usize, k: usize) -> Vec<(usize, PiScalar)> {
    (0..=(n - k) / 2)
        .map(|j| {
            let c = generalized_binomial(HalfInteger(2 * j as i64 + k as i64), j as u64);
            (n - k - 2 * j, rat_scalar(c))
        })
        .collect()
}

fn build_to_sigma(basis: Basis, n: usize) -> SparseRows {
    let p = FourNPowers::new(n);
    match basis {
        Basis::Sigma => (0..=n).map(|i| vec![(i, PiScalar::one())]).collect(),
        Basis::Tau => (0..=n).map(|i| vec![(n - i, p.get(i as i64).clone())]).collect(),
        Basis::U => (0..=n).map(|k| u_to_sigma_row(n, k)).collect(),
        Basis::T => (0..=n)
            .map(|k| {
                let s = p.get(k as i64);
                u_to_sigma_row(n, k).into_iter().map(|(j, c)| (j, &c * s)).collect()
            })
            .collect(),
        Basis::Mu => (0..=n)
            .map(|k| {
                let s = &mu_over_t_factor(k) * p.get(k as i64);
                u_to_sigma_row(n, k).into_iter().map(|(j, c)| (j, &c * &s)).collect()
            })
            .collect(),
        Basis::Phi => (0..=n)
            .map(|i| (0..=(n - i) / 2).map(|j| (n - i - 2 * j, p.get(i as i64).clone())).collect())
            .collect(),
        Basis::Nu => {
            let table = nu_table(n);
            (0..=n)
                .map(|k| {
                    table
                        .row(k)
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (i, c.clone()))
                        .collect()
                })
                .collect()
        }
    }
}

/// Expansion of `σ_{N−i}` in powers of u: `u^i (1+u²)^{−i/2−1}`.
fn sigma_to_u_row(n: usize, i: usize) -> Vec<(usize, PiScalar)> {
    let top = HalfInteger(-(i as i64) - 2);
    (0..=(n - i) / 2)
        .map(|l| (i + 2 * l, rat_scalar(generalized_binomial(top, l as u64))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn build_from_sigma(basis: Basis, n: usize) -> SparseRows {
    let p = FourNPowers::new(n);
    // rows indexed by the σ index j
    let by_codim =
        |f: &dyn Fn(usize) -> Vec<(usize, PiScalar)>| -> SparseRows { (0..=n).map(|j| f(n - j)).collect() };
    match basis {
        Basis::Sigma => (0..=n).map(|i| vec![(i, PiScalar::one())]).collect(),
        Basis::Tau => by_codim(&|i| vec![(i, p.get(-(i as i64)).clone())]),
        Basis::U => by_codim(&|i| sigma_to_u_row(n, i)),
        Basis::T => by_codim(&|i| {
            sigma_to_u_row(n, i).into_iter().map(|(k, c)| (k, &c * p.get(-(k as i64)))).collect()
        }),
        Basis::Mu => by_codim(&|i| {
            sigma_to_u_row(n, i)
                .into_iter()
                .map(|(k, c)| {
                    let back = mu_over_t_factor(k).inv_monomial().expect("nonzero monomial");
                    (k, &(&c * &back) * p.get(-(k as i64)))
                })
                .collect()
        }),
        Basis::Phi => by_codim(&|i| {
            let mut row = vec![(i, p.get(-(i as i64)).clone())];
            if i + 2 <= n {
                row.push((i + 2, -p.get(-(i as i64) - 2).clone()));
            }
            row
        }),
        Basis::Nu => {
            let table = nu_table(n);
            (0..=n)
                .map(|j| {
                    table
                        .inverse_row(j)
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                })
                .collect()
        }
    }
}

/// Rows expressing each element of `basis` in the σ basis.
pub fn to_sigma_rows(basis: Basis, n: usize) -> Arc<SparseRows> {
    cached(basis, n, Direction::ToSigma)
}

/// Rows expressing each σ_j in `basis`.
pub fn from_sigma_rows(basis: Basis, n: usize) -> Arc<SparseRows> {
    cached(basis, n, Direction::FromSigma)
}

fn apply_rows(coeffs: &[PiScalar], rows: &SparseRows, n: usize) -> Vec<PiScalar> {
    let mut out = vec![PiScalar::zero(); n + 1];
    for (c, row) in coeffs.iter().zip(rows.iter()) {
        if c.is_zero() {
            continue;
        }
        for (j, r) in row {
            out[*j].add_mul(c, r);
        }
    }
    out
}

/// Exact change of basis, routed through σ.
pub fn change_basis(v: &ValuationVector, target: Basis) -> Result<ValuationVector> {
    change_basis_with(v, target, &Limits::default())
}

pub fn change_basis_with(v: &ValuationVector, target: Basis, limits: &Limits) -> Result<ValuationVector> {
    let n = v.n();
    limits.check_exact(n)?;
    if v.basis() == target {
        return Ok(v.clone());
    }
    let sigma = if v.basis() == Basis::Sigma {
        v.coeffs().to_vec()
    } else {
        apply_rows(v.coeffs(), &to_sigma_rows(v.basis(), n), n)
    };
    let out = if target == Basis::Sigma { sigma } else { apply_rows(&sigma, &from_sigma_rows(target, n), n) };
    ValuationVector::new(n, target, out)
}

/// Full change-of-basis matrix `M` with `M[i][j]` the coefficient of the
/// j-th target element in the i-th source element.
pub fn conversion_matrix(from: Basis, to: Basis, n: usize) -> Result<Vec<Vec<PiScalar>>> {
    (0..=n).map(|i| change_basis(&ValuationVector::unit(n, from, i), to).map(|v| v.into_coeffs())).collect()
}

/// Floating σ-expansion of the i-th element of `basis`, with coefficients
/// kept in log form. Works for N far beyond the exact cap.
pub fn sigma_expansion_log(basis: Basis, n: usize, i: usize) -> Vec<(usize, SignedLog)> {
    let ln4n = (4.0 * n as f64).ln();
    let u_row = |k: usize, shift: f64| -> Vec<(usize, SignedLog)> {
        let half_k = k as f64 / 2.0;
        (0..=(n - k) / 2)
            .map(|l| {
                let lf = l as f64;
                let ln_c = ln_gamma(lf + half_k + 1.0) - ln_gamma(lf + 1.0) - ln_gamma(half_k + 1.0);
                (n - k - 2 * l, SignedLog::positive(ln_c + shift))
            })
            .collect()
    };
    match basis {
        Basis::Sigma => vec![(i, SignedLog::ONE)],
        Basis::Tau => vec![(n - i, SignedLog::positive(i as f64 / 2.0 * ln4n))],
        Basis::U => u_row(i, 0.0),
        Basis::T => u_row(i, i as f64 / 2.0 * ln4n),
        Basis::Mu => {
            let k = i as f64;
            let shift = k * std::f64::consts::PI.ln() - ln_gamma(k + 1.0) - ln_omega(k) + k / 2.0 * ln4n;
            u_row(i, shift)
        }
        Basis::Phi => {
            (0..=(n - i) / 2).map(|j| (n - i - 2 * j, SignedLog::positive(i as f64 / 2.0 * ln4n))).collect()
        }
        Basis::Nu => nu_row_log(i),
    }
}

/// `ν_k = ½ Σ_{i ≤ k, i ≡ k} C(−i/2, (k−i)/2) σ_i` in log form.
fn nu_row_log(k: usize) -> Vec<(usize, SignedLog)> {
    let half = -std::f64::consts::LN_2;
    let mut row = Vec::new();
    for i in (k % 2..=k).step_by(2) {
        let m = (k - i) / 2;
        if i == 0 {
            if m == 0 {
                row.push((0, SignedLog::positive(half)));
            }
            continue;
        }
        // |C(−a, m)| = Γ(a+m) / (Γ(a) m!)
        let a = i as f64 / 2.0;
        let ln_c = ln_gamma(a + m as f64) - ln_gamma(a) - ln_gamma(m as f64 + 1.0);
        let sign = if m.is_multiple_of(2) { 1 } else { -1 };
        row.push((i, SignedLog::new(sign, ln_c + half)));
    }
    row
}

/// Integer helper used by table printers: `C(n, k)` as a PiScalar.
pub fn binomial_scalar(n: u64, k: u64) -> PiScalar {
    PiScalar::from_rational(Rational::from_integer(crate::scalar_ring::binomial(n, k)))
}
