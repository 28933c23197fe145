use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::lk_algebra::SeriesU;
use crate::scalar_ring::{rat, PiScalar};

/// The dual family in `p_N(χ) = Σ_k u^k ⊗ ν_k`, as a lower-triangular
/// table `ν_k = Σ_{i ≤ k} row(k)[i] σ_i`, together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct NuTable {
    n: usize,
    matrix: Vec<Vec<PiScalar>>,
    inverse: Vec<Vec<PiScalar>>,
}

impl NuTable {
    /// Extracts the table from the χ kinematic formula
    /// `p_N(χ) = ½ Σ_i φ̂^i ⊗ σ_i`, where φ̂ = u/√(1+u²), by reading off the
    /// coefficient of u^k in each power of φ̂.
    pub fn extract(n: usize) -> Self {
        let half = rat(1, 2);
        let powers = SeriesU::crofton_normalized(n).powers();
        let matrix: Vec<Vec<PiScalar>> =
            (0..=n).map(|k| (0..=n).map(|i| powers[i].coeffs()[k].scale(&half)).collect()).collect();
        let inverse = invert_lower_triangular(&matrix);
        NuTable { n, matrix, inverse }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// σ-coordinates of ν_k.
    pub fn row(&self, k: usize) -> &[PiScalar] {
        &self.matrix[k]
    }

    /// ν-coordinates of σ_j.
    pub fn inverse_row(&self, j: usize) -> &[PiScalar] {
        &self.inverse[j]
    }

    pub fn matrix(&self) -> &[Vec<PiScalar>] {
        &self.matrix
    }
}

/// Back-substitution for a lower-triangular matrix with constant diagonal ½:
/// `σ_k = 2 (ν_k − Σ_{i<k} M[k][i] σ_i)`.
fn invert_lower_triangular(m: &[Vec<PiScalar>]) -> Vec<Vec<PiScalar>> {
    let n = m.len();
    let mut inv: Vec<Vec<PiScalar>> = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = m[k][k].inv_monomial().expect("diagonal is nonzero");
        let mut row = vec![PiScalar::zero(); n];
        row[k] = PiScalar::one();
        for i in 0..k {
            if m[k][i].is_zero() {
                continue;
            }
            let c = -m[k][i].clone();
            for (j, x) in inv[i].iter().enumerate().take(i + 1) {
                if !x.is_zero() {
                    row[j].add_mul(&c, x);
                }
            }
        }
        for x in row.iter_mut() {
            *x = &*x * &pivot;
        }
        inv.push(row);
    }
    inv
}

type NuCache = HashMap<usize, Arc<NuTable>>;

/// Cached ν table for Σ^N.
pub fn nu_table(n: usize) -> Arc<NuTable> {
    static CACHE: OnceLock<Mutex<NuCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("nu cache poisoned").get(&n) {
        return t.clone();
    }
    let t = Arc::new(NuTable::extract(n));
    cache.lock().expect("nu cache poisoned").entry(n).or_insert(t).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_ring::{generalized_binomial, HalfInteger};

    fn q(a: i64, b: i64) -> PiScalar {
        PiScalar::from_rational(rat(a, b))
    }

    #[test]
    fn low_order_rows() {
        let t = nu_table(6);
        assert_eq!(t.row(0)[0], q(1, 2));
        assert_eq!(t.row(1)[1], q(1, 2));
        // 2ν_2 = σ_2, 2ν_3 = σ_3 − ½σ_1, 2ν_4 = σ_4 − σ_2
        assert_eq!(t.row(2), &[q(0, 1), q(0, 1), q(1, 2), q(0, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert_eq!(t.row(3)[1], q(-1, 4));
        assert_eq!(t.row(3)[3], q(1, 2));
        assert_eq!(t.row(4)[2], q(-1, 2));
        assert_eq!(t.row(4)[4], q(1, 2));
        assert!(t.row(4)[0].is_zero());
    }

    #[test]
    fn closed_forms() {
        let n = 12;
        let t = nu_table(n);
        for k in 0..=n {
            for i in 0..=n {
                let direct = if i <= k && (k - i) % 2 == 0 {
                    let c = if i == 0 {
                        if k == 0 {
                            rat(1, 1)
                        } else {
                            rat(0, 1)
                        }
                    } else {
                        generalized_binomial(HalfInteger(-(i as i64)), ((k - i) / 2) as u64)
                    };
                    PiScalar::from_rational(c * rat(1, 2))
                } else {
                    PiScalar::zero()
                };
                assert_eq!(t.row(k)[i], direct, "ν_{k} σ_{i}");
                // σ_i = 2 Σ_k (−1)^{(i−k)/2} C(−k/2, (i−k)/2) ν_k
                let inv = if k <= i && (i - k) % 2 == 0 {
                    let m = (i - k) / 2;
                    let c = if k == 0 {
                        if m == 0 {
                            rat(1, 1)
                        } else {
                            rat(0, 1)
                        }
                    } else {
                        generalized_binomial(HalfInteger(-(k as i64)), m as u64)
                    };
                    let sign = if m % 2 == 0 { 2 } else { -2 };
                    PiScalar::from_rational(c * rat(sign, 1))
                } else {
                    PiScalar::zero()
                };
                assert_eq!(t.inverse_row(i)[k], inv, "σ_{i} ν_{k}");
            }
        }
    }
}
