use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{GkfError, Result};
use crate::lk_algebra::{abs_sigma, ModelSet};

use super::rng::{accumulate, RngStream};
use super::sampling::uniform_sphere;

/// A cap of Σ^N by its angular radius; `None` is the whole sphere.
fn cap_angle(set: &ModelSet, big_n: usize) -> Result<Option<f64>> {
    set.validate()?;
    if set.sigma_dim() != Some(big_n) {
        return Err(GkfError::DimensionMismatch { expected: big_n, got: set.sigma_dim().unwrap_or(0) });
    }
    match *set {
        ModelSet::AmbientSphere { .. } => Ok(None),
        ModelSet::GeodesicBall { r, .. } => {
            let alpha = r / (big_n as f64).sqrt();
            if alpha > FRAC_PI_2 + 1e-15 {
                Err(GkfError::UnsupportedSet(format!("{set} is not convex")))
            } else {
                Ok(Some(alpha.min(FRAC_PI_2)))
            }
        }
        _ => Err(GkfError::UnsupportedSet(format!("{set}: only caps and the sphere are supported"))),
    }
}

enum Restricted {
    Empty,
    Whole,
    /// unit center and cosine of the angular radius
    Cap(Vec<f64>, f64),
}

/// Restriction of `{x : ⟨x, c⟩ ≥ cos α}` to the great subsphere on the first
/// j+1 coordinates.
fn restrict(c: &[f64], cos_alpha: f64, j: usize) -> Restricted {
    let p = &c[..=j];
    let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    if cos_alpha > norm {
        Restricted::Empty
    } else if cos_alpha <= -norm {
        Restricted::Whole
    } else {
        Restricted::Cap(p.iter().map(|x| x / norm).collect(), cos_alpha / norm)
    }
}

/// Whether the great subsphere on the first j+1 coordinates meets the
/// intersection of two caps, each inside a closed hemisphere or the whole
/// sphere.
fn subsphere_hits(c1: &[f64], cos1: f64, c2: &[f64], cos2: f64, j: usize) -> bool {
    if j == 0 {
        // the two points ±e_0
        return [1.0, -1.0].iter().any(|s| s * c1[0] >= cos1 && s * c2[0] >= cos2);
    }
    match (restrict(c1, cos1, j), restrict(c2, cos2, j)) {
        (Restricted::Empty, _) | (_, Restricted::Empty) => false,
        (Restricted::Whole, _) | (_, Restricted::Whole) => true,
        (Restricted::Cap(p1, k1), Restricted::Cap(p2, k2)) => {
            let dot: f64 = p1.iter().zip(&p2).map(|(a, b)| a * b).sum();
            dot.clamp(-1.0, 1.0).acos() <= k1.acos() + k2.acos()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicInequalityReport {
    pub big_n: usize,
    pub k: usize,
    /// Monte Carlo mean of `|σ_k(C ∩ gD)|`
    pub lhs: f64,
    pub stderr: f64,
    /// `½ Σ_{i+j=k} |σ|_i(C) |σ|_j(D)`
    pub rhs: f64,
    pub n_rotations: usize,
    pub holds: bool,
}

/// Spot check of `E|σ_k(C ∩ gD)| ≤ ½ Σ_{i+j=k} |σ|_i(C)|σ|_j(D)` for convex
/// caps C, D of Σ^N.
///
/// For a convex set K, `σ_k(K) = P(W_k meets K) − P(W_{k−2} meets K)` with
/// W_j a uniform great j-subsphere (for k = 0, twice the volume fraction).
/// Nesting W_{k−2} ⊂ W_k and moving both caps instead of the subsphere gives
/// a 0/1 estimator per rotation.
pub fn kinematic_inequality_check(
    c: &ModelSet,
    d: &ModelSet,
    k: usize,
    big_n: usize,
    n_rotations: usize,
    stream: RngStream,
    workers: usize,
) -> Result<KinematicInequalityReport> {
    if k > big_n {
        return Err(GkfError::OutOfRange(format!("σ_{k} on Σ^{big_n}")));
    }
    if n_rotations < 2 || workers == 0 {
        return Err(GkfError::InvalidArgument("need at least two rotations and one worker".into()));
    }
    let cos1 = cap_angle(c, big_n)?.map_or(-1.0, f64::cos);
    let cos2 = cap_angle(d, big_n)?.map_or(-1.0, f64::cos);
    let moments = accumulate(n_rotations, stream, workers, |rng| {
        let a = uniform_sphere(big_n, rng);
        let b = uniform_sphere(big_n, rng);
        if k == 0 {
            let hits = [1.0, -1.0].iter().filter(|s| *s * a[0] >= cos1 && *s * b[0] >= cos2).count();
            return hits as f64;
        }
        let upper = subsphere_hits(&a, cos1, &b, cos2, k) as i32;
        let lower = if k >= 2 { subsphere_hits(&a, cos1, &b, cos2, k - 2) as i32 } else { 0 };
        f64::from(upper - lower)
    });
    let sc = abs_sigma(c)?;
    let sd = abs_sigma(d)?;
    let rhs = 0.5 * (0..=k).map(|i| sc[i] * sd[k - i]).sum::<f64>();
    let lhs = moments.mean().abs();
    let stderr = moments.stderr();
    let rel = if lhs > 0.0 { stderr / lhs } else { 0.0 };
    Ok(KinematicInequalityReport {
        big_n,
        k,
        lhs,
        stderr,
        rhs,
        n_rotations,
        holds: lhs <= rhs * (1.0 + 3.0 * rel),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lk_algebra::sigma_values;

    #[test]
    fn ambient_partner_recovers_cap_sigma() {
        let n = 6;
        let cap = ModelSet::GeodesicBall { n, r: 1.2 };
        let sigma = sigma_values(&cap).unwrap().to_f64();
        for k in 0..=n {
            let r = kinematic_inequality_check(
                &cap,
                &ModelSet::AmbientSphere { n },
                k,
                n,
                40_000,
                RngStream::new(8, k as u64),
                1,
            )
            .unwrap();
            assert!((r.lhs - sigma[k]).abs() < 4.0 * r.stderr + 1e-12, "k={k} {r:?} {}", sigma[k]);
            assert!((r.rhs - sigma[k]).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn rejects_nonconvex() {
        let big = ModelSet::GeodesicBall { n: 4, r: 3.5 };
        let s = RngStream::new(0, 0);
        assert!(kinematic_inequality_check(&big, &big, 1, 4, 10, s, 1).is_err());
    }
}
