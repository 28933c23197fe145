use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GkfError, Result};
use crate::gaussian_volumes::{gkf_predict, GaussSet};
use crate::kinematics::pair_kinematic_f64;
use crate::lk_algebra::{sigma_values, unit_lk, Basis, ModelSet};

use super::chi::{chi_intersection, volume_fraction};
use super::rng::{accumulate, RngStream};
use super::sampling::{sample_law, Law};

/// Outcome of comparing an estimate with its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Gate {
    Pass,
    Warn,
    Fail,
}

impl Gate {
    /// PASS below 3 standard errors, WARN below 4.
    pub fn from_z(z: f64) -> Gate {
        if z.abs() < 3.0 {
            Gate::Pass
        } else if z.abs() < 4.0 {
            Gate::Warn
        } else {
            Gate::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_samples: usize,
    pub stream: RngStream,
    pub workers: usize,
    /// points on A per draw of F, for volume fractions
    pub points_per_draw: usize,
}

impl McConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        McConfig { n_samples, stream: RngStream::new(seed, 0), workers: 1, points_per_draw: 1 }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(GkfError::InvalidArgument("need at least two samples".into()));
        }
        if self.workers == 0 || self.points_per_draw == 0 {
            return Err(GkfError::InvalidArgument("workers and points per draw must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub prediction: f64,
    pub z_score: f64,
    pub seed: u64,
    pub stream_id: u64,
    pub status: Gate,
}

impl McReport {
    fn new(estimate: f64, stderr: f64, prediction: f64, config: &McConfig) -> Self {
        let diff = estimate - prediction;
        let z = if stderr > 0.0 {
            diff / stderr
        } else if diff.abs() <= 1e-12 * prediction.abs().max(1.0) {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        McReport {
            estimate,
            stderr,
            n_samples: config.n_samples,
            prediction,
            z_score: z,
            seed: config.stream.seed,
            stream_id: config.stream.stream_id,
            status: Gate::from_z(z),
        }
    }
}

/// The Σ^N set corresponding to `D ⊂ R^d`: the points of Σ^N whose first d
/// coordinates lie in D.
pub fn sigma_counterpart(d: &GaussSet, big_n: usize) -> Result<ModelSet> {
    d.validate()?;
    if d.dim() > big_n {
        return Err(GkfError::DimensionMismatch { expected: big_n, got: d.dim() });
    }
    let root = (big_n as f64).sqrt();
    match *d {
        GaussSet::FullSpace { .. } => Ok(ModelSet::AmbientSphere { n: big_n }),
        GaussSet::Origin { d } => ModelSet::great_subsphere(big_n, big_n - d),
        GaussSet::CenteredBall { d, rho } if rho < root => {
            ModelSet::subsphere_tube(big_n, d, root * (rho / root).asin())
        }
        GaussSet::HalfSpace { u, .. } if u.abs() < root => {
            ModelSet::geodesic_ball(big_n, root * (u / root).acos())
        }
        _ => Err(GkfError::UnsupportedCombination(format!("{d} has no model counterpart in Σ^{big_n}"))),
    }
}

/// Image of a unit-sphere set under `x ↦ √N x` into Σ^N.
pub fn embed_unit(a: &ModelSet, big_n: usize) -> Result<ModelSet> {
    match *a {
        ModelSet::UnitSphere { n } if n <= big_n => ModelSet::great_subsphere(big_n, n),
        ModelSet::UnitGreatSubsphere { m, n } if n <= big_n => ModelSet::great_subsphere(big_n, m),
        _ => Err(GkfError::UnsupportedCombination(format!("{a} has no model image in Σ^{big_n}"))),
    }
}

/// Expected value of the degree-m estimand under the given law.
///
/// Under Π_∞ this is the Gaussian kinematic formula. Under Π_N, F^{−1}D is
/// the pull-back of a rotated copy of the counterpart of D in Σ^N, so χ
/// follows from the kinematic formula on Σ^N and the top degree from the
/// volume fraction of that counterpart.
pub fn predict(a: &ModelSet, d: &GaussSet, m: usize, law: Law) -> Result<f64> {
    let n = check_pair(a, d, m)?;
    match law {
        Law::PiInfinity => Ok(gkf_predict(a, d, m)?.to_f64()),
        Law::PiN(big_n) => {
            let counterpart = sigma_values(&sigma_counterpart(d, big_n)?)?;
            if m == n && n > 0 {
                let t = unit_lk(a, n)?.to_f64();
                return Ok(t * counterpart.values[0].to_f64() / 2.0);
            }
            let image = sigma_values(&embed_unit(a, big_n)?)?;
            pair_kinematic_f64(Basis::U, big_n, 0, &image.values, &counterpart.values)
        }
    }
}

fn check_pair(a: &ModelSet, d: &GaussSet, m: usize) -> Result<usize> {
    a.validate()?;
    d.validate()?;
    let n = a.unit_dim().ok_or_else(|| GkfError::UnsupportedSet(format!("{a} is not a unit-sphere set")))?;
    let top = match *a {
        ModelSet::UnitGreatSubsphere { m, .. } => m,
        _ => n,
    };
    if m != 0 && m != top {
        return Err(GkfError::UnsupportedCombination(format!(
            "degree {m} estimand; only 0 and {top} are sampled"
        )));
    }
    if m == top && top != n {
        return Err(GkfError::UnsupportedCombination(
            "top degree on a lower-dimensional great subsphere".into(),
        ));
    }
    Ok(n)
}

/// Monte Carlo estimate of `E L_m(A ∩ F^{−1}D)`, for m = 0 (Euler
/// characteristic) or m = dim A (volume), with its prediction.
///
/// Each sample reseeds from its chunk stream, so the same configuration
/// under Π_∞ and Π_N draws coupled maps sample by sample.
pub fn estimate_lhs(a: &ModelSet, d: &GaussSet, m: usize, law: Law, config: &McConfig) -> Result<McReport> {
    config.validate()?;
    let n = check_pair(a, d, m)?;
    if let Law::PiN(big_n) = law {
        if big_n < n.max(d.dim()) {
            return Err(GkfError::DimensionMismatch { expected: n.max(d.dim()), got: big_n });
        }
    }
    let prediction = predict(a, d, m, law)?;
    let top = m == n && n > 0;
    let scale = if top { unit_lk(a, n)?.to_f64() } else { 1.0 };
    let dd = d.dim();
    let points = config.points_per_draw;
    // classify once up front so sampling errors cannot occur mid-run
    {
        let mut rng = config.stream.rng();
        let f = sample_law(law, n, dd, &mut rng)?;
        if top {
            volume_fraction(a, d, &f, &mut rng, 1)?;
        } else {
            chi_intersection(a, d, &f)?;
        }
    }
    let moments = accumulate(config.n_samples, config.stream, config.workers, |chunk_rng| {
        let mut rng = ChaCha8Rng::seed_from_u64(chunk_rng.random::<u64>());
        let f = sample_law(law, n, dd, &mut rng).expect("validated");
        if top {
            scale * volume_fraction(a, d, &f, &mut rng, points).expect("validated")
        } else {
            chi_intersection(a, d, &f).expect("validated") as f64
        }
    });
    Ok(McReport::new(moments.mean(), moments.stderr(), prediction, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterparts() {
        let d = GaussSet::CenteredBall { d: 2, rho: 1.0 };
        match sigma_counterpart(&d, 100).unwrap() {
            ModelSet::SubsphereTube { n: 100, d: 2, s } => assert!((s - 10.0 * 0.1f64.asin()).abs() < 1e-14),
            other => panic!("{other}"),
        }
        assert!(sigma_counterpart(&GaussSet::HalfSpace { d: 1, u: 11.0 }, 100).is_err());
        assert_eq!(
            sigma_counterpart(&GaussSet::Origin { d: 3 }, 10).unwrap(),
            ModelSet::GreatSubsphere { n: 10, j: 7 }
        );
    }

    #[test]
    fn pi_n_prediction_approaches_gaussian_one() {
        let a = ModelSet::UnitSphere { n: 2 };
        let d = GaussSet::HalfSpace { d: 1, u: 0.7 };
        let inf = predict(&a, &d, 0, Law::PiInfinity).unwrap();
        let fin = predict(&a, &d, 0, Law::PiN(4000)).unwrap();
        assert!((inf - fin).abs() < 1e-3, "{inf} {fin}");
    }

    #[test]
    fn halfspace_small_run() {
        let a = ModelSet::UnitSphere { n: 2 };
        let d = GaussSet::HalfSpace { d: 1, u: 1.0 };
        let r = estimate_lhs(&a, &d, 0, Law::PiInfinity, &McConfig::new(20_000, 11)).unwrap();
        assert!(r.z_score.abs() < 4.0, "{r:?}");
        let r = estimate_lhs(&a, &d, 2, Law::PiInfinity, &McConfig::new(5_000, 12)).unwrap();
        assert!(r.z_score.abs() < 4.0, "{r:?}");
    }
}
