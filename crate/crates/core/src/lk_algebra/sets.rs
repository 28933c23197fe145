use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use statrs::function::gamma::ln_gamma;

use crate::error::{GkfError, Result};
use crate::quadrature::integrate;
use crate::scalar_ring::{ln_alpha, PiScalar};
use crate::signed_log::{log_sum, SignedLog};

/// Test sets with closed-form curvature data.
///
/// The first four live in Σ^N, the sphere of radius √N in R^{N+1}; lengths
/// (`r`, `s`) are geodesic on that sphere. The `Unit*` variants live on the
/// unit sphere S^n and are the targets of Gaussian predictions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSet {
    AmbientSphere {
        n: usize,
    },
    /// Geodesic ball of radius `r` about a point; `r = 0` is the point itself.
    GeodesicBall {
        n: usize,
        r: f64,
    },
    /// Great subsphere of dimension `j`.
    GreatSubsphere {
        n: usize,
        j: usize,
    },
    /// Points within geodesic distance `s` of a great S^{N−d}.
    SubsphereTube {
        n: usize,
        d: usize,
        s: f64,
    },
    UnitSphere {
        n: usize,
    },
    UnitGreatSubsphere {
        n: usize,
        m: usize,
    },
    /// Spherical cap of angular radius `theta`.
    UnitCap {
        n: usize,
        theta: f64,
    },
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSet::AmbientSphere { n } => write!(f, "Σ^{n}"),
            ModelSet::GeodesicBall { n, r } => write!(f, "ball(Σ^{n}, r={r})"),
            ModelSet::GreatSubsphere { n, j } => write!(f, "S^{j} in Σ^{n}"),
            ModelSet::SubsphereTube { n, d, s } => write!(f, "tube(S^{} in Σ^{n}, s={s})", n - d),
            ModelSet::UnitSphere { n } => write!(f, "S^{n}"),
            ModelSet::UnitGreatSubsphere { n, m } => write!(f, "S^{m} in S^{n}"),
            ModelSet::UnitCap { n, theta } => write!(f, "cap(S^{n}, θ={theta})"),
        }
    }
}

impl ModelSet {
    pub fn geodesic_ball(n: usize, r: f64) -> Result<Self> {
        let s = ModelSet::GeodesicBall { n, r };
        s.validate()?;
        Ok(s)
    }

    pub fn subsphere_tube(n: usize, d: usize, s: f64) -> Result<Self> {
        let t = ModelSet::SubsphereTube { n, d, s };
        t.validate()?;
        Ok(t)
    }

    pub fn great_subsphere(n: usize, j: usize) -> Result<Self> {
        let t = ModelSet::GreatSubsphere { n, j };
        t.validate()?;
        Ok(t)
    }

    pub fn unit_cap(n: usize, theta: f64) -> Result<Self> {
        let t = ModelSet::UnitCap { n, theta };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GkfError::InvalidArgument(msg));
        match *self {
            ModelSet::AmbientSphere { n } | ModelSet::UnitSphere { n } if n == 0 => {
                bad("sphere dimension must be at least 1".into())
            }
            ModelSet::GeodesicBall { n, r } => {
                if n == 0 {
                    return bad("sphere dimension must be at least 1".into());
                }
                let max = PI * (n as f64).sqrt();
                if !(r.is_finite() && (0.0..max).contains(&r)) {
                    return bad(format!("ball radius {r} outside [0, π√N) for N = {n}"));
                }
                Ok(())
            }
            ModelSet::GreatSubsphere { n, j } => {
                if n == 0 || j > n {
                    return bad(format!("great S^{j} does not fit in Σ^{n}"));
                }
                Ok(())
            }
            ModelSet::SubsphereTube { n, d, s } => {
                if n == 0 || d == 0 || d > n {
                    return bad(format!("tube codimension {d} must lie in 1..={n}"));
                }
                let max = FRAC_PI_2 * (n as f64).sqrt();
                if !(s.is_finite() && (0.0..max).contains(&s)) {
                    return bad(format!("tube radius {s} outside [0, π√N/2) for N = {n}"));
                }
                Ok(())
            }
            ModelSet::UnitGreatSubsphere { n, m } => {
                if n == 0 || m > n {
                    return bad(format!("great S^{m} does not fit in S^{n}"));
                }
                Ok(())
            }
            ModelSet::UnitCap { n, theta } => {
                if n == 0 {
                    return bad("sphere dimension must be at least 1".into());
                }
                if !(theta.is_finite() && (0.0..PI).contains(&theta)) {
                    return bad(format!("cap radius {theta} outside [0, π)"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// N when the set lives in Σ^N.
    pub fn sigma_dim(&self) -> Option<usize> {
        match *self {
            ModelSet::AmbientSphere { n }
            | ModelSet::GeodesicBall { n, .. }
            | ModelSet::GreatSubsphere { n, .. }
            | ModelSet::SubsphereTube { n, .. } => Some(n),
            _ => None,
        }
    }

    /// n when the set lives on the unit sphere S^n.
    pub fn unit_dim(&self) -> Option<usize> {
        match *self {
            ModelSet::UnitSphere { n }
            | ModelSet::UnitGreatSubsphere { n, .. }
            | ModelSet::UnitCap { n, .. } => Some(n),
            _ => None,
        }
    }
}

/// Principal curvatures of a smooth boundary with constant curvature data,
/// as `(value, multiplicity)` pairs whose multiplicities sum to N − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalCurvatureProfile {
    pub n: usize,
    /// log of the total boundary area
    pub ln_area: f64,
    pub curvatures: Vec<(f64, usize)>,
}

impl PrincipalCurvatureProfile {
    /// Elementary symmetric polynomials `e_0, …, e_{N−1}` of the curvature
    /// multiset, in log form. `absolute` uses |κ| throughout.
    pub fn elementary_symmetric(&self, absolute: bool) -> Vec<SignedLog> {
        let mut poly = vec![SignedLog::ONE];
        for &(kappa, mult) in &self.curvatures {
            let kappa = if absolute { kappa.abs() } else { kappa };
            let factor: Vec<SignedLog> = (0..=mult)
                .map(|p| {
                    let ln_b = ln_gamma(mult as f64 + 1.0)
                        - ln_gamma(p as f64 + 1.0)
                        - ln_gamma((mult - p) as f64 + 1.0);
                    SignedLog::from_f64(kappa).pow(p).shift(ln_b)
                })
                .collect();
            poly = (0..poly.len() + mult)
                .map(|m| {
                    let lo = m.saturating_sub(mult);
                    let hi = m.min(poly.len() - 1);
                    log_sum((lo..=hi).map(|a| poly[a] * factor[m - a]))
                })
                .collect();
        }
        poly
    }
}

/// Principal-curvature profile of a Σ^N test set with smooth boundary.
pub fn curvature_profile(set: &ModelSet) -> Result<PrincipalCurvatureProfile> {
    set.validate()?;
    match *set {
        ModelSet::GeodesicBall { n, r } if r > 0.0 => {
            let big_r = (n as f64).sqrt();
            let theta = r / big_r;
            let ln_area = ln_alpha((n - 1) as f64) + (n - 1) as f64 * (big_r * theta.sin()).ln();
            let curvatures = if n > 1 { vec![(cot(theta) / big_r, n - 1)] } else { vec![] };
            Ok(PrincipalCurvatureProfile { n, ln_area, curvatures })
        }
        ModelSet::SubsphereTube { n, d, s } if s > 0.0 => {
            let big_r = (n as f64).sqrt();
            let t = s / big_r;
            let ln_area = ln_alpha((n - d) as f64)
                + ln_alpha((d - 1) as f64)
                + (n - 1) as f64 * big_r.ln()
                + (n - d) as f64 * t.cos().ln()
                + (d - 1) as f64 * t.sin().ln();
            let curvatures = [(cot(t) / big_r, d - 1), (-t.tan() / big_r, n - d)]
                .into_iter()
                .filter(|c| c.1 > 0)
                .collect();
            Ok(PrincipalCurvatureProfile { n, ln_area, curvatures })
        }
        _ => Err(GkfError::UnsupportedSet(format!("{set} has no smooth boundary profile"))),
    }
}

fn cot(x: f64) -> f64 {
    if x == FRAC_PI_2 {
        0.0
    } else {
        x.cos() / x.sin()
    }
}

trait PowExt {
    fn pow(self, p: usize) -> Self;
}

impl PowExt for SignedLog {
    fn pow(self, p: usize) -> SignedLog {
        if p == 0 {
            return SignedLog::ONE;
        }
        let sign = if self.sign < 0 && p % 2 == 1 { -1 } else { self.sign.abs() };
        SignedLog::new(sign, self.ln * p as f64)
    }
}

/// σ-coordinates of a Σ^N set: exact where the set is a great subsphere or a
/// point, otherwise floating in log form.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSigma {
    pub n: usize,
    pub exact: Option<Vec<PiScalar>>,
    pub values: Vec<SignedLog>,
}

impl SetSigma {
    fn from_exact(n: usize, exact: Vec<PiScalar>) -> Self {
        let values = exact.iter().map(|c| SignedLog::from_f64(c.to_f64())).collect();
        SetSigma { n, exact: Some(exact), values }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

fn spike(n: usize, i: usize, value: i64) -> Vec<PiScalar> {
    let mut v = vec![PiScalar::zero(); n + 1];
    v[i] = PiScalar::from_int(value);
    v
}

const VOLUME_TOL: f64 = 1e-14;

/// `σ_i` for i ≥ 1 from the boundary profile:
/// `2 N^{−(N−i)/2} α_{N−i}^{−1} α_{i−1}^{−1} ∫_{∂A} e_{i−1}(κ)`.
fn boundary_sigmas(profile: &PrincipalCurvatureProfile, absolute: bool) -> Vec<SignedLog> {
    let n = profile.n;
    let e = profile.elementary_symmetric(absolute);
    let ln_n = (n as f64).ln();
    (1..=n)
        .map(|i| {
            let ln_scale = std::f64::consts::LN_2
                - (n - i) as f64 / 2.0 * ln_n
                - ln_alpha((n - i) as f64)
                - ln_alpha((i - 1) as f64)
                + profile.ln_area;
            e[i - 1].shift(ln_scale)
        })
        .collect()
}

/// `σ_0 = 2 vol(A)/vol(Σ^N)` by quadrature over the radial profile.
fn volume_sigma(set: &ModelSet) -> f64 {
    // integrand in normalized form: C cos^a(x) sin^b(x) on [0, θ]
    let (ln_c, a, b, theta) = match *set {
        ModelSet::GeodesicBall { n, r } => {
            (ln_alpha((n - 1) as f64) - ln_alpha(n as f64), 0usize, n - 1, r / (n as f64).sqrt())
        }
        ModelSet::SubsphereTube { n, d, s } => (
            ln_alpha((n - d) as f64) + ln_alpha((d - 1) as f64) - ln_alpha(n as f64),
            n - d,
            d - 1,
            s / (n as f64).sqrt(),
        ),
        _ => unreachable!("volume_sigma on a set without radial profile"),
    };
    let f = |x: f64| {
        let mut l = ln_c;
        if a > 0 {
            l += a as f64 * x.cos().ln();
        }
        if b > 0 {
            l += b as f64 * x.sin().ln();
        }
        l.exp()
    };
    2.0 * integrate(f, 0.0, theta, VOLUME_TOL).value
}

fn is_hemisphere(n: usize, r: f64) -> bool {
    (r / (n as f64).sqrt() - FRAC_PI_2).abs() < 1e-15
}

fn sigma_values_impl(set: &ModelSet, absolute: bool) -> Result<SetSigma> {
    set.validate()?;
    let Some(n) = set.sigma_dim() else {
        return Err(GkfError::UnsupportedSet(format!("{set} does not live in Σ^N")));
    };
    Ok(match *set {
        ModelSet::AmbientSphere { n } => SetSigma::from_exact(n, spike(n, 0, 2)),
        ModelSet::GreatSubsphere { n, j } => SetSigma::from_exact(n, spike(n, n - j, 2)),
        ModelSet::GeodesicBall { n, r: 0.0 } => SetSigma::from_exact(n, spike(n, n, 1)),
        ModelSet::SubsphereTube { n, d, s: 0.0 } => SetSigma::from_exact(n, spike(n, d, 2)),
        ModelSet::GeodesicBall { n, r } if is_hemisphere(n, r) => {
            let mut v = spike(n, 0, 1);
            v[1] = PiScalar::one();
            SetSigma::from_exact(n, v)
        }
        _ => {
            let profile = curvature_profile(set)?;
            let mut values = vec![SignedLog::from_f64(volume_sigma(set))];
            values.extend(boundary_sigmas(&profile, absolute));
            SetSigma { n, exact: None, values }
        }
    })
}

/// σ-coordinates of a Σ^N test set.
pub fn sigma_values(set: &ModelSet) -> Result<SetSigma> {
    sigma_values_impl(set, false)
}

/// σ-coordinates computed with absolute curvatures, `|σ|_i`; equal to σ on
/// convex sets and an upper bound on |σ_i| in general.
pub fn abs_sigma(set: &ModelSet) -> Result<Vec<f64>> {
    Ok(sigma_values_impl(set, true)?.to_f64())
}
