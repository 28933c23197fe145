use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{GkfError, Result};
use crate::gaussian_volumes::GaussSet;
use crate::lk_algebra::ModelSet;

use super::sampling::{uniform_sphere, LinearMapSample};

fn sphere_chi(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        2
    } else {
        0
    }
}

/// χ of the intersection of two closed caps of S^n with angular radii
/// `t1`, `t2` ∈ [0, π) whose centers are `delta` apart.
///
/// A cap wider than a hemisphere is the complement of an open cap about the
/// antipode, which reduces every case to containment tests between caps.
pub fn cap_pair_chi(n: usize, t1: f64, t2: f64, delta: f64) -> i64 {
    let small1 = t1 <= FRAC_PI_2;
    let small2 = t2 <= FRAC_PI_2;
    match (small1, small2) {
        (true, true) => (delta <= t1 + t2) as i64,
        (true, false) => cap_minus_cap(n, t1, PI - t2, PI - delta),
        (false, true) => cap_minus_cap(n, t2, PI - t1, PI - delta),
        (false, false) => {
            // complement of two open caps about the antipodes; disjoint holes
            // leave S^n minus two disks
            let (h1, h2) = (PI - t1, PI - t2);
            if delta >= h1 + h2 {
                2 - sphere_chi(n)
            } else {
                1
            }
        }
    }
}

/// χ of cap(a, t) with the open cap(b, h) removed, where `delta` = ∠(a, b)
/// and both radii are at most π/2.
fn cap_minus_cap(n: usize, t: f64, h: f64, delta: f64) -> i64 {
    if delta >= t + h {
        1
    } else if delta + t <= h {
        0
    } else if delta + h <= t {
        // a hole strictly inside: homotopic to S^{n−1}
        if n == 0 {
            0
        } else {
            sphere_chi(n - 1)
        }
    } else {
        1
    }
}

fn angle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos()
}

/// The cap `{x ∈ S^n : ⟨x, ξ⟩ ≥ u}`: `None` if empty, `Some(None)` if it is
/// the whole sphere, else its angular radius.
fn linear_cap(xi: &[f64], u: f64) -> Option<Option<f64>> {
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return if u <= 0.0 { Some(None) } else { None };
    }
    let c = u / norm;
    if c > 1.0 {
        None
    } else if c <= -1.0 {
        Some(None)
    } else {
        Some(Some(c.acos()))
    }
}

/// χ of `{x ∈ S^n : x' M x ≤ ρ²}` for `M = F'F`, by Morse–Bott counting over
/// the critical sets of the quadratic form: the null space contributes a
/// minimum sphere S^{z−1}, and each positive eigenvalue λ_i (ascending) below
/// the level contributes a pair of points of index z + i − 1.
pub fn quadratic_sublevel_chi(f: &DMatrix<f64>, rho: f64) -> i64 {
    let d = f.nrows();
    let dim = f.ncols();
    let (eigs, z) = if d <= dim {
        (SymmetricEigen::new(f * f.transpose()).eigenvalues, dim - d)
    } else {
        (SymmetricEigen::new(f.transpose() * f).eigenvalues, 0)
    };
    let mut lambda: Vec<f64> = eigs.iter().copied().collect();
    lambda.sort_by(f64::total_cmp);
    let level = rho * rho;
    let mut chi = if z > 0 { 1 + if (z - 1) % 2 == 0 { 1 } else { -1 } } else { 0 };
    for (i, l) in lambda.iter().enumerate() {
        if *l <= level {
            let index = z + i;
            chi += if index % 2 == 0 { 2 } else { -2 };
        }
    }
    chi
}

fn restrict_columns(f: &LinearMapSample, cols: usize) -> DMatrix<f64> {
    f.entries.columns(0, cols).into_owned()
}

/// Euler characteristic of `A ∩ F^{−1}D` for the supported pairs.
pub fn chi_intersection(a: &ModelSet, d: &GaussSet, f: &LinearMapSample) -> Result<i64> {
    a.validate()?;
    d.validate()?;
    if f.d() != d.dim() {
        return Err(GkfError::DimensionMismatch { expected: d.dim(), got: f.d() });
    }
    let n = a.unit_dim().ok_or_else(|| GkfError::UnsupportedSet(format!("{a} is not a unit-sphere set")))?;
    if f.n() != n {
        return Err(GkfError::DimensionMismatch { expected: n, got: f.n() });
    }
    // a great subsphere behaves like the full sphere on its own coordinates
    let (sphere_dim, cols) = match *a {
        ModelSet::UnitGreatSubsphere { m, .. } => (m, m + 1),
        _ => (n, n + 1),
    };
    let unsupported = || Err(GkfError::UnsupportedCombination(format!("χ of {a} ∩ F⁻¹({d})")));
    match (*a, *d) {
        (ModelSet::UnitCap { .. }, GaussSet::FullSpace { .. }) => Ok(1),
        (_, GaussSet::FullSpace { .. }) => Ok(sphere_chi(sphere_dim)),
        (ModelSet::UnitCap { theta, .. }, GaussSet::HalfSpace { u, .. }) => {
            let xi = f.row(0);
            match linear_cap(&xi, u) {
                None => Ok(0),
                Some(None) => Ok(1),
                Some(Some(beta)) => {
                    let mut pole = vec![0.0; n + 1];
                    pole[0] = 1.0;
                    Ok(cap_pair_chi(n, theta, beta, angle(&pole, &xi)))
                }
            }
        }
        (_, GaussSet::HalfSpace { u, .. }) => {
            let xi = &f.row(0)[..cols];
            Ok(match linear_cap(xi, u) {
                None => 0,
                Some(None) => sphere_chi(sphere_dim),
                Some(Some(_)) => 1,
            })
        }
        (ModelSet::UnitCap { .. }, _) => unsupported(),
        (_, GaussSet::CenteredBall { rho, .. }) => {
            Ok(quadratic_sublevel_chi(&restrict_columns(f, cols), rho))
        }
        (_, GaussSet::Origin { .. }) => Ok(quadratic_sublevel_chi(&restrict_columns(f, cols), 0.0)),
    }
}

/// Uniform point on a unit-sphere model set, in R^{n+1}. Caps are centered
/// at the first coordinate vector.
pub fn sample_on<R: Rng + ?Sized>(a: &ModelSet, rng: &mut R) -> Result<Vec<f64>> {
    match *a {
        ModelSet::UnitSphere { n } => Ok(uniform_sphere(n, rng)),
        ModelSet::UnitGreatSubsphere { n, m } => {
            let mut x = uniform_sphere(m, rng);
            x.resize(n + 1, 0.0);
            Ok(x)
        }
        ModelSet::UnitCap { n, theta } => {
            // polar angle has density ∝ sin^{n−1}; sample by rejection
            let peak = theta.min(FRAC_PI_2).sin().powi(n as i32 - 1);
            let phi = loop {
                let p = rng.random::<f64>() * theta;
                if n == 1 || rng.random::<f64>() * peak <= p.sin().powi(n as i32 - 1) {
                    break p;
                }
            };
            let dir = if n == 1 {
                vec![if rng.random::<bool>() { 1.0 } else { -1.0 }]
            } else {
                uniform_sphere(n - 1, rng)
            };
            let mut x = Vec::with_capacity(n + 1);
            x.push(phi.cos());
            x.extend(dir.into_iter().map(|v| v * phi.sin()));
            Ok(x)
        }
        _ => Err(GkfError::UnsupportedSet(format!("{a} is not a unit-sphere set"))),
    }
}

/// Hit-or-miss estimate of `vol(A ∩ F^{−1}D) / vol(A)`.
pub fn volume_fraction<R: Rng + ?Sized>(
    a: &ModelSet,
    d: &GaussSet,
    f: &LinearMapSample,
    rng: &mut R,
    n_points: usize,
) -> Result<f64> {
    a.validate()?;
    d.validate()?;
    if f.d() != d.dim() {
        return Err(GkfError::DimensionMismatch { expected: d.dim(), got: f.d() });
    }
    if let GaussSet::FullSpace { .. } = d {
        return Ok(1.0);
    }
    if n_points == 0 {
        return Err(GkfError::InvalidArgument("need at least one point".into()));
    }
    let mut hits = 0usize;
    for _ in 0..n_points {
        let x = sample_on(a, rng)?;
        if d.contains(&f.apply(&x)) {
            hits += 1;
        }
    }
    Ok(hits as f64 / n_points as f64)
}
