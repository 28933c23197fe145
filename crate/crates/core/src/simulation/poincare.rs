use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{GkfError, Result};
use crate::gaussian_volumes::{chi_cdf, normal_cdf};

use super::estimate::{Gate, McConfig, McReport};
use super::rng::{map_chunks, Moments, RngStream};

/// First d coordinates of a uniform point on Σ^N.
///
/// With g ∈ R^d and an independent χ²_{N+1−d} variable q standing in for the
/// remaining coordinates, `√N g / √(|g|² + q)` has the exact law.
pub fn sample_projection<R: Rng + ?Sized>(
    big_n: usize,
    d: usize,
    chi2: &ChiSquared<f64>,
    rng: &mut R,
) -> Vec<f64> {
    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let q = chi2.sample(rng);
    let scale = (big_n as f64).sqrt() / (g.iter().map(|x| x * x).sum::<f64>() + q).sqrt();
    g.into_iter().map(|x| x * scale).collect()
}

/// One-sample Kolmogorov–Smirnov distance of `samples` from `cdf`. Sorts in
/// place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareReport {
    pub big_n: usize,
    pub d: usize,
    /// KS distance of the first coordinate (d = 1) or of the norm (d > 1)
    /// from its Gaussian limit
    pub ks: f64,
    /// `E |x|²` against its exact value `dN/(N+1)`
    pub second_moment: McReport,
}

/// Projection of the uniform law on Σ^N onto R^d, compared with the
/// standard Gaussian.
pub fn poincare_test(
    big_n: usize,
    d: usize,
    n_samples: usize,
    stream: RngStream,
    workers: usize,
) -> Result<PoincareReport> {
    if d == 0 || d > big_n {
        return Err(GkfError::InvalidArgument(format!("need 1 ≤ d ≤ N, got d={d}, N={big_n}")));
    }
    if n_samples < 2 || workers == 0 {
        return Err(GkfError::InvalidArgument("need at least two samples and one worker".into()));
    }
    let chi2 =
        ChiSquared::new((big_n + 1 - d) as f64).map_err(|e| GkfError::InvalidArgument(e.to_string()))?;
    let chunks = map_chunks(n_samples, stream, workers, |rng, count| {
        let mut stats = Vec::with_capacity(count);
        let mut m = Moments::default();
        for _ in 0..count {
            let x = sample_projection(big_n, d, &chi2, rng);
            let sq: f64 = x.iter().map(|v| v * v).sum();
            m.push(sq);
            stats.push(if d == 1 { x[0] } else { sq.sqrt() });
        }
        (stats, m)
    });
    let mut stats = Vec::with_capacity(n_samples);
    let mut moments = Moments::default();
    for (s, m) in chunks {
        stats.extend(s);
        moments.merge(&m);
    }
    let ks = if d == 1 {
        ks_statistic(&mut stats, normal_cdf)
    } else {
        ks_statistic(&mut stats, |r| chi_cdf(d, r))
    };
    let config = McConfig { n_samples, stream, workers, points_per_draw: 1 };
    let prediction = (d * big_n) as f64 / (big_n + 1) as f64;
    let estimate = moments.mean();
    let stderr = moments.stderr();
    let z = (estimate - prediction) / stderr;
    let second_moment = McReport {
        estimate,
        stderr,
        n_samples,
        prediction,
        z_score: z,
        seed: config.stream.seed,
        stream_id: config.stream.stream_id,
        status: Gate::from_z(z),
    };
    Ok(PoincareReport { big_n, d, ks, second_moment })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let mut xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let ks = ks_statistic(&mut xs, |x| x.clamp(0.0, 1.0));
        assert!((ks - 0.0005).abs() < 1e-12);
    }

    #[test]
    fn projection_lies_on_sphere_scale() {
        let chi2 = ChiSquared::new(3.0).unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..100 {
            let x = sample_projection(3, 1, &chi2, &mut rng);
            assert!(x[0].abs() <= 3f64.sqrt());
        }
    }

    #[test]
    fn moment_matches() {
        let r = poincare_test(50, 2, 20_000, RngStream::new(1, 3), 1).unwrap();
        assert!(r.second_moment.z_score.abs() < 4.0, "{r:?}");
        assert!(r.ks < 0.03);
    }
}
