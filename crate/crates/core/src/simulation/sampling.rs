use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{GkfError, Result};

/// Law of the random linear map F : R^{n+1} → R^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Law {
    /// i.i.d. standard Gaussian entries
    PiInfinity,
    /// √N times the top d×(n+1) block of a Haar-random element of O(N+1)
    PiN(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapSample {
    /// d × (n+1)
    pub entries: DMatrix<f64>,
    pub origin: Law,
}

impl LinearMapSample {
    pub fn d(&self) -> usize {
        self.entries.nrows()
    }

    /// n, where the domain is R^{n+1}.
    pub fn n(&self) -> usize {
        self.entries.ncols() - 1
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.d()).map(|i| (0..x.len()).map(|j| self.entries[(i, j)] * x[j]).sum()).collect()
    }

    /// Row `i` as a vector in R^{n+1}.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i).iter().copied().collect()
    }
}

/// Fills the first `rows` rows of a `total_rows × cols` Gaussian matrix in
/// row-major order, then the rest, so the top block of a Π_N draw matches the
/// Π_∞ draw from the same generator state.
fn gaussian_rows<R: Rng + ?Sized>(rng: &mut R, total_rows: usize, cols: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(total_rows, cols);
    for i in 0..total_rows {
        for j in 0..cols {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    g
}

pub fn sample_pi_infinity<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<LinearMapSample> {
    if d == 0 {
        return Err(GkfError::InvalidArgument("target dimension must be at least 1".into()));
    }
    Ok(LinearMapSample { entries: gaussian_rows(rng, d, n + 1), origin: Law::PiInfinity })
}

/// Uniform orthonormal (n+1)-frame in R^{N+1}: QR of a Gaussian matrix with
/// the signs fixed so that R has a positive diagonal.
pub fn stiefel_frame<R: Rng + ?Sized>(big_n: usize, n: usize, rng: &mut R) -> Result<DMatrix<f64>> {
    if n > big_n {
        return Err(GkfError::DimensionMismatch { expected: big_n, got: n });
    }
    Ok(orthonormalize(gaussian_rows(rng, big_n + 1, n + 1)))
}

fn orthonormalize(g: DMatrix<f64>) -> DMatrix<f64> {
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn sample_pi_n<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    big_n: usize,
    rng: &mut R,
) -> Result<LinearMapSample> {
    if d == 0 {
        return Err(GkfError::InvalidArgument("target dimension must be at least 1".into()));
    }
    if big_n < n.max(d) {
        return Err(GkfError::DimensionMismatch { expected: n.max(d), got: big_n });
    }
    let frame = orthonormalize(gaussian_rows(rng, big_n + 1, n + 1));
    let scale = (big_n as f64).sqrt();
    let entries = frame.rows(0, d).map(|x| x * scale);
    Ok(LinearMapSample { entries, origin: Law::PiN(big_n) })
}

/// Draws F under the given law.
pub fn sample_law<R: Rng + ?Sized>(law: Law, n: usize, d: usize, rng: &mut R) -> Result<LinearMapSample> {
    match law {
        Law::PiInfinity => sample_pi_infinity(n, d, rng),
        Law::PiN(big_n) => sample_pi_n(n, d, big_n, rng),
    }
}

/// Uniform point on the unit sphere S^{dim} ⊂ R^{dim+1}.
pub fn uniform_sphere<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..=dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::RngStream;

    #[test]
    fn frame_is_orthonormal() {
        let mut rng = RngStream::new(1, 0).rng();
        let q = stiefel_frame(30, 4, &mut rng).unwrap();
        let gram = q.transpose() * &q;
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pi_n_top_block_tracks_pi_infinity() {
        let s = RngStream::new(5, 5);
        let inf = sample_pi_infinity(2, 2, &mut s.rng()).unwrap();
        let fin = sample_pi_n(2, 2, 100_000, &mut s.rng()).unwrap();
        let diff = (&inf.entries - &fin.entries).abs().max();
        assert!(diff < 0.05, "{diff}");
        assert!(sample_pi_n(3, 1, 2, &mut s.rng()).is_err());
    }
}
