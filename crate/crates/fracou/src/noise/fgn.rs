//! Exact fractional Gaussian noise sampling.
//!
//! The workhorse is circulant embedding of the Toeplitz covariance (Davies-
//! Harte): O(n log n) per path and exact in law because the fGn embedding has
//! nonnegative circulant eigenvalues for every H in (0, 1). A dense Cholesky
//! sampler is kept alongside as an algorithmically independent oracle for
//! tests.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::noise::HurstIndex;

/// Autocovariance of fractional Gaussian noise at integer lag `k`:
///
/// rho(k) = ((k+1)^{2H} - 2 k^{2H} + (k-1)^{2H}) / 2,
///
/// the increment covariance of fractional Brownian motion at unit spacing.
/// rho(0) = 1 for every H.
pub fn fgn_autocovariance(h: HurstIndex, k: usize) -> f64 {
    let two_h = 2.0 * h.value();
    if k == 0 {
        return 1.0;
    }
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).powf(two_h))
}

/// Relative eigenvalue clipping tolerance for the circulant embedding.
/// Numerical eigenvalues in [-TOL * lambda_max, 0) are clipped to zero;
/// anything more negative is reported as a degenerate embedding.
pub const EMBEDDING_CLIP_TOL: f64 = 1e-10;

/// Reusable circulant-embedding sampler for fGn of a fixed (H, n).
///
/// Construction computes the embedding spectrum once; `sample` then costs one
/// FFT per path. For H = 1/2 the covariance is the identity and sampling
/// reduces to the raw i.i.d. normal stream.
pub struct FgnSampler {
    h: HurstIndex,
    n: usize,
    /// half-size of the embedding (m = n); full circulant size is 2m
    m: usize,
    /// clipped eigenvalues, length 2m (empty in the H = 1/2 fast path)
    lambda: Vec<f64>,
    /// synthesis amplitudes sqrt(lambda_k / (2M)) (endpoints sqrt(lambda/M))
    weights: Vec<f64>,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl FgnSampler {
    pub fn new(h: HurstIndex, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("fGn sample length must be >= 1".into()));
        }
        if h.is_brownian() {
            return Ok(Self {
                h,
                n,
                m: 0,
                lambda: Vec::new(),
                weights: Vec::new(),
                fft: None,
            });
        }

        let m = n;
        let big_m = 2 * m;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(big_m);

        // first row of the circulant: rho(0..m) then mirrored rho(m-1..1)
        let mut buf: Vec<Complex64> = Vec::with_capacity(big_m);
        for k in 0..=m {
            buf.push(Complex64::new(fgn_autocovariance(h, k), 0.0));
        }
        for k in (1..m).rev() {
            buf.push(Complex64::new(fgn_autocovariance(h, k), 0.0));
        }
        fft.process(&mut buf);

        let lambda_max = buf.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        let threshold = EMBEDDING_CLIP_TOL * lambda_max;
        let mut lambda = Vec::with_capacity(big_m);
        for z in &buf {
            if z.re < -threshold {
                return Err(Error::DegenerateEmbedding {
                    eigenvalue: z.re,
                    tolerance: EMBEDDING_CLIP_TOL,
                    threshold,
                });
            }
            lambda.push(z.re.max(0.0));
        }

        let scale = big_m as f64;
        let mut weights = vec![0.0; big_m];
        weights[0] = (lambda[0] / scale).sqrt();
        weights[m] = (lambda[m] / scale).sqrt();
        for k in 1..m {
            let w = (lambda[k] / (2.0 * scale)).sqrt();
            weights[k] = w;
            weights[big_m - k] = (lambda[big_m - k] / (2.0 * scale)).sqrt();
        }

        Ok(Self {
            h,
            n,
            m,
            lambda,
            weights,
            fft: Some(fft),
        })
    }

    pub fn hurst(&self) -> HurstIndex {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Draw one fGn path of length n.
    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Vec<f64> {
        if self.h.is_brownian() {
            // diagonal covariance: the raw normal stream
            return (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
        }
        let m = self.m;
        let big_m = 2 * m;
        let mut spec = vec![Complex64::new(0.0, 0.0); big_m];
        let g0: f64 = rng.sample(StandardNormal);
        spec[0] = Complex64::new(self.weights[0] * g0, 0.0);
        for k in 1..m {
            let u: f64 = rng.sample(StandardNormal);
            let v: f64 = rng.sample(StandardNormal);
            spec[k] = Complex64::new(self.weights[k] * u, self.weights[k] * v);
            spec[big_m - k] = Complex64::new(self.weights[big_m - k] * u, -self.weights[big_m - k] * v);
        }
        let gm: f64 = rng.sample(StandardNormal);
        spec[m] = Complex64::new(self.weights[m] * gm, 0.0);

        self.fft
            .as_ref()
            .expect("fft plan exists for non-Brownian H")
            .process(&mut spec);
        spec.iter().take(self.n).map(|z| z.re).collect()
    }

    /// Covariance row actually realized by the clipped spectrum, recovered by
    /// the inverse transform. Comparing this against `fgn_autocovariance`
    /// bounds the law error introduced by eigenvalue clipping.
    pub fn implied_covariance(&self) -> Vec<f64> {
        if self.h.is_brownian() {
            let mut row = vec![0.0; self.n.min(2)];
            row[0] = 1.0;
            return row;
        }
        let big_m = 2 * self.m;
        let mut buf: Vec<Complex64> = self
            .lambda
            .iter()
            .map(|&l| Complex64::new(l / big_m as f64, 0.0))
            .collect();
        // inverse DFT of a real symmetric spectrum via the forward plan
        self.fft.as_ref().unwrap().process(&mut buf);
        buf.iter().take(self.m + 1).map(|z| z.re).collect()
    }
}

/// One-shot circulant-embedding draw; see `FgnSampler` for the reusable form.
pub fn sample_fgn(h: HurstIndex, n: usize, rng: &mut ChaCha12Rng) -> Result<Vec<f64>> {
    Ok(FgnSampler::new(h, n)?.sample(rng))
}

/// Maximum length accepted by the dense Cholesky oracle.
pub const CHOLESKY_MAX_LEN: usize = 4096;

/// Dense Cholesky factor of the fGn covariance, an O(n^3)/O(n^2) sampler kept
/// as an independent cross-check of the circulant path.
pub struct CholeskyFgn {
    n: usize,
    /// packed row-major lower triangle
    factor: Vec<f64>,
}

impl CholeskyFgn {
    pub fn new(h: HurstIndex, n: usize) -> Result<Self> {
        if n == 0 || n > CHOLESKY_MAX_LEN {
            return Err(Error::InvalidLength(format!(
                "Cholesky sampler supports 1..={CHOLESKY_MAX_LEN}, got {n}"
            )));
        }
        let rho: Vec<f64> = (0..n).map(|k| fgn_autocovariance(h, k)).collect();
        let mut l = vec![0.0; n * (n + 1) / 2];
        let idx = |i: usize, j: usize| i * (i + 1) / 2 + j;
        for i in 0..n {
            for j in 0..=i {
                let mut s = rho[i - j];
                for k in 0..j {
                    s -= l[idx(i, k)] * l[idx(j, k)];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::InvalidLength(format!(
                            "covariance lost positive definiteness at pivot {i}"
                        )));
                    }
                    l[idx(i, j)] = s.sqrt();
                } else {
                    l[idx(i, j)] = s / l[idx(j, j)];
                }
            }
        }
        Ok(Self { n, factor: l })
    }

    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Vec<f64> {
        let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
        let mut x = vec![0.0; self.n];
        let mut row = 0usize;
        for (i, out) in x.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &zj) in z.iter().take(i + 1).enumerate() {
                s += self.factor[row + j] * zj;
            }
            *out = s;
            row += i + 1;
        }
        x
    }
}
