//! Innovation sequences whose partial sums are attracted to (multiples of)
//! fractional Brownian motion, together with the attraction constants
//! L(H, alpha) and sigma^2 and empirical domain-of-attraction diagnostics.

mod fgn;
mod filters;

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quad;
use crate::special::gamma;

pub use fgn::{
    fgn_autocovariance, sample_fgn, CholeskyFgn, FgnSampler, CHOLESKY_MAX_LEN, EMBEDDING_CLIP_TOL,
};
pub use filters::{
    expand_arma_adaptive, expand_arma_filter, frac_coeff_square_sum, frac_integration_coeffs,
    frac_truncation, polynomial_roots, validate_arma, FracCoeffs, FRAC_TRUNCATION_CAP,
};

/// Hurst index of the attracting fractional Brownian motion, 0 < H < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurstIndex(f64);

/// Dependence regime implied by the Hurst index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// H < 1/2: negatively correlated increments
    Antipersistent,
    /// H = 1/2: the Wiener case
    Brownian,
    /// H > 1/2: long-range dependence
    LongMemory,
}

impl HurstIndex {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidHurst { value })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        if self.0 < 0.5 {
            Regime::Antipersistent
        } else if self.0 == 0.5 {
            Regime::Brownian
        } else {
            Regime::LongMemory
        }
    }

    pub fn is_brownian(self) -> bool {
        self.0 == 0.5
    }
}

impl std::fmt::Display for HurstIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Declarative description of an innovation process.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// i.i.d. standard normal innovations
    IidGaussian,
    /// short-memory linear filter eta_t = sum_k alpha_k xi_{t-k}
    LinearFilter { alpha: Vec<f64> },
    /// fractionally integrated filter eps_t = sum_j b_j(H) eta_{t-j}
    FracIntegrated { h: HurstIndex, alpha: Vec<f64> },
    /// ARFIMA(p, H - 1/2, q): the linear filter is theta(B)/phi(B)
    Arfima {
        h: HurstIndex,
        phi: Vec<f64>,
        theta: Vec<f64>,
    },
    /// exact fractional Gaussian noise, the increment sequence of fBm
    ExactFgn { h: HurstIndex },
}

/// Attraction constants of Proposition-style normalizations: the partial sums
/// scaled by n^H converge to L * B^H and the mean square of the noise is
/// sigma^2.
#[derive(Debug, Clone, Copy)]
pub struct AttractionConstants {
    pub l: f64,
    pub sigma2: f64,
}

impl NoiseSpec {
    /// Hurst index of the attracting fBm (1/2 for short-memory variants).
    pub fn implied_hurst(&self) -> HurstIndex {
        match self {
            NoiseSpec::IidGaussian | NoiseSpec::LinearFilter { .. } => HurstIndex(0.5),
            NoiseSpec::FracIntegrated { h, .. }
            | NoiseSpec::Arfima { h, .. }
            | NoiseSpec::ExactFgn { h } => *h,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseSpec::IidGaussian | NoiseSpec::ExactFgn { .. } => Ok(()),
            NoiseSpec::LinearFilter { alpha } | NoiseSpec::FracIntegrated { alpha, .. } => {
                if alpha.is_empty() {
                    Err(Error::InvalidArgument("filter coefficients are empty".into()))
                } else {
                    Ok(())
                }
            }
            NoiseSpec::Arfima { phi, theta, .. } => validate_arma(phi, theta),
        }
    }

    /// (L, sigma^2) for this spec. Exact fGn has both equal to one by
    /// self-similarity; filter variants evaluate the Gamma-function formula
    /// and the spectral integral.
    pub fn attraction_constants(&self) -> Result<AttractionConstants> {
        self.validate()?;
        match self {
            NoiseSpec::ExactFgn { .. } => Ok(AttractionConstants { l: 1.0, sigma2: 1.0 }),
            NoiseSpec::IidGaussian => {
                let h = HurstIndex(0.5);
                Ok(AttractionConstants {
                    l: scaling_constant_l(h, &[1.0])?,
                    sigma2: noise_variance_sigma2(h, &[1.0])?,
                })
            }
            NoiseSpec::LinearFilter { alpha } => {
                let h = HurstIndex(0.5);
                Ok(AttractionConstants {
                    l: scaling_constant_l(h, alpha)?,
                    sigma2: noise_variance_sigma2(h, alpha)?,
                })
            }
            NoiseSpec::FracIntegrated { h, alpha } => Ok(AttractionConstants {
                l: scaling_constant_l(*h, alpha)?,
                sigma2: noise_variance_sigma2(*h, alpha)?,
            }),
            NoiseSpec::Arfima { h, phi, theta } => {
                let at_one = |poly: &[f64]| poly.iter().sum::<f64>();
                let ratio = at_one(theta) / at_one(phi);
                if ratio == 0.0 {
                    return Err(Error::DegenerateFilter);
                }
                let l = l_prefactor(*h) * ratio.abs();
                let spectrum = arma_spectrum(phi.clone(), theta.clone());
                let sigma2 = sigma2_from_spectrum(*h, &spectrum)?;
                Ok(AttractionConstants { l, sigma2 })
            }
        }
    }
}

/// Truncation policy for the MA(infinity) expansion of fractionally
/// integrated noise: smallest J with relative squared-coefficient tail below
/// `rel_tol`, capped at `cap` (the achieved tail is reported either way).
#[derive(Debug, Clone, Copy)]
pub struct FracTruncation {
    pub rel_tol: f64,
    pub cap: usize,
}

impl Default for FracTruncation {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            cap: FRAC_TRUNCATION_CAP,
        }
    }
}

/// above this many multiply-adds per path the MA convolution goes through FFT
const DIRECT_CONV_LIMIT: usize = 1 << 22;

struct MaFft {
    size: usize,
    coeff_spectrum: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

enum PreparedKind {
    Iid,
    Ma {
        coeffs: Vec<f64>,
        fft: Option<MaFft>,
    },
    Fgn(FgnSampler),
}

/// A noise spec compiled for a fixed length: truncations resolved, embedding
/// spectra and FFT plans precomputed. Replicate loops should build one of
/// these and call `sample` per replicate.
pub struct PreparedNoise {
    n: usize,
    tail_rel: f64,
    kind: PreparedKind,
}

impl PreparedNoise {
    pub fn new(spec: &NoiseSpec, n: usize) -> Result<Self> {
        Self::with_truncation(spec, n, FracTruncation::default())
    }

    pub fn with_truncation(spec: &NoiseSpec, n: usize, trunc: FracTruncation) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("noise length must be >= 1".into()));
        }
        spec.validate()?;
        match spec {
            NoiseSpec::IidGaussian => Ok(Self {
                n,
                tail_rel: 0.0,
                kind: PreparedKind::Iid,
            }),
            NoiseSpec::ExactFgn { h } => Ok(Self {
                n,
                tail_rel: 0.0,
                kind: PreparedKind::Fgn(FgnSampler::new(*h, n)?),
            }),
            NoiseSpec::LinearFilter { alpha } => Ok(Self::make_ma(n, alpha.clone(), 0.0)),
            NoiseSpec::FracIntegrated { h, alpha } => {
                let (j, tail) = frac_truncation(*h, trunc.rel_tol, trunc.cap);
                let b = frac_integration_coeffs(*h, j);
                let coeffs = convolve(&b.b, alpha);
                Ok(Self::make_ma(n, coeffs, tail))
            }
            NoiseSpec::Arfima { h, phi, theta } => {
                let alpha = expand_arma_adaptive(phi, theta)?;
                let (j, tail) = frac_truncation(*h, trunc.rel_tol, trunc.cap);
                let b = frac_integration_coeffs(*h, j);
                let coeffs = convolve(&b.b, &alpha);
                Ok(Self::make_ma(n, coeffs, tail))
            }
        }
    }

    fn make_ma(n: usize, coeffs: Vec<f64>, tail_rel: f64) -> Self {
        let fft = if n * coeffs.len() > DIRECT_CONV_LIMIT {
            let full = n + 2 * (coeffs.len() - 1);
            let size = full.next_power_of_two();
            let mut planner = FftPlanner::new();
            let fwd = planner.plan_fft_forward(size);
            let inv = planner.plan_fft_inverse(size);
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            for (i, &c) in coeffs.iter().enumerate() {
                buf[i] = Complex64::new(c, 0.0);
            }
            fwd.process(&mut buf);
            Some(MaFft {
                size,
                coeff_spectrum: buf,
                fwd,
                inv,
            })
        } else {
            None
        };
        Self {
            n,
            tail_rel,
            kind: PreparedKind::Ma { coeffs, fft },
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Relative variance neglected by the MA truncation (0 where exact).
    pub fn truncation_tail_rel(&self) -> f64 {
        self.tail_rel
    }

    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Vec<f64> {
        match &self.kind {
            PreparedKind::Iid => (0..self.n).map(|_| rng.sample(StandardNormal)).collect(),
            PreparedKind::Fgn(sampler) => sampler.sample(rng),
            PreparedKind::Ma { coeffs, fft } => {
                let burn = coeffs.len() - 1;
                let xi: Vec<f64> = (0..self.n + burn)
                    .map(|_| rng.sample(StandardNormal))
                    .collect();
                match fft {
                    None => {
                        let mut out = vec![0.0; self.n];
                        for (i, o) in out.iter_mut().enumerate() {
                            let mut acc = 0.0;
                            for (j, &c) in coeffs.iter().enumerate() {
                                acc += c * xi[burn + i - j];
                            }
                            *o = acc;
                        }
                        out
                    }
                    Some(plan) => {
                        let mut buf = vec![Complex64::new(0.0, 0.0); plan.size];
                        for (i, &x) in xi.iter().enumerate() {
                            buf[i] = Complex64::new(x, 0.0);
                        }
                        plan.fwd.process(&mut buf);
                        for (b, c) in buf.iter_mut().zip(plan.coeff_spectrum.iter()) {
                            *b *= c;
                        }
                        plan.inv.process(&mut buf);
                        let scale = 1.0 / plan.size as f64;
                        (0..self.n).map(|i| buf[burn + i].re * scale).collect()
                    }
                }
            }
        }
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Draw one realization of the spec, warming filters with presample
/// innovations so the truncated series is stationary from the first output.
pub fn sample_noise(spec: &NoiseSpec, n: usize, rng: &mut ChaCha12Rng) -> Result<Vec<f64>> {
    Ok(PreparedNoise::new(spec, n)?.sample(rng))
}

fn l_prefactor(h: HurstIndex) -> f64 {
    let hv = h.value();
    (gamma(2.0 * hv + 1.0) * (std::f64::consts::PI * hv).sin()).powf(-0.5)
}

/// Attraction scale L(H, alpha) = (Gamma(2H+1) sin(pi H))^{-1/2} |sum_k alpha_k|.
pub fn scaling_constant_l(h: HurstIndex, alpha: &[f64]) -> Result<f64> {
    let sum: f64 = alpha.iter().sum();
    let abs_sum: f64 = alpha.iter().map(|a| a.abs()).sum();
    if sum == 0.0 || sum.abs() <= 1e-12 * abs_sum {
        return Err(Error::DegenerateFilter);
    }
    Ok(l_prefactor(h) * sum.abs())
}

fn alpha_spectrum(alpha: Vec<f64>) -> impl Fn(f64) -> f64 {
    move |lam: f64| {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &a) in alpha.iter().enumerate() {
            let phase = k as f64 * lam;
            re += a * phase.cos();
            im += a * phase.sin();
        }
        re * re + im * im
    }
}

fn arma_spectrum(phi: Vec<f64>, theta: Vec<f64>) -> impl Fn(f64) -> f64 {
    let num = alpha_spectrum(theta);
    let den = alpha_spectrum(phi);
    move |lam: f64| num(lam) / den(lam)
}

/// relative tolerance for the spectral variance integral
const SIGMA2_REL_TOL: f64 = 1e-8;

/// sin(lam/2) / (lam/2), continuous at zero.
fn sinc_half(lam: f64) -> f64 {
    if lam.abs() < 1e-8 {
        1.0 - lam * lam / 24.0
    } else {
        (0.5 * lam).sin() / (0.5 * lam)
    }
}

fn sigma2_from_spectrum(h: HurstIndex, spectrum: &impl Fn(f64) -> f64) -> Result<f64> {
    let hv = h.value();
    let expo = 1.0 - 2.0 * hv;
    let pi = std::f64::consts::PI;
    if hv <= 0.5 {
        // integrand vanishes (H < 1/2) or is flat (H = 1/2) at lambda = 0
        let f = |lam: f64| spectrum(lam) * (2.0 * (0.5 * lam).sin()).powf(expo) / pi;
        let r = quad::integrate(f, 0.0, pi, SIGMA2_REL_TOL, 400)?;
        return Ok(r.value);
    }
    // H > 1/2: integrable singularity lambda^{1-2H} at zero, removed on
    // [0, 1] by the substitution lambda = u^{1/(2-2H)}
    let p = 1.0 / (2.0 - 2.0 * hv);
    let near = |u: f64| {
        let lam = u.powf(p);
        p * spectrum(lam) * sinc_half(lam).powf(expo) / pi
    };
    let far = |lam: f64| spectrum(lam) * (2.0 * (0.5 * lam).sin()).powf(expo) / pi;
    let r_near = quad::integrate(near, 0.0, 1.0, SIGMA2_REL_TOL, 400)?;
    let r_far = quad::integrate(far, 1.0, pi, SIGMA2_REL_TOL, 400)?;
    Ok(r_near.value + r_far.value)
}

/// Noise variance sigma^2 = E(eps_0^H)^2 by the spectral formula
///
/// (2 pi)^{-1} int_{-pi}^{pi} |sum_k alpha_k e^{-ik lambda}|^2
///                            |1 - e^{-i lambda}|^{1-2H} d lambda.
pub fn noise_variance_sigma2(h: HurstIndex, alpha: &[f64]) -> Result<f64> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("filter coefficients are empty".into()));
    }
    let spectrum = alpha_spectrum(alpha.to_vec());
    sigma2_from_spectrum(h, &spectrum)
}

/// One dyadic-prefix row of the domain-of-attraction diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DaRow {
    pub len: usize,
    /// sum eps_k^2 / a_len^2 with a_len = len^scale_exponent; should vanish
    /// when the scale grows faster than n^{1/2}
    pub sum_sq_over_scale_sq: f64,
    /// (1/len) sum eps_k^2 - sigma^2; should vanish under ergodicity
    pub mean_sq_minus_sigma2: f64,
}

/// Empirical check of the partial-sum square conditions along dyadic
/// prefixes of a realized path, using the scale family a_n = n^scale_exponent.
pub fn da_diagnostics(eps: &[f64], scale_exponent: f64, sigma2: f64) -> Vec<DaRow> {
    assert!(!eps.is_empty(), "diagnostics need a nonempty path");
    let mut rows = Vec::new();
    let mut cum = 0.0;
    let mut next = 1usize;
    for (i, &e) in eps.iter().enumerate() {
        cum += e * e;
        let len = i + 1;
        if len == next || len == eps.len() {
            let scale_sq = (len as f64).powf(2.0 * scale_exponent);
            rows.push(DaRow {
                len,
                sum_sq_over_scale_sq: cum / scale_sq,
                mean_sq_minus_sigma2: cum / len as f64 - sigma2,
            });
            while next <= len {
                next *= 2;
            }
        }
    }
    rows
}
