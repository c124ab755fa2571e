//! Replication engine: empirical laws of the scaled finite-sample statistics
//! and of the simulated limit vectors, Kolmogorov-Smirnov comparisons,
//! quantile tables, and the bias-convergence experiment.
//!
//! Replicate i always draws from the counter-derived stream (seed, domain,
//! size, i), so results are independent of scheduling and thread count.

use rayon::prelude::*;

use crate::ar1::{ols_estimate, scaled_statistics, simulate_ar1, Ar1Config, ScalingRegime};
use crate::asymptotics::{bias_target, BiasTarget};
use crate::error::{Error, Result};
use crate::fou::LimitSampler;
use crate::noise::{HurstIndex, NoiseSpec, PreparedNoise};
use crate::rng::{derive_stream, StreamDomain};

/// Full description of one replicated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub h: HurstIndex,
    pub gamma: f64,
    pub noise: NoiseSpec,
    /// finite sample size
    pub n: usize,
    /// limit grid resolution
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// The Hurst index is taken from the noise spec, which also fixes the
    /// normalization a_n = n^H and the scaling regime.
    pub fn new(noise: NoiseSpec, gamma: f64, n: usize, m: usize, reps: usize, seed: u64) -> Result<Self> {
        noise.validate()?;
        if n < 2 || m < 2 {
            return Err(Error::InvalidLength("need n >= 2 and m >= 2".into()));
        }
        if reps == 0 {
            return Err(Error::InvalidLength("need reps >= 1".into()));
        }
        Ok(Self {
            h: noise.implied_hurst(),
            gamma,
            noise,
            n,
            m,
            reps,
            seed,
        })
    }

    pub fn regime(&self) -> ScalingRegime {
        ScalingRegime::for_hurst(self.h)
    }
}

/// Which world a sample of draws came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleWorld {
    FiniteN,
    Limit,
}

/// Replicated draws of the statistic pair, in replicate order.
#[derive(Debug, Clone)]
pub struct EmpiricalSample {
    pub pairs: Vec<(f64, f64)>,
    pub config: ExperimentConfig,
    pub which: SampleWorld,
    /// degenerate replicates that were redrawn from a fresh stream
    pub resampled: usize,
}

impl EmpiricalSample {
    pub fn taus(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn bs(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

/// at most this many redraws per replicate before giving up
const MAX_RESAMPLE_ATTEMPTS: u64 = 64;

/// Draw `reps` scaled statistic pairs (tau, b) from the finite-sample world:
/// simulate the noise, run the near-unit-root recursion with
/// beta_n = 1 - gamma/n and a_n = n^H, and apply the regime scaling.
pub fn run_finite_sample(config: &ExperimentConfig) -> Result<EmpiricalSample> {
    let prepared = PreparedNoise::new(&config.noise, config.n)?;
    let ar_config = Ar1Config::from_gamma(config.gamma, config.n)?;
    let a_n = (config.n as f64).powf(config.h.value());
    let regime = config.regime();

    let results: Vec<Result<((f64, f64), u64)>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(config.seed, StreamDomain::FiniteSample, config.n as u64, i);
            let mut attempts = 0u64;
            loop {
                let eps = prepared.sample(&mut rng);
                let path = simulate_ar1(ar_config, &eps, a_n)?;
                match ols_estimate(&path) {
                    Ok(stats) => {
                        let pair = scaled_statistics(&stats, config.h, regime)?;
                        return Ok((pair, attempts));
                    }
                    Err(Error::DegeneratePath) if attempts < MAX_RESAMPLE_ATTEMPTS => {
                        attempts += 1;
                        rng = derive_stream(
                            config.seed,
                            StreamDomain::Resample,
                            config.n as u64,
                            i * MAX_RESAMPLE_ATTEMPTS + attempts,
                        );
                    }
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();

    let mut pairs = Vec::with_capacity(config.reps);
    let mut resampled = 0usize;
    for r in results {
        let (pair, attempts) = r?;
        pairs.push(pair);
        resampled += attempts as usize;
    }
    Ok(EmpiricalSample {
        pairs,
        config: config.clone(),
        which: SampleWorld::FiniteN,
        resampled,
    })
}

/// Draw `reps` limit vectors F diag(L, 1) Theta on the grid of resolution m,
/// with (L, sigma^2) computed from the noise spec.
pub fn run_limit(config: &ExperimentConfig) -> Result<EmpiricalSample> {
    let constants = config.noise.attraction_constants()?;
    let sampler = LimitSampler::new(config.h, config.gamma, constants.l, constants.sigma2, config.m)?;

    let results: Vec<Result<(f64, f64)>> = (0..config.reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(config.seed, StreamDomain::Limit, config.m as u64, i);
            Ok(sampler.sample(&mut rng)?.vector())
        })
        .collect();

    let pairs = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalSample {
        pairs,
        config: config.clone(),
        which: SampleWorld::Limit,
        resampled: 0,
    })
}

/// Two-sample Kolmogorov-Smirnov statistic: the sup distance between the two
/// empirical CDFs, by a merge scan of the sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs nonempty samples");
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d = 0.0f64;
    while i < xs.len() || j < ys.len() {
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] == x {
            i += 1;
        }
        while j < ys.len() && ys[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// One-sample Kolmogorov-Smirnov distance against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!sample.is_empty(), "KS needs a nonempty sample");
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Empirical quantile with linear interpolation between order statistics
/// (position (len - 1) p); probabilities at the ends clamp to the extreme
/// order statistics. `sorted` must be ascending.
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor().max(0.0) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Quantiles of both statistic coordinates, with reproducibility metadata.
#[derive(Debug, Clone)]
pub struct QuantileTable {
    pub probs: Vec<f64>,
    pub tau: Vec<f64>,
    pub b: Vec<f64>,
    pub h: HurstIndex,
    pub gamma: f64,
    pub regime: ScalingRegime,
    pub reps: usize,
    pub seed: u64,
}

pub fn quantile_table(sample: &EmpiricalSample, probs: &[f64]) -> Result<QuantileTable> {
    if sample.pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    if probs.is_empty() {
        return Err(Error::InvalidArgument("no probabilities requested".into()));
    }
    for w in probs.windows(2) {
        if w[0] > w[1] {
            return Err(Error::InvalidArgument("probabilities must be sorted".into()));
        }
    }
    if probs.iter().any(|&p| !(0.0 < p && p < 1.0)) {
        return Err(Error::InvalidArgument("probabilities must lie in (0, 1)".into()));
    }
    let mut taus = sample.taus();
    let mut bs = sample.bs();
    taus.sort_by(f64::total_cmp);
    bs.sort_by(f64::total_cmp);
    Ok(QuantileTable {
        probs: probs.to_vec(),
        tau: probs.iter().map(|&p| empirical_quantile(&taus, p)).collect(),
        b: probs.iter().map(|&p| empirical_quantile(&bs, p)).collect(),
        h: sample.config.h,
        gamma: sample.config.gamma,
        regime: sample.config.regime(),
        reps: sample.pairs.len(),
        seed: sample.config.seed,
    })
}

/// Monte Carlo estimate of n^{-(2H v 1)} E sum_t X_t eps_{t+1} under exact
/// fGn innovations, with its standard error and the limit target.
#[derive(Debug, Clone)]
pub struct BiasExperiment {
    pub estimate: f64,
    pub mc_stderr: f64,
    pub target: BiasTarget,
    pub n: usize,
    pub reps: usize,
}

impl BiasExperiment {
    pub fn z_score(&self) -> f64 {
        (self.estimate - self.target.value) / self.mc_stderr
    }
}

pub fn bias_experiment(
    h: HurstIndex,
    gamma: f64,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<BiasExperiment> {
    if n < 2 || reps < 2 {
        return Err(Error::InvalidLength("need n >= 2 and reps >= 2".into()));
    }
    let noise = NoiseSpec::ExactFgn { h };
    let prepared = PreparedNoise::new(&noise, n)?;
    let ar_config = Ar1Config::from_gamma(gamma, n)?;
    let exponent = (2.0 * h.value()).max(1.0);
    let scale = (n as f64).powf(-exponent);

    let draws: Vec<Result<f64>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(seed, StreamDomain::Bias, n as u64, i);
            let eps = prepared.sample(&mut rng);
            let path = simulate_ar1(ar_config, &eps, 1.0)?;
            let num = crate::ar1::compensated_sum((0..n).map(|t| path.x[t] * eps[t]));
            Ok(scale * num)
        })
        .collect();
    let draws = draws.into_iter().collect::<Result<Vec<f64>>>()?;

    // deterministic sequential reduction in replicate order
    let mean = draws.iter().sum::<f64>() / reps as f64;
    let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (reps - 1) as f64;
    Ok(BiasExperiment {
        estimate: mean,
        mc_stderr: (var / reps as f64).sqrt(),
        target: bias_target(h, gamma)?,
        n,
        reps,
    })
}
