//! The nearly unstable AR(1) recursion, its least-squares statistics, and the
//! exact numerator decomposition used throughout the limit analysis.

use crate::error::{Error, Result};
use crate::noise::HurstIndex;

/// Parameters of one simulated autoregression X_t = beta X_{t-1} + eps_t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Config {
    pub n: usize,
    /// local-to-unity parameter; informational when beta is set directly
    pub gamma: f64,
    pub beta: f64,
    pub x0: f64,
}

impl Ar1Config {
    /// Near-unit-root parametrization beta = 1 - gamma/n, evaluated in one
    /// rounding so the hypothesis n (1 - beta) = gamma holds as written.
    pub fn from_gamma(gamma: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("sample size must be >= 1".into()));
        }
        Ok(Self {
            n,
            gamma,
            beta: 1.0 - gamma / n as f64,
            x0: 0.0,
        })
    }

    /// Explicit AR coefficient (gamma recorded as n (1 - beta)).
    pub fn with_beta(beta: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("sample size must be >= 1".into()));
        }
        Ok(Self {
            n,
            gamma: n as f64 * (1.0 - beta),
            beta,
            x0: 0.0,
        })
    }

    pub fn with_initial_value(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }
}

/// A realized path X_0..X_n with the innovations that drove it and the
/// normalization scale a_n used by the scaled statistics.
#[derive(Debug, Clone)]
pub struct SamplePath {
    pub x: Vec<f64>,
    pub eps: Vec<f64>,
    pub config: Ar1Config,
    pub a_n: f64,
}

/// Run the recursion. The returned path satisfies
/// X_t = beta X_{t-1} + eps_t exactly as evaluated, and matches the closed
/// form X_t = beta^t X_0 + sum_k beta^{t-k} eps_k.
pub fn simulate_ar1(config: Ar1Config, eps: &[f64], a_n: f64) -> Result<SamplePath> {
    if eps.len() != config.n {
        return Err(Error::InvalidLength(format!(
            "expected {} innovations, got {}",
            config.n,
            eps.len()
        )));
    }
    let mut x = Vec::with_capacity(config.n + 1);
    x.push(config.x0);
    for (t, &e) in eps.iter().enumerate() {
        x.push(config.beta * x[t] + e);
    }
    Ok(SamplePath {
        x,
        eps: eps.to_vec(),
        config,
        a_n,
    })
}

/// Least-squares summary of one path.
///
/// `b_hat` is the OLS slope; `tau_hat = num / sqrt(ssq)` is the t-statistic
/// against the true coefficient (the paper writes the same estimator as both
/// beta-hat and b-hat; we use one name). T1..T4 are the a_n-normalized
/// building blocks
///
/// T1 = num / a_n^2,  T2 = ssq / (n a_n^2),  T3 = X_n / a_n,
/// T4 = sum eps_t^2 / a_n^2.
#[derive(Debug, Clone, Copy)]
pub struct OlsStatistics {
    pub b_hat: f64,
    pub tau_hat: f64,
    /// sum_{t=0}^{n-1} X_t^2
    pub ssq: f64,
    /// sum_{t=0}^{n-1} X_t eps_{t+1}
    pub num: f64,
    /// sum_{t=1}^{n} eps_t^2
    pub eps_sq: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub n: usize,
    pub beta: f64,
    pub a_n: f64,
}

/// Neumaier compensated accumulator; near-unit-root sums cancel heavily.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of f64.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Compute the least-squares statistics of a path.
pub fn ols_estimate(path: &SamplePath) -> Result<OlsStatistics> {
    let n = path.config.n;
    let x = &path.x;
    let eps = &path.eps;
    let ssq = compensated_sum((0..n).map(|t| x[t] * x[t]));
    if ssq <= 0.0 {
        return Err(Error::DegeneratePath);
    }
    let num = compensated_sum((0..n).map(|t| x[t] * eps[t]));
    let cross = compensated_sum((0..n).map(|t| x[t] * x[t + 1]));
    let eps_sq = compensated_sum(eps.iter().map(|e| e * e));

    let a_n = path.a_n;
    let a_sq = a_n * a_n;
    Ok(OlsStatistics {
        b_hat: cross / ssq,
        tau_hat: num / ssq.sqrt(),
        ssq,
        num,
        eps_sq,
        t1: num / a_sq,
        t2: ssq / (n as f64 * a_sq),
        t3: x[n] / a_n,
        t4: eps_sq / a_sq,
        n,
        beta: path.config.beta,
        a_n,
    })
}

/// Residual of the exact numerator decomposition obtained by squaring and
/// summing the recursion (requires X_0 = 0 and beta > 0):
///
/// sum X_t eps_{t+1} = (1 - beta^2)/(2 beta) sum X_t^2
///                     + X_n^2/(2 beta) - sum eps_t^2/(2 beta).
pub fn decomposition_check(path: &SamplePath) -> Result<f64> {
    let beta = path.config.beta;
    if beta <= 0.0 {
        return Err(Error::UnsupportedCoefficient { beta });
    }
    if path.config.x0 != 0.0 {
        return Err(Error::NonzeroInitialValue { x0: path.config.x0 });
    }
    let n = path.config.n;
    let x = &path.x;
    let ssq = compensated_sum((0..n).map(|t| x[t] * x[t]));
    let num = compensated_sum((0..n).map(|t| x[t] * path.eps[t]));
    let eps_sq = compensated_sum(path.eps.iter().map(|e| e * e));
    let rhs = (1.0 - beta * beta) / (2.0 * beta) * ssq + x[n] * x[n] / (2.0 * beta)
        - eps_sq / (2.0 * beta);
    Ok((num - rhs).abs())
}

/// Scaling regime of the limit theory, set by the Hurst index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingRegime {
    /// H > 1/2: partial-sum scale grows faster than n^{1/2}
    Super,
    /// H = 1/2
    Boundary,
    /// H < 1/2
    Sub,
}

impl ScalingRegime {
    pub fn for_hurst(h: HurstIndex) -> Self {
        let v = h.value();
        if v > 0.5 {
            ScalingRegime::Super
        } else if v == 0.5 {
            ScalingRegime::Boundary
        } else {
            ScalingRegime::Sub
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalingRegime::Super => "super",
            ScalingRegime::Boundary => "boundary",
            ScalingRegime::Sub => "sub",
        }
    }
}

/// Regime-dependent scaling of (tau_hat, b_hat - beta) to the pair whose law
/// converges:
///
/// - H > 1/2: (n^{1/2-H} tau, n (b-hat - beta))
/// - H = 1/2: (tau, n (b-hat - beta))
/// - H < 1/2: (n^{H-1/2} tau, n^{2H} (b-hat - beta))
///
/// Statistics must have been computed with a_n = n^H.
pub fn scaled_statistics(
    stats: &OlsStatistics,
    h: HurstIndex,
    regime: ScalingRegime,
) -> Result<(f64, f64)> {
    if regime != ScalingRegime::for_hurst(h) {
        return Err(Error::RegimeMismatch {
            regime: regime.name(),
            h: h.value(),
        });
    }
    let n = stats.n as f64;
    let hv = h.value();
    let b_gap = stats.b_hat - stats.beta;
    Ok(match regime {
        ScalingRegime::Super => (n.powf(0.5 - hv) * stats.tau_hat, n * b_gap),
        ScalingRegime::Boundary => (stats.tau_hat, n * b_gap),
        ScalingRegime::Sub => (n.powf(hv - 0.5) * stats.tau_hat, n.powf(2.0 * hv) * b_gap),
    })
}
