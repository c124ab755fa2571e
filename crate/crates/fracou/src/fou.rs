//! Discretized limit world: Ornstein-Uhlenbeck transforms of driver paths,
//! the Theta functional, pathwise stochastic-integral Riemann sums, and the
//! regime-dependent limit scalar F.
//!
//! Everything lives on the uniform grid t_i = i/m over [0, 1]. Drivers are
//! realized as m^{-H}-scaled cumulative sums of exact fGn, which is an
//! exact-law skeleton of fractional Brownian motion by self-similarity.
//!
//! Any gamma is accepted, but strongly negative values inflate the paths by
//! e^{|gamma|} and grid/Monte Carlo accuracy degrades below gamma = -10.

use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::noise::{FgnSampler, HurstIndex};

/// A function sampled on the uniform grid t_i = i/m, i = 0..=m.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPath {
    values: Vec<f64>,
}

impl GridPath {
    /// Wrap grid values; needs at least two nodes (m >= 1).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidLength(
                "grid path needs at least two nodes".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Driver path from increments: `values[0] = 0`, then the scaled cumulative
    /// sum. This is the m^{-H} B^H skeleton when increments are exact fGn.
    pub fn from_increments(increments: &[f64], scale: f64) -> Result<Self> {
        if increments.is_empty() {
            return Err(Error::InvalidLength("driver needs at least one increment".into()));
        }
        let mut values = Vec::with_capacity(increments.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for &d in increments {
            acc += scale * d;
            values.push(acc);
        }
        Ok(Self { values })
    }

    /// Number of cells m (one less than the node count).
    pub fn resolution(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Trapezoid rule for int_0^1 path(t)^2 dt.
    pub fn integral_sq(&self) -> f64 {
        let m = self.resolution();
        let v = &self.values;
        let mut acc = 0.5 * (v[0] * v[0] + v[m] * v[m]);
        for x in &v[1..m] {
            acc += x * x;
        }
        acc / m as f64
    }
}

/// Ornstein-Uhlenbeck transform of a driver path:
///
/// Z_{gamma, t} = Z_t - gamma int_0^t e^{-gamma (t - s)} Z_s ds.
///
/// The convolution integral satisfies I_{i+1} = e^{-gamma/m} I_i + c_i, where
/// c_i is the trapezoid rule on the cell with the exponential weight taken
/// exactly at the nodes, so the whole transform costs O(m). For gamma = 0 the
/// output equals the input bitwise.
pub fn ou_transform(z: &GridPath, gamma: f64) -> GridPath {
    let m = z.resolution();
    let h = 1.0 / m as f64;
    let decay = (-gamma * h).exp();
    let v = z.values();
    let mut out = Vec::with_capacity(m + 1);
    out.push(v[0]);
    let mut integral = 0.0;
    for i in 0..m {
        integral = decay * integral + 0.5 * h * (decay * v[i] + v[i + 1]);
        out.push(v[i + 1] - gamma * integral);
    }
    GridPath { values: out }
}

/// Theta functional of a (transformed) driver:
/// ((int Z^2)^{-1/2}, (int Z^2)^{-1}).
pub fn theta_functional(z_gamma: &GridPath) -> Result<(f64, f64)> {
    let s = z_gamma.integral_sq();
    if s <= 0.0 {
        return Err(Error::DegenerateDriver);
    }
    Ok((s.sqrt().recip(), s.recip()))
}

/// Regime-dependent limit scalar:
///
/// - H > 1/2:  Z_{gamma,1}^2 / 2 + gamma int Z_gamma^2
/// - H = 1/2: (Z_{gamma,1}^2 - (sigma/L)^2) / 2 + gamma int Z_gamma^2
/// - H < 1/2: -(sigma/L)^2 / 2 (a constant)
pub fn limit_scalar_f(
    h: HurstIndex,
    gamma: f64,
    l: f64,
    sigma2: f64,
    z_gamma: &GridPath,
) -> f64 {
    let ratio_sq = sigma2 / (l * l);
    let hv = h.value();
    if hv < 0.5 {
        return -0.5 * ratio_sq;
    }
    let z1 = z_gamma.terminal();
    let base = gamma * z_gamma.integral_sq();
    if hv == 0.5 {
        0.5 * (z1 * z1 - ratio_sq) + base
    } else {
        0.5 * z1 * z1 + base
    }
}

/// Left-point Riemann-Stieltjes sum sum_i g(t_i) (h(t_{i+1}) - h(t_i)).
///
/// For Hoelder orders summing above one this converges to the Young
/// integral; at H = 1/2 the left-point rule is the Ito sum.
pub fn rs_integral(g: &GridPath, h: &GridPath) -> Result<f64> {
    if g.resolution() != h.resolution() {
        return Err(Error::GridMismatch {
            left: g.resolution(),
            right: h.resolution(),
        });
    }
    let gv = g.values();
    let hv = h.values();
    let mut acc = 0.0;
    for i in 0..g.resolution() {
        acc += gv[i] * (hv[i + 1] - hv[i]);
    }
    Ok(acc)
}

/// The classical nearly unstable t-statistic limit
/// tau-bar(gamma) = int_0^1 W_{gamma,s} dW_s / sqrt(int_0^1 W_{gamma,s}^2 ds)
/// evaluated on a Wiener grid path by the left-point Ito sum.
pub fn ito_sum_tau_bar(w: &GridPath, gamma: f64) -> Result<f64> {
    let w_gamma = ou_transform(w, gamma);
    let num = rs_integral(&w_gamma, w)?;
    let den_sq = w_gamma.integral_sq();
    if den_sq <= 0.0 {
        return Err(Error::DegenerateDriver);
    }
    Ok(num / den_sq.sqrt())
}

/// One draw of the limit world: driver, its OU transform, Theta, F, and the
/// context constants.
#[derive(Debug, Clone)]
pub struct LimitSample {
    pub z: GridPath,
    pub z_gamma: GridPath,
    pub theta: (f64, f64),
    pub f: f64,
    pub gamma: f64,
    pub h: HurstIndex,
    pub l: f64,
    pub sigma2: f64,
}

impl LimitSample {
    /// The limit vector F diag(L, 1) Theta = (L F theta_1, F theta_2), the
    /// weak limit of the scaled (tau_hat, b_hat - beta_n) pair.
    pub fn vector(&self) -> (f64, f64) {
        (self.l * self.f * self.theta.0, self.f * self.theta.1)
    }
}

/// Reusable generator of limit draws at fixed (H, gamma, L, sigma^2, m).
pub struct LimitSampler {
    h: HurstIndex,
    gamma: f64,
    l: f64,
    sigma2: f64,
    scale: f64,
    fgn: FgnSampler,
}

impl LimitSampler {
    pub fn new(h: HurstIndex, gamma: f64, l: f64, sigma2: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidLength("limit grid needs m >= 2".into()));
        }
        Ok(Self {
            h,
            gamma,
            l,
            sigma2,
            scale: (m as f64).powf(-h.value()),
            fgn: FgnSampler::new(h, m)?,
        })
    }

    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Result<LimitSample> {
        let increments = self.fgn.sample(rng);
        let z = GridPath::from_increments(&increments, self.scale)?;
        let z_gamma = ou_transform(&z, self.gamma);
        let theta = theta_functional(&z_gamma)?;
        let f = limit_scalar_f(self.h, self.gamma, self.l, self.sigma2, &z_gamma);
        Ok(LimitSample {
            z,
            z_gamma,
            theta,
            f,
            gamma: self.gamma,
            h: self.h,
            l: self.l,
            sigma2: self.sigma2,
        })
    }
}

/// One-shot limit draw; see `LimitSampler` for the reusable form.
pub fn sample_limit_vector(
    h: HurstIndex,
    gamma: f64,
    l: f64,
    sigma2: f64,
    m: usize,
    rng: &mut ChaCha12Rng,
) -> Result<LimitSample> {
    LimitSampler::new(h, gamma, l, sigma2, m)?.sample(rng)
}
