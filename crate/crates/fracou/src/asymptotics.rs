//! Expected value of the limit functional for long-memory drivers, its
//! large-|gamma| asymptotes, the deterministic Malliavin-derivative curve,
//! and the three-regime bias targets.
//!
//! The central quantity is
//!
//! EF(H, gamma) = H (2H - 1) int_0^1 int_0^s e^{-gamma u} u^{2H-2} du ds,
//!
//! the mean of the pathwise (Riemann-Stieltjes) limit numerator for
//! H in (1/2, 1); the same expectation is 0 at H = 1/2 and -1/2 below it.

use crate::error::{Error, Result};
use crate::noise::HurstIndex;
use crate::quad;
use crate::special::{exp_moment_integral, gamma};

/// relative tolerance for the one-dimensional EF quadrature
pub const EF_REL_TOL: f64 = 1e-8;

fn require_long_memory(h: HurstIndex) -> Result<f64> {
    let hv = h.value();
    if hv <= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "the expected limit functional is an integral only for H > 1/2 \
             (it is 0 at H = 1/2 and -1/2 below); got H = {hv}"
        )));
    }
    Ok(hv)
}

/// EF(H, gamma) for H in (1/2, 1) by adaptive quadrature.
///
/// Swapping the integration order reduces the double integral to
/// H (2H-1) int_0^1 e^{-gamma u} u^{2H-2} (1 - u) du, and the substitution
/// u = v^{1/(2H-1)} removes the endpoint singularity:
///
/// EF = H int_0^1 e^{-gamma v^p} (1 - v^p) dv,   p = 1/(2H - 1).
///
/// Negative gamma is fully supported, but the value grows like e^{|gamma|},
/// so relative accuracy (and any Monte Carlo comparison against it)
/// degrades for gamma much below -10.
pub fn ef_mean(h: HurstIndex, gamma_param: f64) -> Result<f64> {
    ef_mean_with_tol(h, gamma_param, EF_REL_TOL)
}

pub(crate) fn ef_mean_with_tol(h: HurstIndex, gamma_param: f64, rel_tol: f64) -> Result<f64> {
    let hv = require_long_memory(h)?;
    let p = 1.0 / (2.0 * hv - 1.0);
    let f = move |v: f64| {
        let u = v.powf(p);
        hv * (-gamma_param * u).exp() * (1.0 - u)
    };
    // split where u = v^p reaches 1/2 (a boundary layer at v -> 1 when H is
    // near 1/2), and at the decay scale of the exponential for large gamma
    let mut points = vec![0.0, (-(2.0 * hv - 1.0) * std::f64::consts::LN_2).exp(), 1.0];
    if gamma_param > 1.0 {
        points.push(gamma_param.powf(-(2.0 * hv - 1.0)).min(0.5));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let r = quad::integrate_with_splits(f, &points, rel_tol, 400)?;
    Ok(r.value)
}

/// EF(H, gamma) through the incomplete-gamma route:
///
/// EF = H (2H-1) [ I(2H-1, gamma) - I(2H, gamma) ]
///
/// with I the exponential moment integral. An independent evaluation path
/// used to cross-check the quadrature.
pub fn ef_mean_incomplete_gamma(h: HurstIndex, gamma_param: f64) -> Result<f64> {
    let hv = require_long_memory(h)?;
    let d = 2.0 * hv - 1.0;
    Ok(hv * d * (exp_moment_integral(d, gamma_param) - exp_moment_integral(d + 1.0, gamma_param)))
}

/// Which tail of the gamma axis an asymptote refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoteSide {
    /// gamma -> +infinity: Gamma(2H+1)/2 gamma^{1-2H}
    Plus,
    /// gamma -> -infinity: H (2H-1) |gamma|^{-2} e^{|gamma|}
    Minus,
}

/// Asymptotic approximant of EF for large |gamma|. The side must match the
/// sign of gamma.
pub fn ef_asymptote(h: HurstIndex, gamma_param: f64, side: AsymptoteSide) -> Result<f64> {
    let hv = require_long_memory(h)?;
    match side {
        AsymptoteSide::Plus => {
            if gamma_param <= 0.0 {
                return Err(Error::InvalidArgument(
                    "the plus-side asymptote needs gamma > 0".into(),
                ));
            }
            Ok(0.5 * gamma(2.0 * hv + 1.0) * gamma_param.powf(1.0 - 2.0 * hv))
        }
        AsymptoteSide::Minus => {
            if gamma_param >= 0.0 {
                return Err(Error::InvalidArgument(
                    "the minus-side asymptote needs gamma < 0".into(),
                ));
            }
            let a = gamma_param.abs();
            Ok(hv * (2.0 * hv - 1.0) * a.powi(-2) * a.exp())
        }
    }
}

/// Deterministic Malliavin-derivative curve
///
/// D(s) = H (2H-1) int_0^s e^{-gamma u} u^{2H-2} du,
///
/// evaluated with the same singularity-removing substitution as `ef_mean`
/// (the window becomes v in [0, s^{2H-1}]). Its integral over s in [0, 1]
/// is EF(H, gamma) by Fubini.
pub fn malliavin_derivative(h: HurstIndex, gamma_param: f64, s: f64) -> Result<f64> {
    let hv = require_long_memory(h)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("time must be in [0, 1], got {s}")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let p = 1.0 / (2.0 * hv - 1.0);
    if gamma_param == 0.0 {
        // closed form H s^{2H-1}
        return Ok(hv * s.powf(2.0 * hv - 1.0));
    }
    let f = move |v: f64| hv * (-gamma_param * v.powf(p)).exp();
    let upper = s.powf(2.0 * hv - 1.0);
    let r = quad::integrate(f, 0.0, upper, EF_REL_TOL, 400)?;
    Ok(r.value)
}

/// Limit of n^{-(2H v 1)} E sum_t X_t eps_{t+1} in the three regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasRegime {
    /// H > 1/2: the EF integral
    EfIntegral,
    /// H = 1/2: exactly zero (martingale structure at every n)
    Zero,
    /// H < 1/2: -1/2
    MinusHalf,
}

/// The regime-dispatched bias target.
#[derive(Debug, Clone, Copy)]
pub struct BiasTarget {
    pub h: HurstIndex,
    pub gamma: f64,
    pub value: f64,
    pub regime: BiasRegime,
}

pub fn bias_target(h: HurstIndex, gamma_param: f64) -> Result<BiasTarget> {
    let hv = h.value();
    let (value, regime) = if hv > 0.5 {
        (ef_mean(h, gamma_param)?, BiasRegime::EfIntegral)
    } else if hv == 0.5 {
        (0.0, BiasRegime::Zero)
    } else {
        (-0.5, BiasRegime::MinusHalf)
    };
    Ok(BiasTarget {
        h,
        gamma: gamma_param,
        value,
        regime,
    })
}

/// Constant in the long-lag autocovariance power law of fractionally
/// integrated noise (excluding the filter-dependent factor):
///
/// (H - 1/2) Gamma(2 - 2H) / (Gamma(3/2 - H) Gamma(H + 1/2)).
///
/// Vanishes continuously as H -> 1/2.
pub fn autocov_asymptote_constant(h: HurstIndex) -> f64 {
    let hv = h.value();
    (hv - 0.5) * gamma(2.0 - 2.0 * hv) / (gamma(1.5 - hv) * gamma(hv + 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn h(v: f64) -> HurstIndex {
        HurstIndex::new(v).unwrap()
    }

    /// Brute-force oracle: the double integral evaluated without the order
    /// swap or substitution, nested adaptive quadrature straight on
    /// H(2H-1) int_0^1 [ int_0^s e^{-gamma u} u^{2H-2} du ] ds.
    fn ef_two_dimensional_oracle(hv: f64, g: f64) -> f64 {
        let inner = |s: f64| {
            quad::integrate(|u: f64| (-g * u).exp() * u.powf(2.0 * hv - 2.0), 0.0, s, 1e-9, 2000)
                .map(|r| r.value)
                .unwrap()
        };
        let outer = quad::integrate(inner, 0.0, 1.0, 1e-8, 2000).unwrap();
        hv * (2.0 * hv - 1.0) * outer.value
    }

    #[test]
    fn ef_at_gamma_zero_is_half() {
        for hv in [0.55, 0.6, 0.75, 0.9] {
            let v = ef_mean(h(hv), 0.0).unwrap();
            assert_relative_eq!(v, 0.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn ef_continuity_onto_the_boundary() {
        for g in [-2.0, 1.0, 5.0] {
            let v = ef_mean(h(0.5001), g).unwrap();
            assert!((v - 0.5).abs() < 1e-3, "gamma={g}: {v}");
        }
    }

    #[test]
    fn ef_reference_value() {
        // frozen from a 30-digit evaluation
        assert_relative_eq!(
            ef_mean(h(0.75), 1.0).unwrap(),
            0.418013840243950999829,
            max_relative = 1e-8
        );
    }

    #[test]
    fn ef_quadrature_vs_incomplete_gamma_route() {
        for hv in [0.55, 0.65, 0.75, 0.85, 0.95] {
            for g in [-25.0, -3.0, -0.5, 0.0, 0.5, 3.0, 25.0, 300.0] {
                let a = ef_mean(h(hv), g).unwrap();
                let b = ef_mean_incomplete_gamma(h(hv), g).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn ef_matches_two_dimensional_oracle() {
        for (hv, g) in [(0.75, 1.0), (0.6, 2.0), (0.9, -3.0)] {
            let fast = ef_mean(h(hv), g).unwrap();
            let oracle = ef_two_dimensional_oracle(hv, g);
            assert_relative_eq!(fast, oracle, max_relative = 2e-5);
        }
    }

    #[test]
    fn ef_positive_everywhere_tested() {
        for hv in [0.51, 0.6, 0.75, 0.9, 0.99] {
            for g in [-30.0, -1.0, 0.0, 1.0, 30.0, 1000.0] {
                assert!(ef_mean(h(hv), g).unwrap() > 0.0, "H={hv}, gamma={g}");
            }
        }
    }

    #[test]
    fn ef_rejects_short_memory() {
        assert!(ef_mean(h(0.5), 1.0).is_err());
        assert!(ef_mean(h(0.3), 1.0).is_err());
    }

    #[test]
    fn ef_halving_tolerance_stays_within_reported_error() {
        for (hv, g) in [(0.75, 2.0), (0.6, -4.0)] {
            let loose = ef_mean_with_tol(h(hv), g, 1e-6).unwrap();
            let tight = ef_mean_with_tol(h(hv), g, 5e-7).unwrap();
            assert!(
                (loose - tight).abs() <= 1e-6 * loose.abs(),
                "H={hv} gamma={g}: {loose} vs {tight}"
            );
        }
    }

    #[test]
    fn asymptote_arithmetic() {
        // Gamma(2.5)/2 * 100^{-1/2} with Gamma(2.5) = 3 sqrt(pi)/4
        let plus = ef_asymptote(h(0.75), 100.0, AsymptoteSide::Plus).unwrap();
        assert_relative_eq!(
            plus,
            0.5 * 1.3293403881791370205 * 0.1,
            max_relative = 1e-12
        );
        let minus = ef_asymptote(h(0.75), -20.0, AsymptoteSide::Minus).unwrap();
        assert_relative_eq!(minus, 0.375 * 20.0f64.exp() / 400.0, max_relative = 1e-12);
    }

    #[test]
    fn asymptote_sides_must_match_sign() {
        assert!(ef_asymptote(h(0.75), -1.0, AsymptoteSide::Plus).is_err());
        assert!(ef_asymptote(h(0.75), 1.0, AsymptoteSide::Minus).is_err());
    }

    #[test]
    fn asymptote_ratio_approaches_one() {
        let ratio = ef_mean(h(0.75), 1000.0).unwrap()
            / ef_asymptote(h(0.75), 1000.0, AsymptoteSide::Plus).unwrap();
        assert!((ratio - 1.0).abs() < 0.1, "plus-side ratio {ratio}");
        let ratio = ef_mean(h(0.75), -25.0).unwrap()
            / ef_asymptote(h(0.75), -25.0, AsymptoteSide::Minus).unwrap();
        assert!((ratio - 1.0).abs() < 0.1, "minus-side ratio {ratio}");
    }

    #[test]
    fn malliavin_boundary_and_closed_form() {
        assert_eq!(malliavin_derivative(h(0.75), 2.0, 0.0).unwrap(), 0.0);
        for s in [0.1, 0.5, 1.0] {
            let v = malliavin_derivative(h(0.75), 0.0, s).unwrap();
            assert_relative_eq!(v, 0.75 * s.powf(0.5), max_relative = 1e-12);
        }
    }

    #[test]
    fn malliavin_integrates_to_ef() {
        // Fubini consistency over a 3x3 grid of (H, gamma)
        for hv in [0.6, 0.75, 0.9] {
            for g in [-2.0, 0.0, 2.0] {
                let d_total = quad::integrate(
                    |s: f64| malliavin_derivative(h(hv), g, s).unwrap(),
                    0.0,
                    1.0,
                    1e-7,
                    2000,
                )
                .unwrap();
                let ef = ef_mean(h(hv), g).unwrap();
                assert!(
                    (d_total.value - ef).abs() < 1e-6 * (1.0 + ef.abs()),
                    "H={hv} gamma={g}: integral {} vs EF {ef}",
                    d_total.value
                );
            }
        }
    }

    #[test]
    fn bias_target_regimes() {
        let t = bias_target(h(0.5), 3.0).unwrap();
        assert_eq!((t.value, t.regime), (0.0, BiasRegime::Zero));
        let t = bias_target(h(0.25), -1.0).unwrap();
        assert_eq!((t.value, t.regime), (-0.5, BiasRegime::MinusHalf));
        let t = bias_target(h(0.75), 0.0).unwrap();
        assert_eq!(t.regime, BiasRegime::EfIntegral);
        assert_relative_eq!(t.value, 0.5, epsilon = 1e-8);
    }

    #[test]
    fn discontinuity_at_the_boundary() {
        // EF jumps from ~1/2 just above H = 1/2 to the target 0 at H = 1/2
        let above = ef_mean(h(0.5001), 1.0).unwrap();
        let at = bias_target(h(0.5), 1.0).unwrap().value;
        assert!(((above - at) - 0.5).abs() < 1e-3, "jump {}", above - at);
    }

    #[test]
    fn autocov_constant_values_and_signs() {
        // 0.25 Gamma(0.5) / (Gamma(0.75) Gamma(1.25)), frozen 30-digit value
        assert_relative_eq!(
            autocov_asymptote_constant(h(0.75)),
            0.398942280401432677940,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            autocov_asymptote_constant(h(0.25)),
            -0.199471140200716338970,
            max_relative = 1e-12
        );
        assert!(autocov_asymptote_constant(h(0.8)) > 0.0);
        assert!(autocov_asymptote_constant(h(0.2)) < 0.0);
        assert!(autocov_asymptote_constant(h(0.5 + 1e-9)).abs() < 1e-8);
        assert!(autocov_asymptote_constant(h(0.5 - 1e-9)).abs() < 1e-8);
    }

    #[test]
    fn incomplete_gamma_recurrence_anchor() {
        // gamma(3/2, 1) = gamma(1/2, 1)/2 - e^{-1}, expressed through the
        // exponential moment integrals at gamma = 1
        let i_half = exp_moment_integral(0.5, 1.0);
        let i_three_half = exp_moment_integral(1.5, 1.0);
        assert_relative_eq!(
            i_three_half,
            0.5 * i_half - (-1.0f64).exp(),
            max_relative = 1e-12
        );
    }
}
