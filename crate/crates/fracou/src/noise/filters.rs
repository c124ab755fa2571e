//! Fractional integration coefficients and ARMA filter expansion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::noise::HurstIndex;
use crate::special::gamma;

/// Moving-average coefficients of the fractional integration operator
/// (I - B)^{1/2 - H} applied as an MA(infinity) expansion, truncated at `J`:
///
/// b_0 = 1,  b_j = b_{j-1} * (j - 1 + H - 1/2) / j.
///
/// For H = 1/2 the first factor vanishes and all higher coefficients are
/// exactly zero.
#[derive(Debug, Clone)]
pub struct FracCoeffs {
    pub h: HurstIndex,
    pub b: Vec<f64>,
}

impl FracCoeffs {
    pub fn truncation(&self) -> usize {
        self.b.len() - 1
    }
}

/// Compute b_0..b_J by the product recursion.
pub fn frac_integration_coeffs(h: HurstIndex, j_max: usize) -> FracCoeffs {
    let d = h.value() - 0.5;
    let mut b = Vec::with_capacity(j_max + 1);
    b.push(1.0);
    for j in 1..=j_max {
        let jf = j as f64;
        let next = b[j - 1] * (jf - 1.0 + d) / jf;
        b.push(next);
    }
    FracCoeffs { h, b }
}

/// Total variance sum_{j>=0} b_j(H)^2 of the identity-filter expansion,
/// in closed form: Gamma(2 - 2H) / Gamma(3/2 - H)^2.
pub fn frac_coeff_square_sum(h: HurstIndex) -> f64 {
    let hv = h.value();
    if h.is_brownian() {
        return 1.0;
    }
    gamma(2.0 - 2.0 * hv) / gamma(1.5 - hv).powi(2)
}

/// Default cap on the MA truncation length. For H > 1/2 the squared-
/// coefficient tail decays like J^{2H-2}, so very tight relative tolerances
/// are unreachable at desk scale; the achieved tail is always reported.
pub const FRAC_TRUNCATION_CAP: usize = 1 << 16;

/// Smallest truncation J with relative squared-coefficient tail below
/// `rel_tol`, capped at `cap`. Returns (J, achieved relative tail).
pub fn frac_truncation(h: HurstIndex, rel_tol: f64, cap: usize) -> (usize, f64) {
    if h.is_brownian() {
        return (0, 0.0);
    }
    let total = frac_coeff_square_sum(h);
    let d = h.value() - 0.5;
    let mut partial = 1.0f64;
    let mut b = 1.0f64;
    for j in 1..=cap {
        let jf = j as f64;
        b *= (jf - 1.0 + d) / jf;
        partial += b * b;
        let tail = ((total - partial) / total).max(0.0);
        if tail < rel_tol {
            return (j, tail);
        }
    }
    (cap, ((total - partial) / total).max(0.0))
}

/// Power-series coefficients alpha_0..alpha_K of theta(z)/phi(z).
///
/// Both polynomials are given in ascending degree order including the
/// constant term, e.g. phi = [1.0, -0.5] for 1 - 0.5 z. Validation rejects
/// zeros of modulus <= 1 in either polynomial and shared zeros.
pub fn expand_arma_filter(phi: &[f64], theta: &[f64], k_max: usize) -> Result<Vec<f64>> {
    validate_arma(phi, theta)?;
    Ok(expand_unchecked(phi, theta, k_max))
}

fn expand_unchecked(phi: &[f64], theta: &[f64], k_max: usize) -> Vec<f64> {
    let phi0 = phi[0];
    let mut alpha = Vec::with_capacity(k_max + 1);
    for n in 0..=k_max {
        let mut acc = theta.get(n).copied().unwrap_or(0.0);
        for j in 1..phi.len().min(n + 1) {
            acc -= phi[j] * alpha[n - j];
        }
        alpha.push(acc / phi0);
    }
    alpha
}

/// Validate an ARFIMA short-memory part: phi and theta must have all zeros
/// strictly outside the unit circle and none in common.
pub fn validate_arma(phi: &[f64], theta: &[f64]) -> Result<()> {
    if phi.is_empty() || phi[0] == 0.0 {
        return Err(Error::ZeroConstantTerm);
    }
    if theta.is_empty() || theta[0] == 0.0 {
        return Err(Error::ZeroConstantTerm);
    }
    let phi_zeros = polynomial_roots(phi);
    for z in &phi_zeros {
        if z.norm() <= 1.0 {
            return Err(Error::UnstableArPolynomial { modulus: z.norm() });
        }
    }
    let theta_zeros = polynomial_roots(theta);
    for z in &theta_zeros {
        if z.norm() <= 1.0 {
            return Err(Error::NoninvertibleMaPolynomial { modulus: z.norm() });
        }
    }
    for zp in &phi_zeros {
        for zt in &theta_zeros {
            if (zp - zt).norm() <= 1e-8 * (1.0 + zp.norm()) {
                return Err(Error::CommonPolynomialZero { re: zp.re, im: zp.im });
            }
        }
    }
    Ok(())
}

/// Expansion length for internal use: stop once the coefficients have
/// decayed below 1e-14 of the running absolute sum for several consecutive
/// terms (they decay geometrically for valid ARMA filters).
pub fn expand_arma_adaptive(phi: &[f64], theta: &[f64]) -> Result<Vec<f64>> {
    validate_arma(phi, theta)?;
    let block = 64usize;
    let mut k = block;
    loop {
        let alpha = expand_unchecked(phi, theta, k);
        let abs_sum: f64 = alpha.iter().map(|a| a.abs()).sum();
        let cutoff = 1e-14 * abs_sum.max(1e-300);
        let tail_small = alpha.iter().rev().take(8).all(|a| a.abs() < cutoff);
        if tail_small {
            let last = alpha.iter().rposition(|a| a.abs() >= cutoff).unwrap_or(0);
            return Ok(alpha[..=last].to_vec());
        }
        if k >= 1 << 16 {
            return Ok(alpha);
        }
        k *= 2;
    }
}

/// All complex zeros of a real polynomial (ascending coefficients) by
/// Durand-Kerner iteration. Adequate for the low-degree AR/MA polynomials
/// this crate meets.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    // trim trailing (highest-degree) zero coefficients
    let deg_end = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
    let coeffs = &coeffs[..=deg_end];
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs
        .iter()
        .map(|&c| Complex64::new(c / lead, 0.0))
        .collect();

    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32 + 1)).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let zi = roots[i];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 {
            break;
        }
    }
    roots
}
