//! The χ-factor of the functional equation, the Riemann–Siegel theta
//! function and Hardy's Z-function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_gamma, ln_gamma_right, ln_sin};
use super::{zeta, EvaluationOptions};
use crate::error::{domain, Error, Result};

/// Below this height θ is taken from log-Γ directly instead of the
/// asymptotic series.
const THETA_SERIES_MIN: f64 = 20.0;

/// Tolerance on `|Im(e^{iθ} ζ(1/2+it))|` relative to `1 + |Z|`.
pub const HARDY_RESIDUE_TOLERANCE: f64 = 1e-8;

/// `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`, evaluated through logarithms.
///
/// Rejected at the positive integers (poles of Γ(1-s)) and at
/// `s = 0, -2, -4, …` (zeros of the sine).
pub fn chi_factor(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re == s.re.round() {
        let n = s.re as i64;
        if n >= 1 || n % 2 == 0 {
            return Err(domain(format!(
                "chi_factor undefined at the integer s = {n}"
            )));
        }
    }
    let log_chi = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_sin(s * (PI / 2.0)) + ln_gamma(1.0 - s);
    Ok(log_chi.exp())
}

/// Riemann–Siegel θ(t) for `t ≥ 2`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(domain(format!(
            "riemann_siegel_theta requires t >= 2, got {t}"
        )));
    }
    Ok(if t >= THETA_SERIES_MIN {
        theta_series(t)
    } else {
        theta_log_gamma(t)
    })
}

fn theta_series(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let correction = inv
        * (1.0 / 48.0
            + inv2
                * (7.0 / 5760.0
                    + inv2
                        * (31.0 / 80640.0
                            + inv2 * (127.0 / 430080.0 + inv2 * (511.0 / 1216512.0)))));
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + correction
}

/// `Im log Γ(1/4 + it/2) − (t/2) log π`, valid for any `t > 0`.
pub(crate) fn theta_log_gamma(t: f64) -> f64 {
    ln_gamma_right(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`.
///
/// Fails with [`Error::HardyResidue`] when the rotated value is not real to
/// within [`HARDY_RESIDUE_TOLERANCE`]`·(1+|Z|)`; that indicates an engine defect.
pub fn hardy_z(t: f64, opts: &EvaluationOptions) -> Result<f64> {
    let theta = riemann_siegel_theta(t)?;
    let z = zeta(Complex64::new(0.5, t), opts)?;
    let rotated = Complex64::from_polar(1.0, theta) * z;
    if rotated.im.abs() > HARDY_RESIDUE_TOLERANCE * (1.0 + rotated.re.abs()) {
        return Err(Error::HardyResidue {
            t,
            value: rotated.re,
            residue: rotated.im,
        });
    }
    Ok(rotated.re)
}
