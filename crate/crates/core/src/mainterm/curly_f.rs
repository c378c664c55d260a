//! Φ(s,k), the auxiliary function Z_{α,γ,h,k} and the kernel F_{α,h,k}(T).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::polys::{a_m, b_m, poly_p, poly_q};
use crate::arith::{euler_phi, prime_divisors, von_mangoldt};
use crate::error::{domain, Error, Result};
use crate::numeric::{cauchy_derivative, integrate};
use crate::zeta::ZetaOracle;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Nodes on the γ-circle used by [`curly_f_via_z_derivative`].
const SHIFT_NODES: usize = 16;

/// `n^{−s}` for a positive integer base.
pub(crate) fn int_pow_neg(n: u64, s: Complex64) -> Complex64 {
    if n == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        (-s * (n as f64).ln()).exp()
    }
}

/// `Φ(s, k) = Π_{p|k} (1 − p^{−s})`.
pub fn phi_factor(s: Complex64, k: u64) -> Result<Complex64> {
    if k == 0 {
        return Err(domain("phi_factor requires k >= 1"));
    }
    Ok(prime_divisors(k)
        .into_iter()
        .fold(Complex64::new(1.0, 0.0), |acc, p| {
            acc * (1.0 - int_pow_neg(p, s))
        }))
}

/// `Z_{α,γ,h,k} = h^{−α} k^{−γ} ζ(1+α+γ)/ζ(1+α) · Π_{p|k} (1−p^γ)/(1−p^{−1−α})`,
/// with `γ` passed as `g_shift`.
///
/// At `α = 0` (with `γ ≠ 0`) the removable limit 0 is returned.
pub fn big_z<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    g_shift: Complex64,
    h: u64,
    k: u64,
    oracle: &O,
) -> Result<Complex64> {
    if h == 0 || k == 0 {
        return Err(domain("big_z requires h, k >= 1"));
    }
    if g_shift == ZERO {
        if alpha == ZERO {
            return Err(domain("big_z is undefined at alpha = g_shift = 0"));
        }
        return Ok(if k == 1 { int_pow_neg(h, alpha) } else { ZERO });
    }
    if alpha + g_shift == ZERO {
        return Err(Error::Pole {
            re: 1.0,
            im: 0.0,
            context: format!(
                "big_z: zeta(1+alpha+g_shift) with alpha = {alpha}, g_shift = {g_shift}"
            ),
        });
    }
    if alpha == ZERO {
        return Ok(ZERO);
    }
    let one = Complex64::new(1.0, 0.0);
    let mut euler = one;
    for p in prime_divisors(k) {
        let denom = 1.0 - int_pow_neg(p, one + alpha);
        if denom == ZERO {
            return Err(Error::Pole {
                re: -1.0 - alpha.re,
                im: -alpha.im,
                context: format!("big_z: Euler factor at p = {p} vanishes"),
            });
        }
        euler *= (1.0 - int_pow_neg(p, -g_shift)) / denom;
    }
    let ratio = oracle.zeta(one + alpha + g_shift)? / oracle.zeta(one + alpha)?;
    Ok(int_pow_neg(h, alpha) * int_pow_neg(k, g_shift) * ratio * euler)
}

/// `F_{α,h,k}(T)` for a fixed `(α, T)`, with the two ζ values it needs
/// computed once and shared across `(h, k)`.
#[derive(Debug, Clone, Copy)]
pub struct CurlyF {
    alpha: Complex64,
    height: f64,
    /// `(ζ′/ζ(1+α), ζ(1−α))`; absent at `α = 0`.
    zeta_values: Option<(Complex64, Complex64)>,
}

impl CurlyF {
    pub fn new<O: ZetaOracle + ?Sized>(alpha: Complex64, height: f64, oracle: &O) -> Result<Self> {
        if !(height > 0.0) {
            return Err(domain(format!("F requires T > 0, got {height}")));
        }
        if alpha == Complex64::new(1.0, 0.0) {
            return Err(domain("F is undefined at alpha = 1"));
        }
        let zeta_values = if alpha == ZERO {
            None
        } else {
            let one = Complex64::new(1.0, 0.0);
            Some((
                oracle.zeta_log_derivative(one + alpha)?,
                oracle.zeta(one - alpha)?,
            ))
        };
        Ok(Self {
            alpha,
            height,
            zeta_values,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn value(&self, h: u64, k: u64) -> Result<Complex64> {
        if h == 0 || k == 0 {
            return Err(domain("F requires h, k >= 1"));
        }
        let Some((log_deriv, zeta_reflected)) = self.zeta_values else {
            return Ok(Complex64::new(
                f_derivative_closed_form(0, h, k, self.height)?,
                0.0,
            ));
        };
        let alpha = self.alpha;
        let one = Complex64::new(1.0, 0.0);
        let h_pow = int_pow_neg(h, alpha);
        let mut bracket = ZERO;
        if k == 1 {
            bracket += h_pow * log_deriv;
        }
        let lambda = von_mangoldt(k)?;
        if lambda != 0.0 {
            bracket -= lambda / (h_pow.inv() * phi_factor(one + alpha, k)?);
        }
        let k_over_phi = k as f64 / euler_phi(k)? as f64;
        let scale = Complex64::new(self.height / (2.0 * PI * k as f64), 0.0).powc(-alpha);
        bracket -= k_over_phi * phi_factor(alpha, k)? * zeta_reflected * scale / (one - alpha);
        Ok(bracket * (self.height / (2.0 * PI)))
    }
}

/// `F_{α,h,k}(T)`; at `α = 0` the analytic limit.
pub fn curly_f<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    h: u64,
    k: u64,
    height: f64,
    oracle: &O,
) -> Result<Complex64> {
    CurlyF::new(alpha, height, oracle)?.value(h, k)
}

/// F from its integral representation
///
/// ```text
///     conj( d/dγ (1/2π) ∫_0^T [Z_{ᾱ,γ,h,k} + (t/2π)^{−ᾱ−γ} Z_{−γ,−ᾱ,h,k}] dt |_{γ=0} )
/// ```
///
/// with adaptive quadrature in `t` and a Cauchy circle of radius `step` in γ.
/// `step` must stay well inside `|α|`, the distance to the nearest pole in γ.
pub fn curly_f_via_z_derivative<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    h: u64,
    k: u64,
    height: f64,
    step: f64,
    oracle: &O,
) -> Result<Complex64> {
    if alpha == ZERO {
        return Err(domain("integral form of F requires alpha != 0"));
    }
    if !(height > 0.0) {
        return Err(domain(format!("F requires T > 0, got {height}")));
    }
    if !(step > 0.0 && step < 0.5 * alpha.norm()) {
        return Err(domain(format!(
            "step must lie in (0, |alpha|/2) = (0, {}), got {step}",
            0.5 * alpha.norm()
        )));
    }
    let a = alpha.conj();
    let bracket = |g: Complex64| -> Result<Complex64> {
        let z_plain = big_z(a, g, h, k, oracle)?;
        let z_swapped = big_z(-g, -a, h, k, oracle)?;
        let exponent = -(a + g);
        let tail = integrate(
            |t| (exponent * (t / (2.0 * PI)).ln()).exp(),
            0.0,
            height,
            1e-13 * height,
            1e-13,
            4000,
        )?;
        Ok((z_plain * height + z_swapped * tail.value) / (2.0 * PI))
    };
    Ok(cauchy_derivative(bracket, ZERO, 1, step, SHIFT_NODES)?.conj())
}

/// `d^m/dα^m F_{α,h,k}(T)` at `α = 0` in closed form:
/// `(T/2π)((−1)^{m+1}/(m+1))(P_{m+1}(L) − Q_{m+1}(log h))` for `k = 1` and
/// `(T/2π)((−1)^{m+1} A_m(h,k) + B_m(k,T))` for `k > 1`, with `L = log(T/2π)`.
pub fn f_derivative_closed_form(m: usize, h: u64, k: u64, height: f64) -> Result<f64> {
    if h == 0 || k == 0 {
        return Err(domain("F requires h, k >= 1"));
    }
    if !(height > 0.0) {
        return Err(domain(format!("F requires T > 0, got {height}")));
    }
    let prefactor = height / (2.0 * PI);
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 };
    if k == 1 {
        let l = (height / (2.0 * PI)).ln();
        let diff = poly_p(m)?.eval(l) - poly_q(m)?.eval((h as f64).ln());
        Ok(prefactor * sign / (m as f64 + 1.0) * diff)
    } else {
        Ok(prefactor * (sign * a_m(m, h, k)? + b_m(m, k, height)?))
    }
}
