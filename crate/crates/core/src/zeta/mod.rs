//! Numerical evaluation of ζ(s) and its relatives at moderate heights.
//!
//! ζ is computed by Euler–Maclaurin summation with a truncation index that
//! grows with `|s|`; derivatives come from Cauchy integrals on a small circle.

mod gamma;
mod hardy;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{bernoulli_even, cauchy_derivative, factorial, MAX_BERNOULLI_INDEX};

pub use gamma::{ln_gamma, ln_gamma_right, ln_sin};
pub use hardy::{chi_factor, hardy_z, riemann_siegel_theta, HARDY_RESIDUE_TOLERANCE};

/// Largest `|Im s|` accepted by the engine.
pub const MAX_HEIGHT: f64 = 1e5;

/// Tuning knobs for the ζ kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationOptions {
    /// Minimum Euler–Maclaurin truncation index; raised automatically with `|s|`.
    pub euler_maclaurin_terms: usize,
    /// Highest Bernoulli index `2K` used in the tail correction.
    pub bernoulli_order: usize,
    pub derivative_radius: f64,
    pub derivative_nodes: usize,
}

impl Default for EvaluationOptions {
    fn default() -> Self {
        Self {
            euler_maclaurin_terms: 16,
            bernoulli_order: 24,
            derivative_radius: 0.1,
            derivative_nodes: 64,
        }
    }
}

impl EvaluationOptions {
    pub fn validate(&self) -> Result<()> {
        if self.euler_maclaurin_terms == 0 {
            return Err(domain("euler_maclaurin_terms must be positive"));
        }
        if self.bernoulli_order == 0
            || !self.bernoulli_order.is_multiple_of(2)
            || self.bernoulli_order > MAX_BERNOULLI_INDEX
        {
            return Err(domain(format!(
                "bernoulli_order must be even and in 2..={MAX_BERNOULLI_INDEX}, got {}",
                self.bernoulli_order
            )));
        }
        if !(self.derivative_radius > 0.0 && self.derivative_radius < 0.25) {
            return Err(domain(format!(
                "derivative_radius must lie in (0, 1/4), got {}",
                self.derivative_radius
            )));
        }
        if self.derivative_nodes < 4 {
            return Err(domain("derivative_nodes must be at least 4"));
        }
        Ok(())
    }

    fn truncation(&self, s: Complex64) -> usize {
        let k = self.bernoulli_order as f64;
        let scaled = (0.64 * (s.norm() + k)).ceil() as usize;
        self.euler_maclaurin_terms.max(scaled).max(2)
    }
}

fn check_height(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(domain(format!("non-finite argument {s}")));
    }
    if s.im.abs() > MAX_HEIGHT {
        return Err(Error::HeightOutOfRange(s.im.abs()));
    }
    Ok(())
}

/// `(e^w − 1)/w`, accurate for small `w`.
fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        let mut acc = Complex64::new(1.0, 0.0);
        for j in (2..=11).rev() {
            acc = acc * w / j as f64 + 1.0;
        }
        acc
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Euler–Maclaurin pieces that do not involve the pole: the partial sum
/// `Σ_{n<N} n^{-s}`, the boundary term `N^{-s}/2` and the Bernoulli tail.
/// Returns that total together with `N` and `N^{-s}`.
fn euler_maclaurin(s: Complex64, opts: &EvaluationOptions) -> (Complex64, usize, Complex64) {
    let n_trunc = opts.truncation(s);
    let mut partial = Complex64::new(0.0, 0.0);
    for n in 1..n_trunc {
        partial += (-s * (n as f64).ln()).exp();
    }
    let n = n_trunc as f64;
    let n_pow = (-s * n.ln()).exp();
    let mut tail = n_pow * 0.5;
    let inv_n2 = 1.0 / (n * n);
    let mut rising = s;
    let mut scale = n_pow / n;
    for k in 1..=opts.bernoulli_order / 2 {
        if k > 1 {
            let kk = 2.0 * k as f64;
            rising *= (s + (kk - 3.0)) * (s + (kk - 2.0));
            scale *= inv_n2;
        }
        tail += rising * scale * (bernoulli_even(k) / factorial(2 * k as u32));
    }
    (partial + tail, n_trunc, n_pow)
}

/// ζ(s) for `s ≠ 1`, `|Im s| ≤ 10^5`.
pub fn zeta(s: Complex64, opts: &EvaluationOptions) -> Result<Complex64> {
    check_height(s)?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            re: 1.0,
            im: 0.0,
            context: "zeta".into(),
        });
    }
    let (body, n, n_pow) = euler_maclaurin(s, opts);
    Ok(body + n_pow * n as f64 / (s - 1.0))
}

/// The entire function `ζ(s) − 1/(s−1)`, defined at `s = 1` as γ_0.
pub fn zeta_regular(s: Complex64, opts: &EvaluationOptions) -> Result<Complex64> {
    check_height(s)?;
    let (body, n, _) = euler_maclaurin(s, opts);
    let ln_n = (n as f64).ln();
    // (N^{1-s} - 1)/(s - 1)
    let pole_part = -ln_n * expm1_over((1.0 - s) * ln_n);
    Ok(body + pole_part)
}

/// m-th derivative of ζ at `s` by a Cauchy integral.
pub fn zeta_deriv(s: Complex64, m: u32, opts: &EvaluationOptions) -> Result<Complex64> {
    if m == 0 {
        return zeta(s, opts);
    }
    check_height(s)?;
    let r = opts.derivative_radius;
    if (s - 1.0).norm() <= 1.5 * r {
        return Err(Error::Pole {
            re: 1.0,
            im: 0.0,
            context: format!("derivative circle of radius {r} around {s} reaches the pole"),
        });
    }
    cauchy_derivative(|z| zeta(z, opts), s, m, r, opts.derivative_nodes)
}

/// m-th derivative of `ζ(s) − 1/(s−1)`; valid everywhere including near 1.
pub fn zeta_regular_deriv(s: Complex64, m: u32, opts: &EvaluationOptions) -> Result<Complex64> {
    if m == 0 {
        return zeta_regular(s, opts);
    }
    cauchy_derivative(
        |z| zeta_regular(z, opts),
        s,
        m,
        opts.derivative_radius,
        opts.derivative_nodes,
    )
}

/// `ζ′/ζ(s)`, computed from the regular part so that points close to the pole
/// are handled without cancellation.
pub fn zeta_log_derivative(s: Complex64, opts: &EvaluationOptions) -> Result<Complex64> {
    let d = s - 1.0;
    if d == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole {
            re: 1.0,
            im: 0.0,
            context: "zeta_log_derivative".into(),
        });
    }
    let value = zeta_regular(s, opts)? + d.inv();
    let slope = zeta_regular_deriv(s, 1, opts)? - (d * d).inv();
    if value == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole {
            re: s.re,
            im: s.im,
            context: "zeta_log_derivative at a zero of zeta".into(),
        });
    }
    Ok(slope / value)
}

/// Anything that can supply ζ values to the main-term and empirical code.
pub trait ZetaOracle: Sync {
    fn zeta(&self, s: Complex64) -> Result<Complex64>;
    fn zeta_deriv(&self, s: Complex64, m: u32) -> Result<Complex64>;
    fn zeta_log_derivative(&self, s: Complex64) -> Result<Complex64>;
}

/// The Euler–Maclaurin engine bundled with its options.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ZetaEngine {
    opts: EvaluationOptions,
}

impl ZetaEngine {
    pub fn new(opts: EvaluationOptions) -> Result<Self> {
        opts.validate()?;
        Ok(Self { opts })
    }

    pub fn options(&self) -> &EvaluationOptions {
        &self.opts
    }

    pub fn zeta_regular(&self, s: Complex64) -> Result<Complex64> {
        zeta_regular(s, &self.opts)
    }

    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        hardy_z(t, &self.opts)
    }
}

impl ZetaOracle for ZetaEngine {
    fn zeta(&self, s: Complex64) -> Result<Complex64> {
        zeta(s, &self.opts)
    }

    fn zeta_deriv(&self, s: Complex64, m: u32) -> Result<Complex64> {
        zeta_deriv(s, m, &self.opts)
    }

    fn zeta_log_derivative(&self, s: Complex64) -> Result<Complex64> {
        zeta_log_derivative(s, &self.opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn opts() -> EvaluationOptions {
        EvaluationOptions::default()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn basel() {
        let z = zeta(c(2.0, 0.0), &opts()).unwrap();
        assert!((z.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    }

    #[test]
    fn value_at_zero() {
        let z = zeta(c(0.0, 0.0), &opts()).unwrap();
        assert!((z - c(-0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn reference_values() {
        // mpmath.zeta at 30 digits
        let z = zeta(c(0.3, 7.0), &opts()).unwrap();
        assert!(close(
            z,
            c(1.017_131_498_895_093_7, 0.439_444_006_896_340_6),
            1e-13
        ));
        let d = zeta_deriv(c(2.0, 0.0), 1, &opts()).unwrap();
        assert!(close(d, c(-0.937_548_254_315_843_8, 0.0), 1e-12));
        let d3 = zeta_deriv(c(0.3, 7.0), 3, &opts()).unwrap();
        assert!(close(
            d3,
            c(0.053_513_547_175_274_83, -0.026_092_510_629_858_87),
            1e-10
        ));
        let rho = c(0.5, 14.134_725_141_734_694);
        assert!(zeta(rho, &opts()).unwrap().norm() < 1e-9);
        let d1 = zeta_deriv(rho, 1, &opts()).unwrap();
        assert!(close(
            d1,
            c(0.783_296_511_867_031_1, 0.124_699_829_748_170_57),
            1e-11
        ));
    }

    #[test]
    fn regular_part_at_one_is_euler_gamma() {
        let g = zeta_regular(c(1.0, 0.0), &opts()).unwrap();
        assert!((g.re - 0.577_215_664_901_532_9).abs() < 1e-14);
        let near = c(1.0 + 1e-7, 0.0);
        let direct = zeta(near, &opts()).unwrap() - (near - 1.0).inv();
        assert!((zeta_regular(near, &opts()).unwrap() - direct).norm() < 1e-6);
    }

    #[test]
    fn log_derivative_near_pole() {
        // −ζ′/ζ(1+α) = 1/α − γ_0 + O(α)
        let a = 2f64.powi(-20);
        let v = zeta_log_derivative(c(1.0 + a, 0.0), &opts()).unwrap();
        assert!(
            (-v.re - (1.0 / a - 0.577_215_664_901_532_9)).abs() < 1e-5,
            "{v}"
        );
    }

    #[test]
    fn rejects_pole_and_height() {
        assert!(matches!(
            zeta(c(1.0, 0.0), &opts()),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            zeta(c(0.5, 2e5), &opts()),
            Err(Error::HeightOutOfRange(_))
        ));
        assert!(matches!(
            zeta_deriv(c(1.05, 0.0), 1, &opts()),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn options_validation() {
        let mut o = opts();
        o.bernoulli_order = 7;
        assert!(o.validate().is_err());
        o.bernoulli_order = 32;
        assert!(o.validate().is_err());
        o = opts();
        o.derivative_radius = 0.25;
        assert!(o.validate().is_err());
        assert!(opts().validate().is_ok());
    }

    #[test]
    fn hardy_reference_values() {
        // mpmath.siegelz
        for (t, expected) in [
            (20.0, 1.147_842_412_185_197_3),
            (100.0, 2.692_697_056_664_463_5),
            (500.0, 1.472_447_851_055_085_3),
            (1000.0, 0.997_794_637_521_586_6),
        ] {
            let z = hardy_z(t, &opts()).unwrap();
            assert!((z - expected).abs() < 1e-10, "t = {t}: {z}");
        }
        assert!(hardy_z(14.0, &opts()).unwrap() * hardy_z(14.3, &opts()).unwrap() < 0.0);
    }
}
