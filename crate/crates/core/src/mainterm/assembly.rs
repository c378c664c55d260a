//! Assembled main terms for `S(α, T, X, Y)` and `S_m(T, X, Y)`.

use std::f64::consts::{E, PI};

use log::warn;
use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use super::curly_f::CurlyF;
use super::polys::{a_m, b_m, poly_p, poly_q};
use crate::arith::{
    dirichlet_convolve, gcd, log_power_sequence, power_sequence, CoefficientSequence,
};
use crate::error::{domain, Result};
use crate::numeric::complex_pair;
use crate::summation::ComplexSum;
use crate::zeta::ZetaOracle;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Shifts and derivative order describing one main-term evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftParameters {
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    #[serde(with = "complex_pair")]
    pub g_shift: Complex64,
    pub derivative_order: usize,
}

impl ShiftParameters {
    pub fn shift(alpha: Complex64) -> Self {
        Self {
            alpha,
            g_shift: ZERO,
            derivative_order: 0,
        }
    }

    pub fn derivative(m: usize) -> Self {
        Self {
            alpha: ZERO,
            g_shift: ZERO,
            derivative_order: m,
        }
    }

    /// The admissible radius `1/(15 log T)` for α at height `T`.
    pub fn alpha_bound(height: f64) -> f64 {
        1.0 / (15.0 * height.ln())
    }

    pub fn check_against_height(&self, height: f64) -> Result<()> {
        let bound = Self::alpha_bound(height);
        if self.alpha.norm() > bound * (1.0 + 1e-12) {
            return Err(domain(format!(
                "|alpha| = {} exceeds 1/(15 log T) = {bound} at T = {height}",
                self.alpha.norm()
            )));
        }
        Ok(())
    }
}

/// A main-term prediction split into its named pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermReport {
    pub height: f64,
    /// `log(T/2π)`
    pub script_l: f64,
    pub pieces: Vec<(String, Complex64)>,
    pub total: Complex64,
    pub parameters: ShiftParameters,
    pub x_label: String,
    pub y_label: String,
    pub support_bound: usize,
}

impl MainTermReport {
    fn assemble(
        height: f64,
        pieces: Vec<(&str, Complex64)>,
        parameters: ShiftParameters,
        x: &CoefficientSequence,
        y: &CoefficientSequence,
    ) -> Self {
        let mut total = ComplexSum::new();
        for (_, v) in &pieces {
            total.add(*v);
        }
        Self {
            height,
            script_l: (height / (2.0 * PI)).ln(),
            pieces: pieces
                .into_iter()
                .map(|(n, v)| (n.to_string(), v))
                .collect(),
            total: total.value(),
            parameters,
            x_label: x.label().to_string(),
            y_label: y.label().to_string(),
            support_bound: x.support_bound().max(y.support_bound()),
        }
    }

    pub fn piece(&self, name: &str) -> Option<Complex64> {
        self.pieces.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Pair(Complex64);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        complex_pair::serialize(&self.0, s)
    }
}

struct Pieces<'a>(&'a [(String, Complex64)]);

impl Serialize for Pieces<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (name, v) in self.0 {
            map.serialize_entry(name, &Pair(*v))?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Coefficients<'a> {
    x: &'a str,
    y: &'a str,
    support_bound: usize,
}

impl Serialize for MainTermReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MainTermReport", 6)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("script_l", &self.script_l)?;
        st.serialize_field("pieces", &Pieces(&self.pieces))?;
        st.serialize_field("total", &Pair(self.total))?;
        st.serialize_field("parameters", &self.parameters)?;
        st.serialize_field(
            "coefficients",
            &Coefficients {
                x: &self.x_label,
                y: &self.y_label,
                support_bound: self.support_bound,
            },
        )?;
        st.end()
    }
}

fn check_setup(height: f64, x: &CoefficientSequence, y: &CoefficientSequence) -> Result<usize> {
    if !(height >= 2.0) {
        return Err(domain(format!("main terms require T >= 2, got {height}")));
    }
    let n = x.support_bound().max(y.support_bound());
    if n as f64 >= height.powf(0.49) {
        warn!("support bound N = {n} is not small against T = {height} (N >= T^0.49)");
    }
    Ok(n)
}

/// `Σ_{n≤N} a(n) y(n) / n`
fn weighted_sum(a: &CoefficientSequence, y: &CoefficientSequence, n: usize) -> Complex64 {
    let mut acc = ComplexSum::new();
    for i in 1..=n {
        acc.add(a.get(i) * y.get(i) / i as f64);
    }
    acc.value()
}

/// Main term of `S(α, T, X, Y) = Σ_{0<γ≤T} ζ(ρ+α) X(ρ) Y(1−ρ)`.
///
/// Pieces, with `s_{−α}(n) = n^{−α}`:
///
/// * `log_convolution`: `(T/2π) log(T/2πe) Σ (s_{−α}∗x)(n) y(n)/n`
/// * `von_mangoldt_convolution`: `−(T/2π) Σ (Λ∗s_{−α}∗x)(n) y(n)/n`
/// * `curly_f_sum`: `Σ_g Σ_{h,k≤N/g, (h,k)=1} y(gh) x(gk)/(gkh) F_{α,h,k}(T)`
///
/// All convolutions are truncated at the support bound `N`.
pub fn theorem1_main_term<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    oracle: &O,
) -> Result<MainTermReport> {
    let n = check_setup(height, x, y)?;
    let params = ShiftParameters::shift(alpha);
    params.check_against_height(height)?;
    let pre = height / (2.0 * PI);

    let sx = dirichlet_convolve(&power_sequence(-alpha, n)?, x, n)?;
    let lsx = dirichlet_convolve(&CoefficientSequence::von_mangoldt(n)?, &sx, n)?;
    let log_piece = weighted_sum(&sx, y, n) * (pre * (height / (2.0 * PI * E)).ln());
    let lambda_piece = -weighted_sum(&lsx, y, n) * pre;

    let f = CurlyF::new(alpha, height, oracle)?;
    let mut off = ComplexSum::new();
    for g in 1..=n {
        for h in 1..=n / g {
            let yh = y.get(g * h);
            if yh == ZERO {
                continue;
            }
            for k in 1..=n / g {
                let xk = x.get(g * k);
                if xk == ZERO || gcd(h as u64, k as u64) != 1 {
                    continue;
                }
                off.add(yh * xk / (g * k * h) as f64 * f.value(h as u64, k as u64)?);
            }
        }
    }

    Ok(MainTermReport::assemble(
        height,
        vec![
            ("log_convolution", log_piece),
            ("von_mangoldt_convolution", lambda_piece),
            ("curly_f_sum", off.value()),
        ],
        params,
        x,
        y,
    ))
}

/// Main term of `S_m(T, X, Y) = Σ_{0<γ≤T} ζ^{(m)}(ρ) X(ρ) Y(1−ρ)` for `m ≥ 1`.
///
/// Pieces, with `L = log(T/2π)`:
///
/// * `polynomial`: `((−1)^{m+1}/(m+1)) (T/2π) Σ_g Σ_h y(gh) x(g)/(gh) (P_{m+1}(L) − Q_{m+1}(log h))`
/// * `log_convolution`: `(−1)^m (T/2π) log(T/2πe) Σ (log^m∗x)(n) y(n)/n`
/// * `von_mangoldt_convolution`: `(−1)^{m+1} (T/2π) Σ (Λ∗log^m∗x)(n) y(n)/n`
/// * `prime_factor_sum`: `(T/2π) Σ_g Σ_{h,k≤N/g, k≥2, (h,k)=1} y(gh) x(gk)/(gkh) ((−1)^{m+1} A_m(h,k) + B_m(k,T))`
pub fn corollary1_main_term(
    m: usize,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
) -> Result<MainTermReport> {
    if m == 0 {
        return Err(domain(
            "corollary1_main_term requires m >= 1; use theorem1_main_term at alpha = 0",
        ));
    }
    let n = check_setup(height, x, y)?;
    let pre = height / (2.0 * PI);
    let l = (height / (2.0 * PI)).ln();
    let odd = if m % 2 == 1 { 1.0 } else { -1.0 };

    let p_value = poly_p(m)?.eval(l);
    let q = poly_q(m)?;
    let mut poly = ComplexSum::new();
    for g in 1..=n {
        let xg = x.get(g);
        if xg == ZERO {
            continue;
        }
        for h in 1..=n / g {
            let yh = y.get(g * h);
            if yh != ZERO {
                poly.add(yh * xg / (g * h) as f64 * (p_value - q.eval((h as f64).ln())));
            }
        }
    }
    let poly_piece = poly.value() * (odd / (m as f64 + 1.0) * pre);

    let lx = dirichlet_convolve(&log_power_sequence(m as u32, n)?, x, n)?;
    let llx = dirichlet_convolve(&CoefficientSequence::von_mangoldt(n)?, &lx, n)?;
    let log_piece = weighted_sum(&lx, y, n) * (-odd * pre * (height / (2.0 * PI * E)).ln());
    let lambda_piece = weighted_sum(&llx, y, n) * (odd * pre);

    let mut off = ComplexSum::new();
    for g in 1..=n {
        for h in 1..=n / g {
            let yh = y.get(g * h);
            if yh == ZERO {
                continue;
            }
            for k in 2..=n / g {
                let xk = x.get(g * k);
                if xk == ZERO || gcd(h as u64, k as u64) != 1 {
                    continue;
                }
                let weight = odd * a_m(m, h as u64, k as u64)? + b_m(m, k as u64, height)?;
                off.add(yh * xk / (g * k * h) as f64 * weight);
            }
        }
    }
    let off_piece = off.value() * pre;

    Ok(MainTermReport::assemble(
        height,
        vec![
            ("polynomial", poly_piece),
            ("log_convolution", log_piece),
            ("von_mangoldt_convolution", lambda_piece),
            ("prime_factor_sum", off_piece),
        ],
        ShiftParameters::derivative(m),
        x,
        y,
    ))
}
