//! Sums over actual zeros and their comparison with main-term predictions.
//!
//! Every sum runs over `ρ = 1/2 + iγ`, `0 < γ ≤ T`, in ascending order of γ.
//! Per-zero terms are evaluated in parallel and reduced sequentially with
//! compensated summation, so results do not depend on the thread count.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{CoefficientSequence, TruncatedTau};
use crate::error::{domain, Error, Result};
use crate::numeric::{complex_pair, format_significant, Polynomial};
use crate::summation::{ComplexSum, NeumaierSum};
use crate::zeros::ZeroList;
use crate::zeta::ZetaOracle;

/// Floor on `|predicted|` in relative deviations.
pub const DEVIATION_FLOOR: f64 = 1e-30;
/// Largest support bound produced by [`tau_xi_coeffs`].
pub const MAX_TAU_SUPPORT: usize = 1_000_000;
/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

fn point(gamma: f64) -> Complex64 {
    Complex64::new(0.5, gamma)
}

/// `Σ_{n≤N} c(n) n^{−s}`.
pub fn dirichlet_poly_eval(coeffs: &CoefficientSequence, s: Complex64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for (n, c) in coeffs.iter() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc.add(if n == 1 {
            c
        } else {
            c * (-s * (n as f64).ln()).exp()
        });
    }
    acc.value()
}

fn usable_zeros(zeros: &ZeroList, height: f64) -> Result<&[f64]> {
    if !zeros.is_validated() {
        return Err(Error::ZeroList("zero list has not been validated".into()));
    }
    if !(height > 0.0) {
        return Err(domain(format!("height must be positive, got {height}")));
    }
    if zeros.height_covered() < height {
        return Err(Error::ZeroList(format!(
            "zero list covers heights up to {} but T = {height} was requested",
            zeros.height_covered()
        )));
    }
    Ok(zeros.up_to(height))
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::GridMismatch("height grid is empty".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::GridMismatch(format!(
                "height grid not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// `X(ρ) Y(1−ρ)` for each ordinate.
fn polynomial_weights(
    gammas: &[f64],
    x: &CoefficientSequence,
    y: &CoefficientSequence,
) -> Vec<Complex64> {
    gammas
        .par_iter()
        .map(|&g| {
            let rho = point(g);
            dirichlet_poly_eval(x, rho) * dirichlet_poly_eval(y, 1.0 - rho)
        })
        .collect()
}

fn ordered_sum(terms: &[Complex64]) -> Complex64 {
    let mut acc = ComplexSum::new();
    for &t in terms {
        acc.add(t);
    }
    acc.value()
}

/// Running compensated sums of `terms` read off at each `grid` height.
fn prefix_at<T: Copy>(
    gammas: &[f64],
    terms: &[T],
    grid: &[f64],
    mut add: impl FnMut(T),
    mut read: impl FnMut() -> T,
) -> Vec<T> {
    let mut out = Vec::with_capacity(grid.len());
    let mut i = 0;
    for &t in grid {
        while i < gammas.len() && gammas[i] <= t {
            add(terms[i]);
            i += 1;
        }
        out.push(read());
    }
    out
}

/// Per-zero terms `ζ(ρ+α) X(ρ) Y(1−ρ)` for `0 < γ ≤ T`, in zero order.
pub fn s_alpha_terms<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Vec<Complex64>> {
    let gammas = usable_zeros(zeros, height)?;
    let weights = polynomial_weights(gammas, x, y);
    let values = gammas
        .par_iter()
        .map(|&g| oracle.zeta(point(g) + alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .into_iter()
        .zip(weights)
        .map(|(z, w)| z * w)
        .collect())
}

/// `S(α, T, X, Y) = Σ_{0<γ≤T} ζ(ρ+α) X(ρ) Y(1−ρ)`.
pub fn s_alpha_sum<O: ZetaOracle + ?Sized>(
    alpha: Complex64,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Complex64> {
    Ok(ordered_sum(&s_alpha_terms(
        alpha, height, x, y, zeros, oracle,
    )?))
}

/// Per-zero terms `ζ^{(m)}(ρ) X(ρ) Y(1−ρ)` for `0 < γ ≤ T`, in zero order.
pub fn s_m_terms<O: ZetaOracle + ?Sized>(
    m: u32,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Err(domain("s_m_sum requires m >= 1"));
    }
    let gammas = usable_zeros(zeros, height)?;
    let weights = polynomial_weights(gammas, x, y);
    let values = gammas
        .par_iter()
        .map(|&g| oracle.zeta_deriv(point(g), m))
        .collect::<Result<Vec<_>>>()?;
    Ok(values
        .into_iter()
        .zip(weights)
        .map(|(z, w)| z * w)
        .collect())
}

/// `S_m(T, X, Y) = Σ_{0<γ≤T} ζ^{(m)}(ρ) X(ρ) Y(1−ρ)`.
pub fn s_m_sum<O: ZetaOracle + ?Sized>(
    m: u32,
    height: f64,
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Complex64> {
    Ok(ordered_sum(&s_m_terms(m, height, x, y, zeros, oracle)?))
}

/// `S_m` at every height of a strictly increasing grid. Each entry equals
/// [`s_m_sum`] at that height bit for bit.
pub fn s_m_series<O: ZetaOracle + ?Sized>(
    m: u32,
    grid: &[f64],
    x: &CoefficientSequence,
    y: &CoefficientSequence,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Vec<Complex64>> {
    check_grid(grid)?;
    let top = grid[grid.len() - 1];
    let terms = s_m_terms(m, top, x, y, zeros, oracle)?;
    let gammas = zeros.up_to(top);
    let acc = std::cell::RefCell::new(ComplexSum::new());
    Ok(prefix_at(
        gammas,
        &terms,
        grid,
        |t| acc.borrow_mut().add(t),
        || acc.borrow().value(),
    ))
}

/// Per-zero terms `|ζ^{(m)}(ρ)|^{2k}`.
pub fn moment_terms<O: ZetaOracle + ?Sized>(
    m: u32,
    k: u32,
    height: f64,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Vec<f64>> {
    if m == 0 || k == 0 {
        return Err(domain("moment_sum requires m >= 1 and k >= 1"));
    }
    let gammas = usable_zeros(zeros, height)?;
    gammas
        .par_iter()
        .map(|&g| {
            oracle
                .zeta_deriv(point(g), m)
                .map(|z| z.norm_sqr().powi(k as i32))
        })
        .collect()
}

/// `Σ_{0<γ≤T} |ζ^{(m)}(ρ)|^{2k}`.
pub fn moment_sum<O: ZetaOracle + ?Sized>(
    m: u32,
    k: u32,
    height: f64,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for t in moment_terms(m, k, height, zeros, oracle)? {
        acc.add(t);
    }
    Ok(acc.value())
}

/// [`moment_sum`] at every height of a strictly increasing grid.
pub fn moment_series<O: ZetaOracle + ?Sized>(
    m: u32,
    k: u32,
    grid: &[f64],
    zeros: &ZeroList,
    oracle: &O,
) -> Result<Vec<f64>> {
    check_grid(grid)?;
    let top = grid[grid.len() - 1];
    let terms = moment_terms(m, k, top, zeros, oracle)?;
    let gammas = zeros.up_to(top);
    let acc = std::cell::RefCell::new(NeumaierSum::new());
    Ok(prefix_at(
        gammas,
        &terms,
        grid,
        |t| acc.borrow_mut().add(t),
        || acc.borrow().value(),
    ))
}

/// Mollifier weights `x(n) = μ(n) P(log(N/n)/log N)` for `n ≤ N`.
///
/// `P` must satisfy `P(0) = 0` and `P(1) = 1`; for `N = 1` the result is δ_1.
pub fn mollifier_coeffs(bound: usize, p: &Polynomial) -> Result<CoefficientSequence> {
    if bound == 0 {
        return Err(domain("mollifier needs N >= 1"));
    }
    if p.eval(0.0).abs() > 1e-12 || (p.eval(1.0) - 1.0).abs() > 1e-12 {
        return Err(domain(format!(
            "mollifier polynomial must satisfy P(0) = 0 and P(1) = 1, got P(0) = {}, P(1) = {}",
            p.eval(0.0),
            p.eval(1.0)
        )));
    }
    let label = format!("mollifier(N={bound})");
    if bound == 1 {
        return Ok(CoefficientSequence::delta().with_label(label));
    }
    let log_n = (bound as f64).ln();
    CoefficientSequence::from_fn(label, bound, |n| {
        let mu = crate::arith::mobius(n).unwrap_or(0);
        if mu == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = ((bound as f64) / n as f64).ln() / log_n;
        Complex64::new(f64::from(mu) * p.eval(u), 0.0)
    })
}

/// `τ_k(n, ξ)`, the number of ways to write `n` as an ordered product of
/// `k` factors each at most `ξ`; the coefficients of `C_ξ(s)^k` with
/// `C_ξ(s) = Σ_{n≤ξ} n^{−s}`.
pub fn tau_xi_coeffs(k: u32, xi: f64) -> Result<CoefficientSequence> {
    if k == 0 {
        return Err(domain("tau_xi requires k >= 1"));
    }
    if !(xi >= 1.0 && xi.is_finite()) {
        return Err(domain(format!("tau_xi requires xi >= 1, got {xi}")));
    }
    let base = xi.floor() as usize;
    let bound = (base as u128).pow(k);
    if bound > MAX_TAU_SUPPORT as u128 {
        return Err(domain(format!(
            "tau_xi support floor(xi)^k = {bound} exceeds {MAX_TAU_SUPPORT}"
        )));
    }
    let mut counter = TruncatedTau::new(xi);
    CoefficientSequence::from_fn(format!("tau_{k}(xi={xi})"), bound as usize, |n| {
        Complex64::new(counter.count(n, k) as f64, 0.0)
    })
}

/// Configuration of the Hölder lower bound for `Σ |ζ^{(m)}(ρ)|^{2k}` built
/// from `C_ξ(s)`, with `N = ξ^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentConfig {
    pub derivative_order: u32,
    pub moment_exponent: u32,
    pub xi: f64,
    /// Optional mollifier shape carried along for reporting.
    pub mollifier: Option<Polynomial>,
}

impl MomentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.derivative_order == 0 || self.moment_exponent == 0 {
            return Err(domain("moment configuration needs m >= 1 and k >= 1"));
        }
        if !(self.xi >= 1.0) {
            return Err(domain(format!("xi must be >= 1, got {}", self.xi)));
        }
        if let Some(p) = &self.mollifier {
            mollifier_coeffs(2, p)?;
        }
        Ok(())
    }

    /// `N = ξ^k`
    pub fn support_bound(&self) -> f64 {
        self.xi.powi(self.moment_exponent as i32)
    }

    /// `(x, y) = (τ_{k−1}(·, ξ), τ_k(·, ξ))`, with `x = δ_1` when `k = 1`.
    pub fn coefficients(&self) -> Result<(CoefficientSequence, CoefficientSequence)> {
        self.validate()?;
        let k = self.moment_exponent;
        let x = if k == 1 {
            CoefficientSequence::delta()
        } else {
            tau_xi_coeffs(k - 1, self.xi)?
        };
        Ok((x, tau_xi_coeffs(k, self.xi)?))
    }
}

/// `Σ_1 = Σ ζ^{(m)}(ρ) C_ξ(ρ)^{k−1} C_ξ(1−ρ)^k`, `Σ_2 = Σ |C_ξ(ρ)|^{2k}` and
/// the Hölder bound `|Σ_1|^{2k} / Σ_2^{2k−1} ≤ Σ |ζ^{(m)}(ρ)|^{2k}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentDiagnostics {
    pub height: f64,
    #[serde(with = "complex_pair")]
    pub sigma1: Complex64,
    pub sigma2: f64,
    pub holder_bound: f64,
    pub moment: f64,
}

pub fn moment_diagnostics<O: ZetaOracle + ?Sized>(
    config: &MomentConfig,
    height: f64,
    zeros: &ZeroList,
    oracle: &O,
) -> Result<MomentDiagnostics> {
    let (x, y) = config.coefficients()?;
    let m = config.derivative_order;
    let k = config.moment_exponent;
    let sigma1 = s_m_sum(m, height, &x, &y, zeros, oracle)?;
    let c_xi = tau_xi_coeffs(1, config.xi)?;
    let gammas = usable_zeros(zeros, height)?;
    let powers: Vec<f64> = gammas
        .par_iter()
        .map(|&g| {
            dirichlet_poly_eval(&c_xi, point(g))
                .norm_sqr()
                .powi(k as i32)
        })
        .collect();
    let mut sigma2 = NeumaierSum::new();
    for p in powers {
        sigma2.add(p);
    }
    let sigma2 = sigma2.value();
    let two_k = 2 * k as i32;
    let holder_bound = if sigma2 > 0.0 {
        sigma1.norm().powi(two_k) / sigma2.powi(two_k - 1)
    } else {
        0.0
    };
    Ok(MomentDiagnostics {
        height,
        sigma1,
        sigma2,
        holder_bound,
        moment: moment_sum(m, k, height, zeros, oracle)?,
    })
}

/// One row of a [`ComparisonReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub height: f64,
    #[serde(with = "complex_pair")]
    pub empirical: Complex64,
    #[serde(with = "complex_pair")]
    pub predicted: Complex64,
    #[serde(with = "complex_pair")]
    pub ratio: Complex64,
    pub deviation: f64,
}

/// Empirical sums against predictions on a height grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub configuration: BTreeMap<String, String>,
    pub rows: Vec<ComparisonRow>,
}

const CSV_HEADER: [&str; 8] = [
    "T",
    "emp_re",
    "emp_im",
    "pred_re",
    "pred_im",
    "ratio_re",
    "ratio_im",
    "deviation",
];

/// Pairs empirical and predicted series over the same grid.
///
/// `ratio = empirical / predicted` and
/// `deviation = |empirical − predicted| / max(|predicted|, ε)`, where the
/// ratio uses the same floor on `|predicted|`.
pub fn compare(
    grid: &[f64],
    empirical: &[Complex64],
    predicted: &[Complex64],
    configuration: BTreeMap<String, String>,
) -> Result<ComparisonReport> {
    check_grid(grid)?;
    if empirical.len() != grid.len() || predicted.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} heights, {} empirical values, {} predicted values",
            grid.len(),
            empirical.len(),
            predicted.len()
        )));
    }
    let rows = grid
        .iter()
        .zip(empirical.iter().zip(predicted))
        .map(|(&height, (&e, &p))| {
            let scale = p.norm().max(DEVIATION_FLOOR);
            let ratio = e * p.conj() / (scale * scale);
            ComparisonRow {
                height,
                empirical: e,
                predicted: p,
                ratio,
                deviation: (e - p).norm() / scale,
            }
        })
        .collect();
    Ok(ComparisonReport {
        configuration,
        rows,
    })
}

impl ComparisonReport {
    pub fn heights(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.height).collect()
    }

    pub fn deviations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.deviation).collect()
    }

    /// CSV with 12 significant digits per number.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let fields = [
                r.height,
                r.empirical.re,
                r.empirical.im,
                r.predicted.re,
                r.predicted.im,
                r.ratio.re,
                r.ratio.im,
                r.deviation,
            ];
            w.write_record(fields.iter().map(|&v| format_significant(v, CSV_DIGITS)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    /// Reads rows written by [`ComparisonReport::write_csv`]; the
    /// configuration is not part of the CSV and comes back empty.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::Parse {
                line: 1,
                message: format!("unexpected CSV header {header:?}"),
            });
        }
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let v = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 2,
                    message: e.to_string(),
                })?;
            if v.len() != CSV_HEADER.len() {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("expected {} fields, got {}", CSV_HEADER.len(), v.len()),
                });
            }
            rows.push(ComparisonRow {
                height: v[0],
                empirical: Complex64::new(v[1], v[2]),
                predicted: Complex64::new(v[3], v[4]),
                ratio: Complex64::new(v[5], v[6]),
                deviation: v[7],
            });
        }
        Ok(Self {
            configuration: BTreeMap::new(),
            rows,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dirichlet_polynomial_basics() {
        let d = CoefficientSequence::delta();
        assert_eq!(dirichlet_poly_eval(&d, c(0.5, 30.0)), c(1.0, 0.0));
        let x = CoefficientSequence::from_real("x", &[1.0, -2.0, 0.5]).unwrap();
        assert!((dirichlet_poly_eval(&x, c(0.0, 0.0)) - c(-0.5, 0.0)).norm() < 1e-15);
        let rho = c(0.5, 21.0);
        let a = dirichlet_poly_eval(&x, rho);
        let b = dirichlet_poly_eval(&x, 1.0 - rho);
        assert!((a.conj() - b).norm() < 1e-14);
    }

    #[test]
    fn mollifier_examples() {
        let linear = Polynomial::new(vec![0.0, 1.0]);
        let x = mollifier_coeffs(4, &linear).unwrap();
        assert_eq!(x.get(1), c(1.0, 0.0));
        assert!((x.get(2) - c(-0.5, 0.0)).norm() < 1e-15);
        assert_eq!(x.get(4), c(0.0, 0.0));
        assert_eq!(x.get(5), c(0.0, 0.0));
        assert!(mollifier_coeffs(4, &Polynomial::new(vec![0.1, 0.9])).is_err());
        assert!(mollifier_coeffs(4, &Polynomial::new(vec![0.0, 2.0])).is_err());
        assert_eq!(mollifier_coeffs(1, &linear).unwrap().support_bound(), 1);
    }

    #[test]
    fn tau_xi_examples() {
        let ones = tau_xi_coeffs(1, 5.5).unwrap();
        assert_eq!(ones.support_bound(), 5);
        assert!(ones.values().iter().all(|&v| v == c(1.0, 0.0)));
        let t2 = tau_xi_coeffs(2, 2.0).unwrap();
        assert_eq!(t2.support_bound(), 4);
        assert_eq!(t2.get(4), c(1.0, 0.0));
        assert_eq!(t2.get(3), c(0.0, 0.0));
        assert!(tau_xi_coeffs(3, 200.0).is_err());
        assert!(tau_xi_coeffs(0, 2.0).is_err());
    }

    #[test]
    fn compare_guards() {
        let grid = [1.0, 2.0];
        let e = [c(1.0, 1.0), c(2.0, 0.0)];
        let r = compare(&grid, &e, &e, BTreeMap::new()).unwrap();
        assert_eq!(r.deviations(), vec![0.0, 0.0]);
        assert!((r.rows[0].ratio - c(1.0, 0.0)).norm() < 1e-15);
        let zero = [c(0.0, 0.0); 2];
        let r = compare(&grid, &e, &zero, BTreeMap::new()).unwrap();
        assert!(r.deviations().iter().all(|d| d.is_finite() && *d > 0.0));
        assert!(compare(&[2.0, 1.0], &e, &e, BTreeMap::new()).is_err());
        assert!(compare(&grid, &e[..1], &e, BTreeMap::new()).is_err());
    }

    #[test]
    fn csv_round_trip_at_printed_precision() {
        let grid = [200.0, 500.0];
        let e = [c(1.234_567_890_123_456, -0.5), c(1e-20, 3.0)];
        let p = [c(1.2, 0.0), c(0.0, 0.0)];
        let r = compare(&grid, &e, &p, BTreeMap::new()).unwrap();
        let text = r.to_csv_string().unwrap();
        assert!(text.starts_with("T,emp_re,emp_im,pred_re,pred_im,ratio_re,ratio_im,deviation\n"));
        let back = ComparisonReport::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.to_csv_string().unwrap(), text);
    }
}
