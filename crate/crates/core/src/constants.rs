//! Laurent coefficients of ζ and ζ′/ζ about 1, Stirling numbers of the second
//! kind and polylogarithms of negative order.
//!
//! ```text
//!     ζ(1−α)        = Σ_{u≥−1} γ̃_u α^u,    γ̃_{−1} = −1,  γ̃_u = γ_u/u!
//!     −ζ′/ζ(1+α)    = 1/α + Σ_{n≥0} η_n α^n
//! ```

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numeric::{bernoulli_even, factorial};

/// Highest Stieltjes index carried by the shared table.
pub const DEFAULT_MAX_ORDER: usize = 12;

/// Truncation point of the partial sums behind the Stieltjes constants.
const LIMIT_SUM_TERMS: u32 = 8;
/// Number of Bernoulli corrections applied at the truncation point.
const LIMIT_SUM_CORRECTIONS: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTable {
    stieltjes: Vec<f64>,
    /// γ̃_{−1}, γ̃_0, …, γ̃_U
    tilde_gamma: Vec<f64>,
    eta: Vec<f64>,
    max_order: usize,
    precision_note: String,
}

impl ExpansionTable {
    pub fn new(max_order: usize) -> Result<Self> {
        if max_order > DEFAULT_MAX_ORDER {
            return Err(Error::OrderOverflow {
                requested: max_order,
                max: DEFAULT_MAX_ORDER,
            });
        }
        let stieltjes: Vec<f64> = (0..=max_order).map(stieltjes_limit_sum).collect();
        let mut tilde_gamma = Vec::with_capacity(max_order + 2);
        tilde_gamma.push(-1.0);
        tilde_gamma.extend(
            stieltjes
                .iter()
                .enumerate()
                .map(|(u, g)| g / factorial(u as u32)),
        );
        let eta = eta_recursion(&stieltjes);
        Ok(Self {
            stieltjes,
            tilde_gamma,
            eta,
            max_order,
            precision_note: format!(
                "double precision; Euler-Maclaurin limit sums with M = {LIMIT_SUM_TERMS} \
                 and {LIMIT_SUM_CORRECTIONS} Bernoulli corrections"
            ),
        })
    }

    /// The process-wide table of order [`DEFAULT_MAX_ORDER`].
    pub fn shared() -> &'static ExpansionTable {
        static TABLE: OnceLock<ExpansionTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            ExpansionTable::new(DEFAULT_MAX_ORDER).expect("default order is supported")
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn precision_note(&self) -> &str {
        &self.precision_note
    }

    pub fn stieltjes(&self, u: usize) -> Result<f64> {
        self.stieltjes.get(u).copied().ok_or(self.overflow(u))
    }

    pub fn tilde_gamma(&self, u: i32) -> Result<f64> {
        if u < -1 {
            return Err(domain(format!("tilde_gamma index must be >= -1, got {u}")));
        }
        self.tilde_gamma
            .get((u + 1) as usize)
            .copied()
            .ok_or(self.overflow(u as usize))
    }

    pub fn eta(&self, n: usize) -> Result<f64> {
        self.eta.get(n).copied().ok_or(self.overflow(n))
    }

    fn overflow(&self, requested: usize) -> Error {
        Error::OrderOverflow {
            requested,
            max: self.max_order,
        }
    }
}

/// γ_u from the shared table.
pub fn stieltjes_gamma(u: usize) -> Result<f64> {
    ExpansionTable::shared().stieltjes(u)
}

/// γ̃_u from the shared table.
pub fn tilde_gamma(u: i32) -> Result<f64> {
    ExpansionTable::shared().tilde_gamma(u)
}

/// η_n from the shared table.
pub fn eta(n: usize) -> Result<f64> {
    ExpansionTable::shared().eta(n)
}

/// `γ_n = lim_M (Σ_{k≤M} log^n k / k − log^{n+1} M/(n+1))`, with the limit
/// replaced by Euler–Maclaurin corrections at `M`.
fn stieltjes_limit_sum(n: usize) -> f64 {
    let m = LIMIT_SUM_TERMS;
    let mf = f64::from(m);
    let ln_m = mf.ln();
    let f = |x: f64| x.ln().powi(n as i32) / x;

    let mut acc = (1..=m).map(|k| f(f64::from(k))).sum::<f64>();
    acc -= ln_m.powi(n as i32 + 1) / (n as f64 + 1.0);
    acc -= 0.5 * f(mf);

    // f^{(r)}(x) = x^{−1−r} Σ_i c[i] log^i x
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut r = 0usize;
    for j in 1..=LIMIT_SUM_CORRECTIONS {
        while r < 2 * j - 1 {
            let next: Vec<f64> = (0..=n)
                .map(|i| {
                    -(1.0 + r as f64) * c[i]
                        + if i < n {
                            (i + 1) as f64 * c[i + 1]
                        } else {
                            0.0
                        }
                })
                .collect();
            c = next;
            r += 1;
        }
        let poly = c.iter().rev().fold(0.0, |a, &ci| a * ln_m + ci);
        let deriv = poly / mf.powi(r as i32 + 1);
        acc -= bernoulli_even(j) / factorial(2 * j as u32) * deriv;
    }
    acc
}

fn eta_recursion(gamma: &[f64]) -> Vec<f64> {
    let mut eta: Vec<f64> = Vec::with_capacity(gamma.len());
    for n in 0..gamma.len() {
        let mut inner = (n as f64 + 1.0) * gamma[n] / factorial(n as u32);
        for k in 0..n {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            inner += sign / factorial((n - k - 1) as u32) * eta[k] * gamma[n - k - 1];
        }
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        eta.push(sign * inner);
    }
    eta
}

/// Stirling number of the second kind `S(j, k)`.
///
/// Exact in `u128`; fails with [`Error::OrderOverflow`] once the values no
/// longer fit (around `j = 40`).
pub fn stirling2(j: usize, k: usize) -> Result<u128> {
    if k > j {
        return Ok(0);
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=j {
        for kk in (1..=k.min(i)).rev() {
            row[kk] = (kk as u128)
                .checked_mul(row[kk])
                .and_then(|v| v.checked_add(row[kk - 1]))
                .ok_or(Error::OrderOverflow {
                    requested: j,
                    max: i - 1,
                })?;
        }
        row[0] = 0;
    }
    Ok(row[k])
}

/// `Li_{−j}(z) = Σ_{ℓ≥1} ℓ^j z^ℓ` for `|z| < 1`, through the closed form
/// `Σ_{k=0}^{j} k! S(j+1, k+1) (z/(1−z))^{k+1}`.
pub fn polylog_neg(j: usize, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(domain(format!(
            "polylog_neg requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let w = z / (1.0 - z);
    let mut pow = w;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=j {
        acc += pow * (factorial(k as u32) * stirling2(j + 1, k + 1)? as f64);
        pow *= w;
    }
    Ok(acc)
}
