//! The polynomial families P, Q and the arithmetic weights A, B, G that
//! appear in the derivatives of F at α = 0.

use num_complex::Complex64;

use crate::arith::{euler_phi, omega, prime_divisors, prime_power};
use crate::constants::{polylog_neg, ExpansionTable};
use crate::error::{domain, Error, Result};
use crate::numeric::{binomial, factorial, Polynomial};

fn check_order(m: usize) -> Result<()> {
    let max = ExpansionTable::shared().max_order();
    if m >= max {
        return Err(Error::OrderOverflow {
            requested: m,
            max: max - 1,
        });
    }
    Ok(())
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Monic `P_{m+1}(x) = x^{m+1} + (−1)^{m+1}(m+1)! Σ_{u≤m} (−1)^u x^u/u! (1 − Σ_{v≤m−u} γ_v/v!)`.
pub fn poly_p(m: usize) -> Result<Polynomial> {
    check_order(m)?;
    let table = ExpansionTable::shared();
    let lead = sign(m + 1) * factorial(m as u32 + 1);
    let mut coeffs = vec![0.0; m + 2];
    for u in 0..=m {
        let mut inner = 1.0;
        for v in 0..=m - u {
            inner -= table.stieltjes(v)? / factorial(v as u32);
        }
        coeffs[u] = lead * sign(u) / factorial(u as u32) * inner;
    }
    coeffs[m + 1] = 1.0;
    Ok(Polynomial::new(coeffs))
}

/// Monic `Q_{m+1}(x) = x^{m+1} + (−1)^{m+1}(m+1)! Σ_{u≤m} (−1)^u η_{m−u} x^u/u!`.
pub fn poly_q(m: usize) -> Result<Polynomial> {
    check_order(m)?;
    let table = ExpansionTable::shared();
    let lead = sign(m + 1) * factorial(m as u32 + 1);
    let mut coeffs = vec![0.0; m + 2];
    for u in 0..=m {
        coeffs[u] = lead * sign(u) * table.eta(m - u)? / factorial(u as u32);
    }
    coeffs[m + 1] = 1.0;
    Ok(Polynomial::new(coeffs))
}

/// `G_u(k) = (−1)^u [α^u] Π_{p|k} (p^α − 1)`, i.e. the signed sum over
/// compositions `ℓ_1+…+ℓ_ω = u`, `ℓ_i ≥ 1`, of `Π log^{ℓ_i} p_i / ℓ_i!`.
pub fn script_g(u: usize, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(domain(format!("script_g requires k >= 2, got {k}")));
    }
    let primes = prime_divisors(k);
    if u < primes.len() {
        return Ok(0.0);
    }
    let mut product = vec![0.0; u + 1];
    product[0] = 1.0;
    for p in primes {
        let lp = (p as f64).ln();
        let factor: Vec<f64> = (0..=u)
            .map(|l| {
                if l == 0 {
                    0.0
                } else {
                    lp.powi(l as i32) / factorial(l as u32)
                }
            })
            .collect();
        let mut next = vec![0.0; u + 1];
        for (i, &a) in product.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in factor.iter().enumerate().take(u + 1 - i) {
                next[i + j] += a * b;
            }
        }
        product = next;
    }
    Ok(sign(u) * product[u])
}

/// `A_m(h, k)`: nonzero only when `k = p^a` is a prime power, where it is
/// `log^m h log p + Σ_{u≤m} C(m,u) log^{m−u} h log^{u+1} p Li_{−u}(1/p)`.
pub fn a_m(m: usize, h: u64, k: u64) -> Result<f64> {
    if h == 0 || k < 2 {
        return Err(domain(format!(
            "a_m requires h >= 1 and k >= 2, got h = {h}, k = {k}"
        )));
    }
    let Some((p, _)) = prime_power(k) else {
        return Ok(0.0);
    };
    let lh = (h as f64).ln();
    let lp = (p as f64).ln();
    let mut acc = lh.powi(m as i32) * lp;
    let inv_p = Complex64::new(1.0 / p as f64, 0.0);
    for u in 0..=m {
        acc += binomial(m as u32, u as u32)
            * lh.powi((m - u) as i32)
            * lp.powi(u as i32 + 1)
            * polylog_neg(u, inv_p)?.re;
    }
    Ok(acc)
}

/// `B_m(k, T)`; zero when `ω(k) ≥ m + 2`.
pub fn b_m(m: usize, k: u64, t: f64) -> Result<f64> {
    if k < 2 {
        return Err(domain(format!("b_m requires k >= 2, got {k}")));
    }
    if !(t > 0.0) {
        return Err(domain(format!("b_m requires T > 0, got {t}")));
    }
    check_order(m)?;
    let w = omega(k)? as usize;
    if w >= m + 2 {
        return Ok(0.0);
    }
    let table = ExpansionTable::shared();
    let log_tk = (t / (2.0 * std::f64::consts::PI * k as f64)).ln();
    let mut acc = 0.0;
    for u1 in w.saturating_sub(1)..=m {
        let g = script_g(u1 + 1, k)?;
        for u2 in 0..=m - u1 {
            let mut tail = 0.0;
            for j in -1..(m - u1 - u2) as i32 {
                tail += table.tilde_gamma(j)?;
            }
            acc += g * sign(u2) / factorial(u2 as u32) * log_tk.powi(u2 as i32) * tail;
        }
    }
    let k_over_phi = k as f64 / euler_phi(k)? as f64;
    Ok(factorial(m as u32) * k_over_phi * sign(w + 1) * acc)
}
