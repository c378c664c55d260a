//! Exact arithmetic functions and truncated Dirichlet convolution.
//!
//! Factorizations come from a smallest-prime-factor sieve covering
//! `n ≤ SIEVE_LIMIT`, built on first use; larger arguments fall back to
//! trial division.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Upper end of the shared smallest-prime-factor sieve.
pub const SIEVE_LIMIT: u64 = 1 << 21;

fn sieve() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

/// Prime factorization as `(p, a)` pairs with increasing `p`. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64| match out.last_mut() {
        Some((q, a)) if *q == p => *a += 1,
        _ => out.push((p, 1)),
    };
    let mut m = n;
    if m <= SIEVE_LIMIT {
        let spf = sieve();
        while m > 1 {
            let p = spf[m as usize] as u64;
            push(p);
            m /= p;
        }
        return out;
    }
    let mut p = 2u64;
    while p * p <= m {
        while m.is_multiple_of(p) {
            push(p);
            m /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        push(m);
    }
    out
}

/// Distinct prime divisors of `n` in increasing order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, a) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Returns `Some((p, a))` when `n = p^a` with `a ≥ 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, a)] => Some((*p, *a)),
        _ => None,
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn check_positive(n: u64, what: &str) -> Result<()> {
    if n == 0 {
        Err(domain(format!("{what} is defined for n >= 1, got 0")))
    } else {
        Ok(())
    }
}

/// Möbius function μ(n).
pub fn mobius(n: u64) -> Result<i8> {
    check_positive(n, "mobius")?;
    let f = factorize(n);
    if f.iter().any(|&(_, a)| a > 1) {
        return Ok(0);
    }
    Ok(if f.len().is_multiple_of(2) { 1 } else { -1 })
}

/// Von Mangoldt function Λ(n).
pub fn von_mangoldt(n: u64) -> Result<f64> {
    check_positive(n, "von_mangoldt")?;
    Ok(prime_power(n).map_or(0.0, |(p, _)| (p as f64).ln()))
}

/// Euler's totient φ(n).
pub fn euler_phi(n: u64) -> Result<u64> {
    check_positive(n, "euler_phi")?;
    Ok(factorize(n)
        .into_iter()
        .map(|(p, a)| (p - 1) * p.pow(a - 1))
        .product())
}

/// Number of distinct prime factors ω(n).
pub fn omega(n: u64) -> Result<u32> {
    check_positive(n, "omega")?;
    Ok(factorize(n).len() as u32)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// k-fold divisor function τ_k(n): ordered k-tuples with product n.
pub fn tau_k(n: u64, k: u32) -> Result<u64> {
    check_positive(n, "tau_k")?;
    if k == 0 {
        return Err(domain("tau_k requires k >= 1"));
    }
    let k = k as u64;
    Ok(factorize(n)
        .into_iter()
        .map(|(_, a)| binomial(a as u64 + k - 1, k - 1))
        .product())
}

/// Ordered k-tuples `(d_1, …, d_k)` with `Π d_i = n` and every `d_i ≤ ξ`.
pub fn truncated_tau(n: u64, k: u32, xi: f64) -> Result<u64> {
    check_positive(n, "truncated_tau")?;
    if k == 0 {
        return Err(domain("truncated_tau requires k >= 1"));
    }
    Ok(TruncatedTau::new(xi).count(n, k))
}

/// Memoized recursive divisor descent for [`truncated_tau`].
#[derive(Debug, Clone)]
pub struct TruncatedTau {
    cap: u64,
    memo: HashMap<(u64, u32), u64>,
}

impl TruncatedTau {
    pub fn new(xi: f64) -> Self {
        let cap = if xi.is_finite() && xi >= 1.0 {
            xi.floor() as u64
        } else if xi.is_infinite() && xi > 0.0 {
            u64::MAX
        } else {
            0
        };
        Self {
            cap,
            memo: HashMap::new(),
        }
    }

    pub fn count(&mut self, n: u64, k: u32) -> u64 {
        if k == 0 {
            return u64::from(n == 1);
        }
        if k == 1 {
            return u64::from(n <= self.cap);
        }
        if let Some(&v) = self.memo.get(&(n, k)) {
            return v;
        }
        let mut total = 0u64;
        for d in divisors(n) {
            if d > self.cap {
                break;
            }
            total += self.count(n / d, k - 1);
        }
        self.memo.insert((n, k), total);
        total
    }
}

/// Finitely supported weights `c(1), …, c(N)` of a Dirichlet polynomial.
///
/// `get(n)` is zero for `n > N` and for `n = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    label: String,
    values: Vec<Complex64>,
}

impl CoefficientSequence {
    /// `values[0]` is `c(1)`. The support bound is `values.len()`.
    pub fn new(label: impl Into<String>, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("coefficient sequence needs support bound N >= 1"));
        }
        Ok(Self {
            label: label.into(),
            values,
        })
    }

    pub fn from_real(label: impl Into<String>, values: &[f64]) -> Result<Self> {
        Self::new(
            label,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_fn(
        label: impl Into<String>,
        bound: usize,
        mut f: impl FnMut(u64) -> Complex64,
    ) -> Result<Self> {
        Self::new(label, (1..=bound as u64).map(&mut f).collect())
    }

    /// δ_1: `c(1) = 1` and nothing else, with N = 1.
    pub fn delta() -> Self {
        Self {
            label: "delta".into(),
            values: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn ones(bound: usize) -> Result<Self> {
        Self::from_fn("ones", bound, |_| Complex64::new(1.0, 0.0))
    }

    /// μ(n) for n ≤ N.
    pub fn mobius(bound: usize) -> Result<Self> {
        Self::from_fn(format!("truncated_mobius(N={bound})"), bound, |n| {
            Complex64::new(f64::from(mobius(n).unwrap_or(0)), 0.0)
        })
    }

    /// Λ(n) for n ≤ N.
    pub fn von_mangoldt(bound: usize) -> Result<Self> {
        Self::from_fn("von_mangoldt", bound, |n| {
            Complex64::new(von_mangoldt(n).unwrap_or(0.0), 0.0)
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn support_bound(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.values.get(n - 1).copied().unwrap_or_default()
    }

    /// `(n, c(n))` for `1 ≤ n ≤ N`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (i + 1, v))
    }

    /// Same values, padded with zeros or cut to a new support bound.
    pub fn resized(&self, bound: usize) -> Result<Self> {
        Self::from_fn(self.label.clone(), bound, |n| self.get(n as usize))
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }
}

/// `(a ∗ b)(n) = Σ_{d|n} a(d) b(n/d)` for `n ≤ bound`.
pub fn dirichlet_convolve(
    a: &CoefficientSequence,
    b: &CoefficientSequence,
    bound: usize,
) -> Result<CoefficientSequence> {
    if bound == 0 {
        return Err(domain("convolution bound must be >= 1"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); bound];
    for d in 1..=bound.min(a.support_bound()) {
        let ad = a.get(d);
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        let emax = (bound / d).min(b.support_bound());
        for e in 1..=emax {
            out[d * e - 1] += ad * b.get(e);
        }
    }
    CoefficientSequence::new(format!("({})*({})", a.label, b.label), out)
}

/// `n ↦ n^{exponent}` on `n ≤ bound`, principal branch (bases are positive).
pub fn power_sequence(exponent: Complex64, bound: usize) -> Result<CoefficientSequence> {
    CoefficientSequence::from_fn(format!("n^({exponent})"), bound, |n| {
        if n == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            (exponent * (n as f64).ln()).exp()
        }
    })
}

/// `n ↦ (log n)^order` on `n ≤ bound`; `0^0 = 1` at `n = 1`.
pub fn log_power_sequence(order: u32, bound: usize) -> Result<CoefficientSequence> {
    CoefficientSequence::from_fn(format!("log^{order}"), bound, |n| {
        Complex64::new((n as f64).ln().powi(order as i32), 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn von_mangoldt_examples() {
        assert_eq!(von_mangoldt(8).unwrap(), 2f64.ln());
        assert_eq!(von_mangoldt(6).unwrap(), 0.0);
        assert_eq!(von_mangoldt(7).unwrap(), 7f64.ln());
        assert_eq!(von_mangoldt(1).unwrap(), 0.0);
        assert!(von_mangoldt(0).is_err());
    }

    #[test]
    fn phi_and_omega_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(13).unwrap(), 12);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert!(euler_phi(0).is_err());
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(omega(12).unwrap(), 2);
        assert_eq!(omega(30).unwrap(), 3);
        assert!(omega(0).is_err());
    }

    #[test]
    fn tau_k_examples() {
        assert_eq!(tau_k(1, 5).unwrap(), 1);
        assert_eq!(tau_k(6, 2).unwrap(), 4);
        assert_eq!(tau_k(4, 3).unwrap(), 6);
        assert!(tau_k(4, 0).is_err());
    }

    #[test]
    fn truncated_tau_examples() {
        assert_eq!(truncated_tau(1, 3, 1.0).unwrap(), 1);
        assert_eq!(truncated_tau(6, 2, 2.0).unwrap(), 0);
        assert_eq!(truncated_tau(4, 2, 2.0).unwrap(), 1);
        assert_eq!(truncated_tau(12, 2, 12.0).unwrap(), tau_k(12, 2).unwrap());
    }

    #[test]
    fn factorization_beyond_sieve() {
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factorize(n), vec![(999_983, 1), (1_000_003, 1)]);
        assert_eq!(factorize(SIEVE_LIMIT + 2), factorize_naive(SIEVE_LIMIT + 2));
    }

    fn factorize_naive(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while n > 1 {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            if a > 0 {
                out.push((p, a));
            }
            p += 1;
        }
        out
    }

    #[test]
    fn convolution_examples() {
        let mu = CoefficientSequence::mobius(50).unwrap();
        let one = CoefficientSequence::ones(50).unwrap();
        let e = dirichlet_convolve(&mu, &one, 50).unwrap();
        assert_eq!(e.get(1), c(1.0));
        for n in 2..=50 {
            assert_eq!(e.get(n), c(0.0), "n = {n}");
        }
        let tau2 = dirichlet_convolve(&one, &one, 50).unwrap();
        assert_eq!(tau2.get(6), c(4.0));

        let log = log_power_sequence(1, 50).unwrap();
        let lambda = dirichlet_convolve(&mu, &log, 50).unwrap();
        assert!((lambda.get(8).re - 2f64.ln()).abs() < 1e-14);
        assert!(dirichlet_convolve(&mu, &one, 0).is_err());
    }

    #[test]
    fn power_sequence_examples() {
        let zero = power_sequence(c(0.0), 5).unwrap();
        assert!(zero.values().iter().all(|&v| v == c(1.0)));
        let inv = power_sequence(c(-1.0), 5).unwrap();
        assert!((inv.get(2) - c(0.5)).norm() < 1e-15);
        let phase =
            power_sequence(Complex64::new(0.0, std::f64::consts::PI / 2f64.ln()), 5).unwrap();
        assert!((phase.get(2) - c(-1.0)).norm() < 1e-14);
    }

    #[test]
    fn log_power_examples() {
        let l0 = log_power_sequence(0, 4).unwrap();
        assert!(l0.values().iter().all(|&v| v == c(1.0)));
        let l1 = log_power_sequence(1, 4).unwrap();
        assert_eq!(l1.get(1), c(0.0));
        let l2 = log_power_sequence(2, 4).unwrap();
        assert_eq!(l2.get(4), c(4f64.ln().powi(2)));
    }

    #[test]
    fn sequence_support() {
        let s = CoefficientSequence::from_real("x", &[1.0, 2.0]).unwrap();
        assert_eq!(s.get(0), c(0.0));
        assert_eq!(s.get(3), c(0.0));
        assert_eq!(s.resized(4).unwrap().support_bound(), 4);
        assert!(CoefficientSequence::new("empty", vec![]).is_err());
    }
}
