use proptest::prelude::*;
use zetamean::constants::*;
use zetamean::numeric::{factorial, taylor_coefficients};
use zetamean::summation::NeumaierSum;
use zetamean::zeta::{zeta, zeta_log_derivative, EvaluationOptions};
use zetamean::Complex64;

fn opts() -> EvaluationOptions {
    EvaluationOptions::default()
}

/// `Σ_{k≤M} log^u k / k - log^{u+1} M/(u+1)` with the endpoint corrections.
fn limit_sum(u: i32, m: u64) -> f64 {
    let mut acc = NeumaierSum::new();
    for k in 1..=m {
        let l = (k as f64).ln();
        acc.add(l.powi(u) / k as f64);
    }
    let mf = m as f64;
    let l = mf.ln();
    let f = l.powi(u) / mf;
    let df = if u == 0 {
        -1.0 / (mf * mf)
    } else {
        (u as f64 * l.powi(u - 1) - l.powi(u)) / (mf * mf)
    };
    acc.value() - l.powi(u + 1) / (u + 1) as f64 - f / 2.0 - df / 12.0
}

#[test]
fn stieltjes_matches_limit_sum() {
    for u in 0..2 {
        let oracle = limit_sum(u, 1_000_000);
        let got = stieltjes_gamma(u as usize).unwrap();
        assert!((got - oracle).abs() < 1e-12, "gamma_{u}: {got} vs {oracle}");
    }
}

#[test]
fn stieltjes_matches_laurent_coefficients() {
    let one = Complex64::new(1.0, 0.0);
    let f = |s: Complex64| {
        if (s - one).norm() < 1e-12 {
            Ok(one)
        } else {
            zeta(s, &opts()).map(|z| z * (s - one))
        }
    };
    let c = taylor_coefficients(f, one, 5.0, 256, 10).unwrap();
    for u in 0..=8usize {
        let from_circle = c[u + 1].re * factorial(u as u32) * if u % 2 == 0 { 1.0 } else { -1.0 };
        let got = stieltjes_gamma(u).unwrap();
        assert!(
            (got - from_circle).abs() < 1e-10 * (1.0 + got.abs()),
            "gamma_{u}: {got} vs {from_circle}"
        );
    }
}

#[test]
fn eta_low_orders_follow_from_stieltjes() {
    let g0 = stieltjes_gamma(0).unwrap();
    let g1 = stieltjes_gamma(1).unwrap();
    assert!((eta(0).unwrap() + g0).abs() < 1e-12);
    assert!((eta(1).unwrap() - (2.0 * g1 + g0 * g0)).abs() < 1e-12);
}

#[test]
fn laurent_series_reconstructs_zeta() {
    for a in [0.05, 0.1, -0.08] {
        let series: f64 = (-1..=10)
            .map(|u| tilde_gamma(u).unwrap() * f64::powi(a, u))
            .sum();
        let z = zeta(Complex64::new(1.0 - a, 0.0), &opts()).unwrap().re;
        assert!(
            ((series - z) / z).abs() < 1e-8,
            "alpha = {a}: {series} vs {z}"
        );
    }
}

#[test]
fn eta_series_reconstructs_log_derivative() {
    for a in [Complex64::new(0.05, 0.0), Complex64::new(0.0, 0.1)] {
        let mut series = -a.inv();
        for n in 0..=8 {
            series -= a.powi(n as i32) * eta(n).unwrap();
        }
        let l = zeta_log_derivative(Complex64::new(1.0, 0.0) + a, &opts()).unwrap();
        assert!(
            ((series - l) / l).norm() < 1e-6,
            "alpha = {a}: {series} vs {l}"
        );
    }
}

#[test]
fn stirling_numbers_of_the_second_kind() {
    assert_eq!(stirling2(0, 0).unwrap(), 1);
    assert_eq!(stirling2(5, 0).unwrap(), 0);
    assert_eq!(stirling2(3, 5).unwrap(), 0);
    assert_eq!(stirling2(10, 3).unwrap(), 9330);
    for j in 1..25 {
        for k in 1..=j {
            let lhs = stirling2(j, k).unwrap();
            let rhs = k as u128 * stirling2(j - 1, k).unwrap() + stirling2(j - 1, k - 1).unwrap();
            assert_eq!(lhs, rhs, "S({j},{k})");
        }
    }
}

#[test]
fn table_rejects_out_of_range_orders() {
    let t = ExpansionTable::new(6).unwrap();
    assert!(t.stieltjes(7).is_err());
    assert!(t.eta(7).is_err());
    assert!(t.tilde_gamma(-2).is_err());
    assert_eq!(t.tilde_gamma(-1).unwrap(), -1.0);
    assert!(polylog_neg(2, Complex64::new(1.0, 0.0)).is_err());
}

proptest! {
    #[test]
    fn polylog_matches_power_series(j in 0usize..6, r in 0.0f64..0.6, phi in 0.0f64..std::f64::consts::TAU) {
        let z = Complex64::from_polar(r, phi);
        let mut series = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        for n in 1..400u32 {
            zn *= z;
            series += zn * (n as f64).powi(j as i32);
        }
        let got = polylog_neg(j, z).unwrap();
        prop_assert!((got - series).norm() < 1e-10 * (1.0 + series.norm()), "{got} vs {series}");
    }
}
