#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;

use zetamean::arith::{factorize, gcd, CoefficientSequence};
use zetamean::constants::stieltjes_gamma;
use zetamean::empirical::mollifier_coeffs;
use zetamean::mainterm::*;
use zetamean::numeric::{taylor_coefficients, Polynomial};
use zetamean::zeta::ZetaEngine;
use zetamean::Complex64;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn a1_case_formula(h: u64, k: u64) -> f64 {
    let f = factorize(k);
    if f.len() != 1 {
        return 0.0;
    }
    let p = f[0].0 as f64;
    p * (h as f64).ln() * p.ln() / (p - 1.0) + p * p.ln().powi(2) / (p - 1.0).powi(2)
}

/// ℬ_1 with the prime-power sign that the general definition produces.
fn b1_case_formula(k: u64, t: f64) -> f64 {
    let g0 = stieltjes_gamma(0).unwrap();
    let l = (t / (2.0 * PI)).ln();
    let f = factorize(k);
    match f.as_slice() {
        [(p, a)] => {
            let p = *p as f64;
            let lp = p.ln();
            -p / (p - 1.0) * (lp * (l - 1.0 + g0) - (*a as f64 - 0.5) * lp * lp)
        }
        [(p1, _), (p2, _)] => {
            let (p1, p2) = (*p1 as f64, *p2 as f64);
            p1 * p2 / ((p1 - 1.0) * (p2 - 1.0)) * p1.ln() * p2.ln()
        }
        _ => 0.0,
    }
}

#[test]
fn first_polynomials_match_closed_forms() {
    let g0 = stieltjes_gamma(0).unwrap();
    let g1 = stieltjes_gamma(1).unwrap();
    let p2 = [2.0 * (1.0 - g0 - g1), -2.0 * (1.0 - g0), 1.0];
    let q2 = [2.0 * (2.0 * g1 + g0 * g0), 2.0 * g0, 1.0];
    let p = poly_p(1).unwrap();
    let q = poly_q(1).unwrap();
    assert_eq!(p.coeffs().len(), 3);
    assert_eq!(q.coeffs().len(), 3);
    for i in 0..3 {
        assert!((p.coeffs()[i] - p2[i]).abs() < 1e-12, "P_2[{i}]");
        assert!((q.coeffs()[i] - q2[i]).abs() < 1e-12, "Q_2[{i}]");
    }
}

#[test]
fn polynomials_are_monic_of_degree_m_plus_one() {
    for m in 0..=8 {
        for poly in [poly_p(m).unwrap(), poly_q(m).unwrap()] {
            assert_eq!(poly.degree(), m + 1);
            assert!((poly.leading_coefficient() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn a1_matches_case_formula() {
    for k in 2..=100u64 {
        for h in 1..=50u64 {
            let got = a_m(1, h, k).unwrap();
            let want = a1_case_formula(h, k);
            assert!(
                (got - want).abs() < 1e-12 * (1.0 + want.abs()),
                "A_1({h},{k}): {got} vs {want}"
            );
        }
    }
}

#[test]
fn b1_matches_case_formula() {
    for t in [200.0, 1000.0] {
        for k in 2..=300u64 {
            let got = b_m(1, k, t).unwrap();
            let want = b1_case_formula(k, t);
            assert!(
                (got - want).abs() < 1e-12 * (1.0 + want.abs()),
                "B_1({k},{t}): {got} vs {want}"
            );
            if factorize(k).len() >= 3 {
                assert_eq!(got, 0.0);
            }
        }
    }
}

#[test]
fn integral_representation_agrees_on_sample() {
    let e = ZetaEngine::default();
    for alpha in [Complex64::new(0.05, 0.0), Complex64::new(0.03, 0.02)] {
        for (h, k) in [(1, 1), (2, 3), (4, 1)] {
            let direct = curly_f(alpha, h, k, 200.0, &e).unwrap();
            let integral =
                curly_f_via_z_derivative(alpha, h, k, 200.0, alpha.norm() / 8.0, &e).unwrap();
            assert!(
                rel(integral, direct) < 1e-6,
                "alpha={alpha} h={h} k={k}: {integral} vs {direct}"
            );
        }
    }
}

#[test]
fn closed_form_derivatives_match_cauchy_derivatives() {
    let e = ZetaEngine::default();
    for t in [200.0f64, 1000.0] {
        let r = 1.0 / (20.0 * t.ln());
        for h in 1..=6u64 {
            for k in 1..=6u64 {
                if gcd(h, k) != 1 {
                    continue;
                }
                let c = taylor_coefficients(
                    |a| curly_f(a, h, k, t, &e),
                    Complex64::new(0.0, 0.0),
                    r,
                    64,
                    3,
                )
                .unwrap();
                let mut fact = 1.0;
                for m in 1..=3usize {
                    fact *= m as f64;
                    let numeric = c[m] * fact;
                    let closed = f_derivative_closed_form(m, h, k, t).unwrap();
                    assert!(
                        (numeric.re - closed).abs() < 1e-5 * closed.abs().max(1.0)
                            && numeric.im.abs() < 1e-5 * closed.abs().max(1.0),
                        "m={m} h={h} k={k} T={t}: {numeric} vs {closed}"
                    );
                }
            }
        }
    }
}

fn linkage_coefficients() -> Vec<CoefficientSequence> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(CoefficientSequence::mobius(n).unwrap());
        out.push(mollifier_coeffs(n, &Polynomial::new(vec![0.0, 1.0])).unwrap());
    }
    out
}

#[test]
fn corollary_is_the_alpha_derivative_of_the_theorem() {
    let e = ZetaEngine::default();
    for t in [200.0f64, 1000.0] {
        let r = 1.0 / (20.0 * t.ln());
        for x in linkage_coefficients() {
            let c = taylor_coefficients(
                |a| theorem1_main_term(a, t, &x, &x, &e).map(|rep| rep.total),
                Complex64::new(0.0, 0.0),
                r,
                64,
                3,
            )
            .unwrap();
            let mut fact = 1.0;
            for m in 1..=3usize {
                fact *= m as f64;
                let numeric = c[m] * fact;
                let closed = corollary1_main_term(m, t, &x, &x).unwrap().total;
                assert!(
                    rel(numeric, closed) < 1e-6,
                    "m={m} T={t} x={}: {numeric} vs {closed}",
                    x.label()
                );
            }
        }
    }
}

#[test]
fn unit_coefficient_first_derivative_formula() {
    let g0 = stieltjes_gamma(0).unwrap();
    let g1 = stieltjes_gamma(1).unwrap();
    let d = CoefficientSequence::delta();
    for t in [200.0f64, 500.0, 2000.0] {
        let l = (t / (2.0 * PI)).ln();
        let formula = t / (4.0 * PI) * l * l
            + t / (2.0 * PI) * (g0 - 1.0) * l
            + t / (2.0 * PI) * (1.0 - g0 - g0 * g0 - 3.0 * g1);
        let got = corollary1_main_term(1, t, &d, &d).unwrap().total;
        assert!(
            rel(got, Complex64::new(formula, 0.0)) < 1e-12,
            "T={t}: {got} vs {formula}"
        );
    }
}

#[test]
fn first_derivative_pieces_match_case_formulas() {
    let t = 1000.0f64;
    let pre = t / (2.0 * PI);
    let l = (t / (2.0 * PI)).ln();
    let x = CoefficientSequence::from_real("x", &[1.0, -0.5, 0.25, 0.8]).unwrap();
    let y = CoefficientSequence::from_real("y", &[0.7, 0.3, -1.0, 0.5]).unwrap();
    let rep = corollary1_main_term(1, t, &x, &y).unwrap();
    let (xv, yv) = (|n: usize| x.get(n).re, |n: usize| y.get(n).re);
    let ln = |n: usize| (n as f64).ln();
    let p2 = poly_p(1).unwrap();
    let q2 = poly_q(1).unwrap();
    let mut poly = 0.0;
    let mut log_piece = 0.0;
    for n in 1..=4usize {
        let divs: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let one_x: f64 = divs.iter().map(|&d| xv(d)).sum();
        let q_x: f64 = divs.iter().map(|&d| q2.eval(ln(n / d)) * xv(d)).sum();
        let log_x: f64 = divs.iter().map(|&d| ln(n / d) * xv(d)).sum();
        poly += (p2.eval(l) * one_x - q_x) * yv(n) / n as f64;
        log_piece += log_x * yv(n) / n as f64;
    }
    let poly = poly * t / (4.0 * PI);
    let log_piece = -pre * (t / (2.0 * PI * std::f64::consts::E)).ln() * log_piece;
    assert!((rep.piece("polynomial").unwrap().re - poly).abs() < 1e-10 * poly.abs());
    assert!((rep.piece("log_convolution").unwrap().re - log_piece).abs() < 1e-10 * log_piece.abs());
    let mut off = 0.0;
    for g in 1..=4usize {
        for h in 1..=4 / g {
            for k in 2..=4 / g {
                if gcd(h as u64, k as u64) == 1 {
                    off += yv(g * h) * xv(g * k) / (g * k * h) as f64
                        * (a1_case_formula(h as u64, k as u64) + b1_case_formula(k as u64, t));
                }
            }
        }
    }
    let off = pre * off;
    assert!((rep.piece("prime_factor_sum").unwrap().re - off).abs() < 1e-10 * off.abs());
}

#[test]
fn theorem_matches_brute_force_for_small_support() {
    let e = ZetaEngine::default();
    let t = 500.0f64;
    let alpha = Complex64::new(0.008, 0.004);
    let x = CoefficientSequence::mobius(3).unwrap();
    let pre = t / (2.0 * PI);
    let mut expected = Complex64::new(0.0, 0.0);
    for n in 1..=3usize {
        let y = x.get(n) / n as f64;
        for d in (1..=n).filter(|d| n % d == 0) {
            let s = (-alpha * ((n / d) as f64).ln()).exp() * x.get(d);
            expected += s * y * pre * (t / (2.0 * PI * std::f64::consts::E)).ln();
        }
        for a in (1..=n).filter(|a| n % a == 0) {
            let lambda = match a {
                2 | 3 => (a as f64).ln(),
                _ => 0.0,
            };
            for d in (1..=n / a).filter(|d| (n / a) % d == 0) {
                let s = (-alpha * ((n / a / d) as f64).ln()).exp() * x.get(d);
                expected -= lambda * s * y * pre;
            }
        }
    }
    for g in 1..=3usize {
        for h in 1..=3 / g {
            for k in 1..=3 / g {
                if gcd(h as u64, k as u64) == 1 {
                    expected += x.get(g * h) * x.get(g * k) / (g * k * h) as f64
                        * curly_f(alpha, h as u64, k as u64, t, &e).unwrap();
                }
            }
        }
    }
    let got = theorem1_main_term(alpha, t, &x, &x, &e).unwrap().total;
    assert!(rel(got, expected) < 1e-12, "{got} vs {expected}");
}

#[test]
fn shifts_beyond_the_height_bound_are_rejected() {
    let e = ZetaEngine::default();
    let d = CoefficientSequence::delta();
    assert!(theorem1_main_term(Complex64::new(0.5, 0.0), 1000.0, &d, &d, &e).is_err());
    assert!(corollary1_main_term(0, 1000.0, &d, &d).is_err());
    assert!(corollary1_main_term(1, 1.0, &d, &d).is_err());
}
